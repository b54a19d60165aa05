// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_EVALUATION_ABLATION_HPP
#define SMAJUDGE_EVALUATION_ABLATION_HPP

#include <array>
#include <vector>

#include <nlohmann/json.hpp>

#include "smajudge/evaluation/evaluate.hpp"
#include "smajudge/evaluation/variants.hpp"

namespace smajudge {

inline constexpr std::array<Variant, 4> kAblationVariants = {Variant::full, Variant::no_attention, Variant::no_dependency,
                                                             Variant::separate_components};

struct AblationEntry {
    Variant variant = Variant::full;
    std::vector<std::uint64_t> seeds;
    std::vector<std::array<MetricsReport, kLossCount>> runs;  // per seed, test split
    double mean_accuracy = 0, mean_precision = 0, mean_recall = 0, mean_f1 = 0;  // ruling
};

/// Trains and evaluates every variant once per seed on the same split.
/// Each seed drives both initialisation and training.
inline std::vector<AblationEntry> run_ablation(const PreparedData& data, const TrainConfig& config, const std::vector<std::uint64_t>& seeds,
                                               const TaskGraph& graph = TaskGraph::standard(),
                                               const std::vector<Variant>& variants = {kAblationVariants.begin(), kAblationVariants.end()}) {
    if (seeds.empty() || variants.empty()) throw ConfigError("ablation needs at least one seed and one variant");
    if (data.test.empty()) throw DataError("ablation needs a non-empty test split");
    const ModelDims dims = model_dims(config, data.vocab, data.labels);
    std::vector<AblationEntry> out;
    for (Variant v : variants) {
        AblationEntry e;
        e.variant = v;
        for (std::uint64_t seed : seeds) {
            TrainConfig c = config;
            c.seed = seed;
            TrainResult r = train(data.train, data.validation, c, build_variant(dims, v, seed, graph));
            const EvaluationReport report = evaluate_model(r.params, dims, data.test, {c.finetune_steps, c.learning_rate});
            e.seeds.push_back(seed);
            e.runs.push_back(report.tasks);
        }
        const auto k = static_cast<double>(e.runs.size());
        for (const auto& run : e.runs) {
            e.mean_accuracy += run[3].accuracy / k;
            e.mean_precision += run[3].precision / k;
            e.mean_recall += run[3].recall / k;
            e.mean_f1 += run[3].f1 / k;
        }
        log::info(std::string("ablation ") + variant_name(v) + " mean ruling f1 " + std::to_string(e.mean_f1));
        out.push_back(std::move(e));
    }
    return out;
}

inline nlohmann::ordered_json to_json(const std::vector<AblationEntry>& entries) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json runs = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < e.seeds.size(); ++i) {
            nlohmann::ordered_json tasks;
            for (std::size_t t = 0; t < kLossCount; ++t) tasks[kLossNames[t]] = to_json(e.runs[i][t]);
            runs.push_back({{"seed", e.seeds[i]}, {"tasks", tasks}});
        }
        arr.push_back({{"variant", variant_name(e.variant)},
                       {"ruling", {{"acc", e.mean_accuracy}, {"mp", e.mean_precision}, {"mr", e.mean_recall}, {"f1", e.mean_f1}}},
                       {"runs", runs}});
    }
    return arr;
}

}  // namespace smajudge

#endif  // SMAJUDGE_EVALUATION_ABLATION_HPP
