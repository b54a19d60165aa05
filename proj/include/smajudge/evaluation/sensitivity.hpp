// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_EVALUATION_SENSITIVITY_HPP
#define SMAJUDGE_EVALUATION_SENSITIVITY_HPP

#include <cmath>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "smajudge/evaluation/evaluate.hpp"
#include "smajudge/evaluation/variants.hpp"

namespace smajudge {

inline const std::vector<double>& default_fractions() {
    static const std::vector<double> f = {1.0, 0.8, 0.6, 0.4};
    return f;
}

/// Leading floor(fraction * n) documents; smaller fractions give prefixes
/// of larger ones.
inline std::vector<EncodedDocument> train_prefix(const std::vector<EncodedDocument>& train, double fraction) {
    if (!(fraction > 0 && fraction <= 1)) throw ConfigError("training fraction must lie in (0, 1]");
    const auto n = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(train.size()) + 1e-9));
    if (n == 0) throw DataError("training fraction " + std::to_string(fraction) + " leaves an empty train set");
    return {train.begin(), train.begin() + static_cast<std::ptrdiff_t>(n)};
}

struct SensitivityPoint {
    double fraction = 0;
    std::size_t train_size = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<MetricsReport> ruling;  // per seed, test split
    double mean_accuracy = 0, mean_precision = 0, mean_recall = 0, mean_f1 = 0;
};

struct SensitivityRequest {
    std::vector<double> fractions = default_fractions();
    std::vector<std::uint64_t> seeds = {1};
    Variant variant = Variant::full;
    TaskGraph graph = TaskGraph::standard();
};

/// One training run per (fraction, seed) on a prefix of the train split,
/// evaluated on the full test split. The seed replaces config.seed.
inline std::vector<SensitivityPoint> run_sensitivity(const PreparedData& data, const TrainConfig& config, const SensitivityRequest& req) {
    if (req.fractions.empty() || req.seeds.empty()) throw ConfigError("sensitivity needs at least one fraction and one seed");
    if (data.test.empty()) throw DataError("sensitivity needs a non-empty test split");
    for (double f : req.fractions) train_prefix(data.train, f);
    const ModelDims dims = model_dims(config, data.vocab, data.labels);
    std::vector<SensitivityPoint> out;
    for (double f : req.fractions) {
        SensitivityPoint p;
        p.fraction = f;
        const auto subset = train_prefix(data.train, f);
        p.train_size = subset.size();
        for (std::uint64_t seed : req.seeds) {
            TrainConfig c = config;
            c.seed = seed;
            TrainResult r = train(subset, data.validation, c, build_variant(dims, req.variant, seed, req.graph));
            const EvaluationReport e = evaluate_model(r.params, dims, data.test, {c.finetune_steps, c.learning_rate});
            p.seeds.push_back(seed);
            p.ruling.push_back(e.tasks[3]);
        }
        const auto k = static_cast<double>(p.ruling.size());
        for (const auto& m : p.ruling) {
            p.mean_accuracy += m.accuracy / k;
            p.mean_precision += m.precision / k;
            p.mean_recall += m.recall / k;
            p.mean_f1 += m.f1 / k;
        }
        log::info("sensitivity fraction " + std::to_string(f) + " mean f1 " + std::to_string(p.mean_f1));
        out.push_back(std::move(p));
    }
    return out;
}

inline nlohmann::ordered_json to_json(const std::vector<SensitivityPoint>& points) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : points) {
        nlohmann::ordered_json runs = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < p.seeds.size(); ++i) runs.push_back({{"seed", p.seeds[i]}, {"ruling", to_json(p.ruling[i])}});
        arr.push_back({{"fraction", p.fraction},
                       {"train_size", p.train_size},
                       {"acc", p.mean_accuracy},
                       {"mp", p.mean_precision},
                       {"mr", p.mean_recall},
                       {"f1", p.mean_f1},
                       {"runs", runs}});
    }
    return arr;
}

inline std::string sensitivity_csv(const std::vector<SensitivityPoint>& points) {
    std::ostringstream os;
    os.precision(17);
    os << "fraction,train_size,acc,mp,mr,f1\n";
    for (const auto& p : points) {
        os << p.fraction << ',' << p.train_size << ',' << p.mean_accuracy << ',' << p.mean_precision << ',' << p.mean_recall << ','
           << p.mean_f1 << '\n';
    }
    return os.str();
}

}  // namespace smajudge

#endif  // SMAJUDGE_EVALUATION_SENSITIVITY_HPP
