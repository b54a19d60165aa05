// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_CLI_RUN_CONFIG_HPP
#define SMAJUDGE_CLI_RUN_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smajudge/evaluation/sensitivity.hpp"
#include "smajudge/training/config.hpp"

namespace smajudge {

/// Everything a CLI run needs besides its subcommand. Read from a JSON file;
/// flags override individual fields afterwards.
struct RunConfig {
    TrainConfig train;
    DataConfig data;
    std::string corpus;
    std::string checkpoint;
    std::string output;
    Variant variant = Variant::full;
    TaskGraph graph = TaskGraph::standard();
    std::vector<double> fractions = default_fractions();
    std::vector<std::uint64_t> seeds = {1};
};

inline void validate(const RunConfig& c) {
    validate(c.train);
    require_valid(c.graph);
    if (c.data.split.train < 0 || c.data.split.validation < 0 || c.data.split.test < 0 ||
        c.data.split.train + c.data.split.validation + c.data.split.test > 1.0 + 1e-12) {
        throw ConfigError("split ratios must be non-negative and sum to at most 1");
    }
    if (c.data.vocab_min_count == 0) throw ConfigError("vocab_min_count must be at least 1");
    if (c.fractions.empty()) throw ConfigError("fractions must not be empty");
    for (double f : c.fractions) {
        if (!(f > 0 && f <= 1)) throw ConfigError("every fraction must lie in (0, 1]");
    }
    if (c.seeds.empty()) throw ConfigError("seeds must not be empty");
}

inline nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["train"] = to_json(c.train);
    j["data"] = to_json(c.data);
    j["corpus"] = c.corpus;
    j["checkpoint"] = c.checkpoint;
    j["output"] = c.output;
    j["variant"] = variant_name(c.variant);
    j["task_graph"] = task_graph_to_json(c.graph);
    j["fractions"] = c.fractions;
    j["seeds"] = c.seeds;
    return j;
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    detail::reject_unknown(j, {"train", "data", "corpus", "checkpoint", "output", "variant", "task_graph", "fractions", "seeds"},
                           "run config");
    RunConfig c;
    if (j.contains("train")) c.train = train_config_from_json(j.at("train"));
    if (j.contains("data")) c.data = data_config_from_json(j.at("data"));
    detail::read_key(j, "corpus", c.corpus);
    detail::read_key(j, "checkpoint", c.checkpoint);
    detail::read_key(j, "output", c.output);
    if (j.contains("variant")) {
        std::string v;
        detail::read_key(j, "variant", v);
        c.variant = variant_from_name(v);
    }
    if (j.contains("task_graph")) c.graph = task_graph_from_json(j.at("task_graph"));
    detail::read_key(j, "fractions", c.fractions);
    detail::read_key(j, "seeds", c.seeds);
    validate(c);
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return run_config_from_json(j);
}

/// "1,0.8,0.6" -> {1, 0.8, 0.6}.
inline std::vector<double> parse_fraction_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("bad fraction \"" + item + "\"");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace smajudge

#endif  // SMAJUDGE_CLI_RUN_CONFIG_HPP
