// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_TRAINING_CONFIG_HPP
#define SMAJUDGE_TRAINING_CONFIG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "smajudge/corpus/split.hpp"
#include "smajudge/numerics/error.hpp"

namespace smajudge {

/// Model construction rule. `full` is the standard model; the others are the
/// ablations compared against it.
enum class Variant { full, no_attention, no_dependency, separate_components };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::full: return "full";
        case Variant::no_attention: return "no_att";
        case Variant::no_dependency: return "no_dep";
        case Variant::separate_components: return "mlma";
    }
    return "?";
}

inline Variant variant_from_name(const std::string& name) {
    if (name == "full") return Variant::full;
    if (name == "no_att" || name == "no_attention") return Variant::no_attention;
    if (name == "no_dep" || name == "no_dependency") return Variant::no_dependency;
    if (name == "mlma" || name == "separate_components") return Variant::separate_components;
    throw ConfigError("unknown variant \"" + name + "\" (expected full, no_att, no_dep or mlma)");
}

/// Loss order everywhere: lower article, charge, penalty, ruling, appellate article.
inline constexpr std::size_t kLossCount = 5;
inline constexpr std::array<const char*, kLossCount> kLossNames = {"law_article", "charge", "penalty", "ruling",
                                                                    "appellate_article"};

struct TrainConfig {
    std::size_t embedding_dim = 200;
    std::size_t hidden = 256;
    std::size_t batch_size = 50;
    double learning_rate = 0.003;
    double dropout = 0.5;
    std::array<double, kLossCount> loss_weights = {1.0, 1.0, 1.0, 1.0, 1.0};
    std::size_t epochs = 20;
    std::uint64_t seed = 1;
    std::size_t max_seq_len = 512;
    std::size_t finetune_steps = 1;
    double ruling_positive_weight = 1.0;
    double gradient_clip = 0.0;  // global-norm cap, 0 = off
    bool early_stopping = false;
    std::size_t patience = 10;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

inline void validate(const TrainConfig& c) {
    if (c.embedding_dim == 0 || c.hidden == 0) throw ConfigError("embedding_dim and hidden must be positive");
    if (c.batch_size == 0) throw ConfigError("batch_size must be positive");
    if (c.max_seq_len == 0) throw ConfigError("max_seq_len must be positive");
    if (!(c.learning_rate > 0) || !std::isfinite(c.learning_rate)) throw ConfigError("learning_rate must be positive");
    if (!(c.dropout >= 0 && c.dropout < 1)) throw ConfigError("dropout must lie in [0, 1)");
    for (double w : c.loss_weights) {
        if (!(w >= 0) || !std::isfinite(w)) throw ConfigError("loss weights must be finite and non-negative");
    }
    if (!(c.ruling_positive_weight > 0) || !std::isfinite(c.ruling_positive_weight)) {
        throw ConfigError("ruling_positive_weight must be positive");
    }
    if (!(c.gradient_clip >= 0)) throw ConfigError("gradient_clip must be non-negative");
    if (c.early_stopping && c.patience == 0) throw ConfigError("patience must be positive when early stopping is on");
}

/// Corpus preparation: label filtering, vocabulary threshold and split.
struct DataConfig {
    SplitRatios split;
    std::size_t min_label_count = 1;
    std::size_t vocab_min_count = 1;
    std::uint64_t split_seed = 1;

    friend bool operator==(const DataConfig&, const DataConfig&) = default;
};

inline bool operator==(const SplitRatios& a, const SplitRatios& b) {
    return a.train == b.train && a.validation == b.validation && a.test == b.test;
}

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) throw ConfigError(std::string(where) + ": unknown key \"" + it.key() + "\"");
    }
}

template <class V>
void read_key(const nlohmann::json& j, const char* key, V& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<V>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
    }
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const TrainConfig& c) {
    nlohmann::ordered_json j;
    j["embedding_dim"] = c.embedding_dim;
    j["hidden"] = c.hidden;
    j["batch_size"] = c.batch_size;
    j["learning_rate"] = c.learning_rate;
    j["dropout"] = c.dropout;
    j["loss_weights"] = c.loss_weights;
    j["epochs"] = c.epochs;
    j["seed"] = c.seed;
    j["max_seq_len"] = c.max_seq_len;
    j["finetune_steps"] = c.finetune_steps;
    j["ruling_positive_weight"] = c.ruling_positive_weight;
    j["gradient_clip"] = c.gradient_clip;
    j["early_stopping"] = c.early_stopping;
    j["patience"] = c.patience;
    return j;
}

/// Missing keys keep their defaults; unknown keys are errors.
inline TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig c = {}) {
    detail::reject_unknown(j,
                           {"embedding_dim", "hidden", "batch_size", "learning_rate", "dropout", "loss_weights", "epochs", "seed",
                            "max_seq_len", "finetune_steps", "ruling_positive_weight", "gradient_clip", "early_stopping",
                            "patience"},
                           "train config");
    detail::read_key(j, "embedding_dim", c.embedding_dim);
    detail::read_key(j, "hidden", c.hidden);
    detail::read_key(j, "batch_size", c.batch_size);
    detail::read_key(j, "learning_rate", c.learning_rate);
    detail::read_key(j, "dropout", c.dropout);
    detail::read_key(j, "loss_weights", c.loss_weights);
    detail::read_key(j, "epochs", c.epochs);
    detail::read_key(j, "seed", c.seed);
    detail::read_key(j, "max_seq_len", c.max_seq_len);
    detail::read_key(j, "finetune_steps", c.finetune_steps);
    detail::read_key(j, "ruling_positive_weight", c.ruling_positive_weight);
    detail::read_key(j, "gradient_clip", c.gradient_clip);
    detail::read_key(j, "early_stopping", c.early_stopping);
    detail::read_key(j, "patience", c.patience);
    validate(c);
    return c;
}

inline nlohmann::ordered_json to_json(const DataConfig& c) {
    nlohmann::ordered_json j;
    j["split"] = {c.split.train, c.split.validation, c.split.test};
    j["min_label_count"] = c.min_label_count;
    j["vocab_min_count"] = c.vocab_min_count;
    j["split_seed"] = c.split_seed;
    return j;
}

inline DataConfig data_config_from_json(const nlohmann::json& j, DataConfig c = {}) {
    detail::reject_unknown(j, {"split", "min_label_count", "vocab_min_count", "split_seed"}, "data config");
    if (j.contains("split")) {
        std::array<double, 3> r{};
        detail::read_key(j, "split", r);
        c.split = {r[0], r[1], r[2]};
    }
    detail::read_key(j, "min_label_count", c.min_label_count);
    detail::read_key(j, "vocab_min_count", c.vocab_min_count);
    detail::read_key(j, "split_seed", c.split_seed);
    if (c.vocab_min_count == 0) throw ConfigError("vocab_min_count must be at least 1");
    return c;
}

}  // namespace smajudge

#endif  // SMAJUDGE_TRAINING_CONFIG_HPP
