// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_CORPUS_SPLIT_HPP
#define SMAJUDGE_CORPUS_SPLIT_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "smajudge/corpus/document.hpp"
#include "smajudge/log.hpp"
#include "smajudge/numerics/error.hpp"
#include "smajudge/numerics/rng.hpp"

namespace smajudge {

struct SplitRatios {
    double train = 0.7;
    double validation = 0.1;
    double test = 0.1;
};

struct CorpusSplit {
    std::vector<AppealDocument> train;
    std::vector<AppealDocument> validation;
    std::vector<AppealDocument> test;
    std::vector<AppealDocument> discarded;
};

/// Deterministic shuffled partition. Part sizes are floor(ratio * n); the
/// remainder is returned as `discarded` and logged.
inline CorpusSplit split_corpus(const std::vector<AppealDocument>& docs, SplitRatios ratios, std::uint64_t seed) {
    if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0) throw ConfigError("split ratios must be non-negative");
    if (ratios.train + ratios.validation + ratios.test > 1.0 + 1e-12) throw ConfigError("split ratios sum to more than 1");

    const std::size_t n = docs.size();
    auto part = [n](double r) { return static_cast<std::size_t>(std::floor(r * static_cast<double>(n) + 1e-9)); };
    const std::size_t n_train = part(ratios.train);
    const std::size_t n_val = std::min(part(ratios.validation), n - n_train);
    const std::size_t n_test = std::min(part(ratios.test), n - n_train - n_val);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    RngStream rng(seed);
    rng.shuffle(order);

    CorpusSplit out;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& d = docs[order[k]];
        if (k < n_train) {
            out.train.push_back(d);
        } else if (k < n_train + n_val) {
            out.validation.push_back(d);
        } else if (k < n_train + n_val + n_test) {
            out.test.push_back(d);
        } else {
            out.discarded.push_back(d);
        }
    }
    if (!out.discarded.empty()) {
        log::info("split_corpus: " + std::to_string(out.discarded.size()) + " of " + std::to_string(n) +
                  " documents fall outside the train/validation/test ratios and are discarded");
    }
    return out;
}

}  // namespace smajudge

#endif  // SMAJUDGE_CORPUS_SPLIT_HPP
