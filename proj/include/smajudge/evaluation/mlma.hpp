// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_EVALUATION_MLMA_HPP
#define SMAJUDGE_EVALUATION_MLMA_HPP

#include <cmath>
#include <span>

#include "smajudge/numerics/error.hpp"

namespace smajudge {

/// Above this cosine similarity the two components are taken to agree
/// and the ruling is "affirmed" (0).
inline constexpr double kSimilarityThreshold = 0.5;

struct SimilarityDecision {
    double similarity = 0;
    int ruling = 1;
    bool undefined = false;  // a zero vector; ruling defaults to 1
};

/// Ruling of the separate-components baseline from projected lower and
/// appellate representations of equal width.
template <class T>
SimilarityDecision mlma_similarity_predict(std::span<const T> lower, std::span<const T> appellate) {
    if (lower.size() != appellate.size()) throw ShapeError("mlma_similarity_predict: projected widths differ");
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < lower.size(); ++i) {
        dot += static_cast<double>(lower[i]) * static_cast<double>(appellate[i]);
        na += static_cast<double>(lower[i]) * static_cast<double>(lower[i]);
        nb += static_cast<double>(appellate[i]) * static_cast<double>(appellate[i]);
    }
    if (na == 0 || nb == 0) return {0.0, 1, true};
    const double s = dot / (std::sqrt(na) * std::sqrt(nb));
    return {s, s > kSimilarityThreshold ? 0 : 1, false};
}

}  // namespace smajudge

#endif  // SMAJUDGE_EVALUATION_MLMA_HPP
