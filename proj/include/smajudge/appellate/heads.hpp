// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_APPELLATE_HEADS_HPP
#define SMAJUDGE_APPELLATE_HEADS_HPP

#include <vector>

#include "smajudge/encoders/init.hpp"
#include "smajudge/numerics/ops.hpp"

namespace smajudge {

/// Probability at or above this is classed as "not affirmed" (1).
inline constexpr double kRulingThreshold = 0.5;

/// Sigmoid head for the ruling: [1 x D] weight and scalar bias.
struct RulingHead {
    Mat weight;
    Vec bias;

    static RulingHead random(std::size_t input_dim, RngStream& rng) { return {glorot_matrix(1, input_dim, rng), zero_vector(1)}; }
};

/// Softmax head over appellate law articles: [|Y^a_l| x D] weight.
struct ArticleHead {
    Mat weight;
    Vec bias;

    static ArticleHead random(std::size_t classes, std::size_t input_dim, RngStream& rng) {
        return {glorot_matrix(classes, input_dim, rng), zero_vector(classes)};
    }
};

struct AppellateParams {
    RulingHead ruling;
    ArticleHead article;
};

struct AppellateVars {
    Var<Real> ruling_weight, ruling_bias, article_weight, article_bias;
};

inline AppellateVars bind(Tape<Real>& tape, const AppellateParams& p, AppellateParams* g) {
    return {tape.param(p.ruling.weight, g ? &g->ruling.weight : nullptr), tape.param(p.ruling.bias, g ? &g->ruling.bias : nullptr),
            tape.param(p.article.weight, g ? &g->article.weight : nullptr),
            tape.param(p.article.bias, g ? &g->article.bias : nullptr)};
}

/// h = [h_lower ; h_appellate]; the appellate part must be twice as wide.
inline Var<Real> combine(Var<Real> lower, Var<Real> appellate) {
    if (appellate.size() != 2 * lower.size()) {
        throw ShapeError("combine: appellate representation has " + std::to_string(appellate.size()) +
                         " components, expected " + std::to_string(2 * lower.size()));
    }
    return concat<Real>({lower, appellate});
}

/// sigmoid(W^ar h + b^ar), a one-element vector.
inline Var<Real> predict_ruling(Var<Real> h, const AppellateVars& v) { return sigmoid(affine(h, v.ruling_weight, v.ruling_bias)); }

inline int ruling_class(double probability) { return probability >= kRulingThreshold ? 1 : 0; }

inline Var<Real> ruling_loss(Var<Real> probability, int label, Real positive_weight = Real{1}) {
    return binary_cross_entropy(probability, label, positive_weight);
}

/// softmax(W^al h + b^al).
inline Var<Real> predict_article(Var<Real> h, const AppellateVars& v) { return softmax(affine(h, v.article_weight, v.article_bias)); }

inline Var<Real> article_loss(Var<Real> distribution, std::size_t truth) { return cross_entropy(distribution, truth); }

}  // namespace smajudge

#endif  // SMAJUDGE_APPELLATE_HEADS_HPP
