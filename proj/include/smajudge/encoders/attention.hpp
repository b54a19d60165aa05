// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_ENCODERS_ATTENTION_HPP
#define SMAJUDGE_ENCODERS_ATTENTION_HPP

#include <vector>

#include "smajudge/encoders/lstm.hpp"

namespace smajudge {

/// Grounds-of-appeal attention. The grounds summary is mapped to a context
/// vector mu; fact states are projected into the same space and scored
/// against it.
struct AttentionParams {
    Mat context_weight;   // [A x 2H]
    Vec context_bias;     // [A]
    Mat fact_projection;  // [A x 2H]

    static AttentionParams random(std::size_t state_dim, std::size_t attention_dim, RngStream& rng) {
        auto w = glorot_matrix(attention_dim, state_dim, rng);
        auto p = glorot_matrix(attention_dim, state_dim, rng);
        return {std::move(w), zero_vector(attention_dim), std::move(p)};
    }
};

struct AttentionVars {
    Var<Real> context_weight, context_bias, fact_projection;
};

inline AttentionVars bind(Tape<Real>& tape, const AttentionParams& p, AttentionParams* g) {
    return {tape.param(p.context_weight, g ? &g->context_weight : nullptr),
            tape.param(p.context_bias, g ? &g->context_bias : nullptr),
            tape.param(p.fact_projection, g ? &g->fact_projection : nullptr)};
}

struct AttentionResult {
    Var<Real> alpha;  // [N], a distribution over fact positions
    Var<Real> u;      // [2H], attention-weighted fact state
};

/// mu = W^g h_g + b^g; alpha = softmax_i(tanh(W^af h_i) . mu); u = sum_i alpha_i h_i.
inline AttentionResult grounds_attention(const HiddenSequence& facts, Var<Real> grounds_last, const AttentionVars& att) {
    if (facts.empty()) throw DataError("grounds_attention: empty fact sequence");
    const Var<Real> mu = affine(grounds_last, att.context_weight, att.context_bias);
    std::vector<Var<Real>> scores;
    scores.reserve(facts.size());
    for (const auto& h : facts) scores.push_back(dot(smajudge::tanh(matvec(att.fact_projection, h)), mu));
    const Var<Real> alpha = softmax(concat(scores));
    return {alpha, weighted_sum(alpha, facts)};
}

/// h^a = [last fact state ; u].
inline Var<Real> appellate_fact_repr(const HiddenSequence& facts, Var<Real> u) {
    if (facts.empty()) throw DataError("appellate_fact_repr: empty fact sequence");
    if (facts.back().size() != u.size()) {
        throw ShapeError("appellate_fact_repr: state dimension " + std::to_string(facts.back().size()) +
                         " differs from attention output " + std::to_string(u.size()));
    }
    return concat<Real>({facts.back(), u});
}

}  // namespace smajudge

#endif  // SMAJUDGE_ENCODERS_ATTENTION_HPP
