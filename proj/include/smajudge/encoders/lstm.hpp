// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_ENCODERS_LSTM_HPP
#define SMAJUDGE_ENCODERS_LSTM_HPP

#include <string>
#include <vector>

#include "smajudge/encoders/init.hpp"
#include "smajudge/numerics/ops.hpp"

namespace smajudge {

using HiddenSequence = std::vector<Var<Real>>;

/// One LSTM direction. Gate rows are stacked as [input; forget; candidate; output].
struct LstmParams {
    Mat input_weights;      // [4H x in]
    Mat recurrent_weights;  // [4H x H]
    Vec bias;               // [4H]

    static LstmParams random(std::size_t input_dim, std::size_t hidden, RngStream& rng) {
        return {glorot_matrix(4 * hidden, input_dim, rng), glorot_matrix(4 * hidden, hidden, rng), zero_vector(4 * hidden)};
    }

    [[nodiscard]] std::size_t hidden() const { return bias.size() / 4; }
    [[nodiscard]] std::size_t input_dim() const { return input_weights.cols(); }
};

/// Forward and backward directions of one sequence encoder.
struct BiLstmEncoder {
    LstmParams forward;
    LstmParams backward;

    static BiLstmEncoder random(std::size_t input_dim, std::size_t hidden, RngStream& rng) {
        auto f = LstmParams::random(input_dim, hidden, rng);
        auto b = LstmParams::random(input_dim, hidden, rng);
        return {std::move(f), std::move(b)};
    }

    [[nodiscard]] std::size_t hidden() const { return forward.hidden(); }
    [[nodiscard]] std::size_t output_dim() const { return 2 * forward.hidden(); }
};

struct LstmVars {
    Var<Real> input_weights, recurrent_weights, bias;
    std::size_t hidden = 0;
};

struct BiLstmVars {
    LstmVars forward, backward;
};

inline LstmVars bind(Tape<Real>& tape, const LstmParams& p, LstmParams* g) {
    return {tape.param(p.input_weights, g ? &g->input_weights : nullptr),
            tape.param(p.recurrent_weights, g ? &g->recurrent_weights : nullptr), tape.param(p.bias, g ? &g->bias : nullptr),
            p.hidden()};
}

inline BiLstmVars bind(Tape<Real>& tape, const BiLstmEncoder& p, BiLstmEncoder* g) {
    return {bind(tape, p.forward, g ? &g->forward : nullptr), bind(tape, p.backward, g ? &g->backward : nullptr)};
}

struct LstmState {
    Var<Real> hidden, cell;
};

/// One recurrence step: gates from x and the previous hidden state.
inline LstmState lstm_step(Var<Real> x, const LstmState& prev, const LstmVars& p) {
    const std::size_t h = p.hidden;
    const Var<Real> pre = linear<Real>({{p.input_weights, x}, {p.recurrent_weights, prev.hidden}}, p.bias);
    const Var<Real> in_gate = sigmoid(slice(pre, 0, h));
    const Var<Real> forget_gate = sigmoid(slice(pre, h, h));
    const Var<Real> candidate = smajudge::tanh(slice(pre, 2 * h, h));
    const Var<Real> out_gate = sigmoid(slice(pre, 3 * h, h));
    const Var<Real> cell = add(mul(forget_gate, prev.cell), mul(in_gate, candidate));
    return {mul(out_gate, smajudge::tanh(cell)), cell};
}

/// Hidden states of one direction over the rows of x, in position order.
inline HiddenSequence lstm_run(Var<Real> x, const LstmVars& p, bool reverse) {
    const Shape& s = x.shape();
    if (s.size() != 2 || s[0] == 0) throw ShapeError("lstm: expected a non-empty [N x k] input");
    const std::size_t n = s[0];
    Tape<Real>& tape = *x.tape;
    LstmState state{tape.constant(Shape{p.hidden}, std::vector<Real>(p.hidden, Real{0})),
                    tape.constant(Shape{p.hidden}, std::vector<Real>(p.hidden, Real{0}))};
    HiddenSequence out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = reverse ? n - 1 - k : k;
        state = lstm_step(row(x, i), state, p);
        out[i] = state.hidden;
    }
    return out;
}

/// h_i = [forward_i ; backward_i] for every position i.
inline HiddenSequence bilstm_encode(Var<Real> x, const BiLstmVars& enc) {
    if (x.shape().size() != 2 || x.shape()[0] == 0) throw DataError("bilstm_encode: empty input");
    const HiddenSequence fwd = lstm_run(x, enc.forward, false);
    const HiddenSequence bwd = lstm_run(x, enc.backward, true);
    HiddenSequence out(fwd.size());
    for (std::size_t i = 0; i < fwd.size(); ++i) out[i] = concat<Real>({fwd[i], bwd[i]});
    return out;
}

}  // namespace smajudge

#endif  // SMAJUDGE_ENCODERS_LSTM_HPP
