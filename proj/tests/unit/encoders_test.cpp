// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "smajudge/encoders/attention.hpp"
#include "smajudge/encoders/embedding.hpp"
#include "smajudge/encoders/lstm.hpp"
#include "support/finite_difference.hpp"

namespace smajudge {
namespace {

using testing::central_difference;
using testing::relative_error;

Mat random_matrix(std::size_t r, std::size_t c, RngStream& rng, double scale = 1.0) {
    Mat m(Shape{r, c});
    for (auto& v : m.data()) v = rng.uniform(-scale, scale);
    return m;
}

Vec random_vector(std::size_t n, RngStream& rng, double scale = 1.0) {
    Vec v(Shape{n});
    for (auto& x : v.data()) x = rng.uniform(-scale, scale);
    return v;
}

double sigmoid_d(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Plain-loop recurrence over rows of x; gate blocks in [i; f; c; o] order.
std::vector<std::vector<double>> oracle_lstm(const LstmParams& p, const Mat& x, bool reverse) {
    const std::size_t h = p.hidden(), n = x.rows(), in = x.cols();
    std::vector<double> hid(h, 0.0), cell(h, 0.0);
    std::vector<std::vector<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t t = reverse ? n - 1 - k : k;
        std::vector<double> pre(4 * h);
        for (std::size_t r = 0; r < 4 * h; ++r) {
            double s = p.bias[r];
            for (std::size_t c = 0; c < in; ++c) s += p.input_weights.at(r, c) * x.at(t, c);
            for (std::size_t c = 0; c < h; ++c) s += p.recurrent_weights.at(r, c) * hid[c];
            pre[r] = s;
        }
        for (std::size_t j = 0; j < h; ++j) {
            const double i = sigmoid_d(pre[j]), f = sigmoid_d(pre[h + j]), g = std::tanh(pre[2 * h + j]), o = sigmoid_d(pre[3 * h + j]);
            cell[j] = f * cell[j] + i * g;
            hid[j] = o * std::tanh(cell[j]);
        }
        out[t] = hid;
    }
    return out;
}

TEST(Embedding, PaddingRowZeroAndRangeBounded) {
    RngStream rng(3);
    const EmbeddingTable t = EmbeddingTable::random(50, 6, rng);
    for (double v : t.weights.row(Vocabulary::kPad)) EXPECT_EQ(v, 0.0);
    for (double v : t.weights.data()) EXPECT_LE(std::abs(v), 0.05);
}

TEST(Embedding, LooksUpRowsAndKeepsPaddingFrozen) {
    RngStream rng(4);
    const EmbeddingTable t = EmbeddingTable::random(5, 3, rng);
    Mat grad(Shape{5, 3});
    Tape<Real> tape;
    const auto table = tape.param(t.weights, &grad);
    const auto x = embed_sequence(table, {2, 0, 2});
    ASSERT_EQ(x.shape(), (Shape{3, 3}));
    for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_EQ(x.value()[c], t.weights.at(2, c));
        EXPECT_EQ(x.value()[3 + c], 0.0);
    }
    tape.backward(dot(row(x, 0), row(x, 2)));
    for (double g : grad.row(0)) EXPECT_EQ(g, 0.0);
    EXPECT_THROW(embed_sequence(table, {}), DataError);
}

TEST(Lstm, MatchesPlainLoopRecurrenceBothDirections) {
    RngStream rng(5);
    const BiLstmEncoder enc = BiLstmEncoder::random(4, 3, rng);
    const Mat x = random_matrix(6, 4, rng);
    Tape<Real> tape;
    const auto hs = bilstm_encode(tape.constant(x), bind(tape, enc, nullptr));
    const auto fwd = oracle_lstm(enc.forward, x, false);
    const auto bwd = oracle_lstm(enc.backward, x, true);
    ASSERT_EQ(hs.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) {
        ASSERT_EQ(hs[i].size(), 6u);
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_NEAR(hs[i].value()[j], fwd[i][j], 1e-12);
            EXPECT_NEAR(hs[i].value()[3 + j], bwd[i][j], 1e-12);
        }
    }
}

TEST(Lstm, ForgetGateBiasCarriesMemory) {
    // With only the input and candidate paths open and the forget gate shut,
    // the cell holds nothing from the previous step.
    LstmParams p{Mat(Shape{4, 1}), Mat(Shape{4, 1}), Vec(Shape{4})};
    p.bias[0] = 50;   // input gate open
    p.bias[1] = -50;  // forget gate shut
    p.bias[3] = 50;   // output gate open
    p.input_weights.at(2, 0) = 1;
    const Mat x = Mat::matrix(2, 1, {0.5, 0.0});
    const auto out = oracle_lstm(p, x, false);
    Tape<Real> tape;
    const auto hs = lstm_run(tape.constant(x), bind(tape, p, nullptr), false);
    EXPECT_NEAR(hs[0].item(), std::tanh(std::tanh(0.5)), 1e-12);
    EXPECT_NEAR(hs[1].item(), 0.0, 1e-12);
    EXPECT_NEAR(hs[1].item(), out[1][0], 1e-12);
}

TEST(Lstm, RejectsEmptyInput) {
    RngStream rng(1);
    const BiLstmEncoder enc = BiLstmEncoder::random(2, 2, rng);
    Tape<Real> tape;
    EXPECT_THROW(bilstm_encode(tape.constant(Shape{0, 2}, {}), bind(tape, enc, nullptr)), DataError);
}

std::vector<Mat*> encoder_tensors(BiLstmEncoder& e) {
    return {&e.forward.input_weights, &e.forward.recurrent_weights, &e.forward.bias,
            &e.backward.input_weights, &e.backward.recurrent_weights, &e.backward.bias};
}

TEST(Lstm, GradientMatchesFiniteDifferences) {
    RngStream rng(8);
    BiLstmEncoder enc = BiLstmEncoder::random(3, 2, rng);
    for (auto* t : encoder_tensors(enc)) {
        for (auto& v : t->data()) v += rng.uniform(-0.3, 0.3);
    }
    const Mat x = random_matrix(5, 3, rng);
    std::vector<Vec> probes;
    for (int i = 0; i < 5; ++i) probes.push_back(random_vector(4, rng));

    auto loss = [&](BiLstmEncoder* g) {
        Tape<Real> tape;
        const auto hs = bilstm_encode(tape.constant(x), bind(tape, enc, g));
        std::vector<Var<Real>> terms;
        for (std::size_t i = 0; i < hs.size(); ++i) terms.push_back(dot(hs[i], tape.constant(probes[i])));
        const auto total = weighted_total(terms, std::vector<Real>(terms.size(), 1.0));
        if (g) tape.backward(total);
        return total.item();
    };
    BiLstmEncoder grad{LstmParams{Mat(Shape{8, 3}), Mat(Shape{8, 2}), Vec(Shape{8})},
                       LstmParams{Mat(Shape{8, 3}), Mat(Shape{8, 2}), Vec(Shape{8})}};
    loss(&grad);
    const auto params = encoder_tensors(enc);
    const auto grads = encoder_tensors(grad);
    for (std::size_t k = 0; k < params.size(); ++k) {
        const auto numeric = central_difference(*params[k], [&] { return loss(nullptr); });
        EXPECT_LE(relative_error(grads[k]->data(), numeric), 1e-6) << "tensor " << k;
    }
}

// alpha and u computed with loops, straight from the definition.
void oracle_attention(const std::vector<Vec>& facts, const Vec& grounds, const AttentionParams& p, std::vector<double>& alpha,
                      std::vector<double>& u) {
    const std::size_t a = p.context_bias.size(), d = grounds.size();
    std::vector<double> mu(a);
    for (std::size_t r = 0; r < a; ++r) {
        mu[r] = p.context_bias[r];
        for (std::size_t c = 0; c < d; ++c) mu[r] += p.context_weight.at(r, c) * grounds[c];
    }
    std::vector<double> score(facts.size());
    for (std::size_t i = 0; i < facts.size(); ++i) {
        for (std::size_t r = 0; r < a; ++r) {
            double z = 0;
            for (std::size_t c = 0; c < d; ++c) z += p.fact_projection.at(r, c) * facts[i][c];
            score[i] += std::tanh(z) * mu[r];
        }
    }
    const double peak = *std::max_element(score.begin(), score.end());
    double total = 0;
    alpha.assign(facts.size(), 0.0);
    for (std::size_t i = 0; i < facts.size(); ++i) total += alpha[i] = std::exp(score[i] - peak);
    for (auto& v : alpha) v /= total;
    u.assign(d, 0.0);
    for (std::size_t i = 0; i < facts.size(); ++i) {
        for (std::size_t c = 0; c < d; ++c) u[c] += alpha[i] * facts[i][c];
    }
}

TEST(Attention, MatchesLoopOracle) {
    RngStream rng(12);
    const AttentionParams p = AttentionParams::random(4, 3, rng);
    std::vector<Vec> facts;
    for (int i = 0; i < 7; ++i) facts.push_back(random_vector(4, rng));
    const Vec grounds = random_vector(4, rng);
    std::vector<double> alpha, u;
    oracle_attention(facts, grounds, p, alpha, u);

    Tape<Real> tape;
    HiddenSequence hs;
    for (const auto& f : facts) hs.push_back(tape.constant(f));
    const auto r = grounds_attention(hs, tape.constant(grounds), bind(tape, p, nullptr));
    for (std::size_t i = 0; i < alpha.size(); ++i) EXPECT_NEAR(r.alpha.value()[i], alpha[i], 1e-12);
    for (std::size_t c = 0; c < u.size(); ++c) EXPECT_NEAR(r.u.value()[c], u[c], 1e-12);
}

TEST(Attention, ZeroProjectionGivesUniformWeights) {
    RngStream rng(2);
    AttentionParams p = AttentionParams::random(2, 2, rng);
    p.fact_projection.fill(0);
    Tape<Real> tape;
    HiddenSequence hs;
    for (int i = 0; i < 4; ++i) hs.push_back(tape.constant(random_vector(2, rng)));
    const auto r = grounds_attention(hs, tape.constant(random_vector(2, rng)), bind(tape, p, nullptr));
    for (double a : r.alpha.value()) EXPECT_NEAR(a, 0.25, 1e-15);
}

TEST(Attention, DistributionAndConvexHullProperty) {
    RngStream rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(12), d = 2 + rng.below(6);
        const AttentionParams p = AttentionParams::random(d, 1 + rng.below(5), rng);
        Tape<Real> tape;
        HiddenSequence hs;
        std::vector<Vec> raw;
        for (std::size_t i = 0; i < n; ++i) {
            raw.push_back(random_vector(d, rng, 3.0));
            hs.push_back(tape.constant(raw.back()));
        }
        const auto r = grounds_attention(hs, tape.constant(random_vector(d, rng, 3.0)), bind(tape, p, nullptr));
        double total = 0;
        for (double a : r.alpha.value()) {
            ASSERT_GE(a, 0.0);
            total += a;
        }
        ASSERT_NEAR(total, 1.0, 1e-9);
        for (std::size_t c = 0; c < d; ++c) {
            double lo = raw[0][c], hi = raw[0][c];
            for (const auto& v : raw) {
                lo = std::min(lo, v[c]);
                hi = std::max(hi, v[c]);
            }
            ASSERT_GE(r.u.value()[c], lo - 1e-12);
            ASSERT_LE(r.u.value()[c], hi + 1e-12);
        }
    }
}

TEST(Attention, GradientMatchesFiniteDifferences) {
    RngStream rng(21);
    AttentionParams p = AttentionParams::random(4, 3, rng);
    std::vector<Vec> facts;
    for (int i = 0; i < 5; ++i) facts.push_back(random_vector(4, rng));
    const Vec grounds = random_vector(4, rng), probe = random_vector(8, rng);
    auto loss = [&](AttentionParams* g) {
        Tape<Real> tape;
        HiddenSequence hs;
        for (const auto& f : facts) hs.push_back(tape.constant(f));
        const auto r = grounds_attention(hs, tape.constant(grounds), bind(tape, p, g));
        const auto total = dot(appellate_fact_repr(hs, r.u), tape.constant(probe));
        if (g) tape.backward(total);
        return total.item();
    };
    AttentionParams grad{Mat(Shape{3, 4}), Vec(Shape{3}), Mat(Shape{3, 4})};
    loss(&grad);
    const std::vector<std::pair<Mat*, Mat*>> pairs = {
        {&p.context_weight, &grad.context_weight}, {&p.context_bias, &grad.context_bias}, {&p.fact_projection, &grad.fact_projection}};
    for (const auto& [param, g] : pairs) {
        EXPECT_LE(relative_error(g->data(), central_difference(*param, [&] { return loss(nullptr); })), 1e-6);
    }
}

TEST(Attention, RepresentationShapesAreChecked) {
    Tape<Real> tape;
    HiddenSequence hs = {tape.constant(Vec::vector({1.0, 2.0}))};
    EXPECT_EQ(appellate_fact_repr(hs, tape.constant(Vec::vector({3.0, 4.0}))).size(), 4u);
    EXPECT_THROW(appellate_fact_repr(hs, tape.constant(Vec::vector({3.0}))), ShapeError);
    EXPECT_THROW(appellate_fact_repr({}, tape.constant(Vec::vector({3.0}))), DataError);
}

}  // namespace
}  // namespace smajudge
