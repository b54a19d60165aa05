// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "smajudge/appellate/heads.hpp"
#include "smajudge/evaluation/mlma.hpp"
#include "support/finite_difference.hpp"

namespace smajudge {
namespace {

AppellateParams random_heads(std::size_t input, std::size_t articles, RngStream& rng) {
    AppellateParams p{RulingHead::random(input, rng), ArticleHead::random(articles, input, rng)};
    p.ruling.bias[0] = 0.3;
    for (auto& b : p.article.bias.data()) b = rng.uniform(-0.5, 0.5);
    return p;
}

TEST(Heads, RulingIsSigmoidOfAffineScore) {
    RngStream rng(1);
    const AppellateParams p = random_heads(6, 3, rng);
    const std::vector<double> h = {0.1, -0.4, 0.9, 0.0, 0.3, -0.2};
    double z = p.ruling.bias[0];
    for (std::size_t c = 0; c < 6; ++c) z += p.ruling.weight.at(0, c) * h[c];
    Tape<Real> tape;
    const auto v = bind(tape, p, nullptr);
    const auto prob = predict_ruling(tape.constant(Shape{6}, h), v);
    ASSERT_EQ(prob.size(), 1u);
    EXPECT_NEAR(prob.item(), 1.0 / (1.0 + std::exp(-z)), 1e-14);

    const auto dist = predict_article(tape.constant(Shape{6}, h), v);
    double total = 0;
    for (double d : dist.value()) total += d;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Heads, ThresholdSendsExactHalfToNotAffirmed) {
    EXPECT_EQ(ruling_class(0.5), 1);
    EXPECT_EQ(ruling_class(std::nextafter(0.5, 0.0)), 0);
    EXPECT_EQ(ruling_class(0.0), 0);
    EXPECT_EQ(ruling_class(1.0), 1);
}

TEST(Heads, RulingLossIsWeightedBinaryCrossEntropy) {
    Tape<Real> tape;
    const auto p = tape.constant(Shape{1}, {0.2});
    EXPECT_NEAR(ruling_loss(p, 1).item(), -std::log(0.2), 1e-14);
    EXPECT_NEAR(ruling_loss(p, 0).item(), -std::log(0.8), 1e-14);
    EXPECT_NEAR(ruling_loss(p, 1, 3.0).item(), -3.0 * std::log(0.2), 1e-13);
    EXPECT_NEAR(ruling_loss(p, 0, 3.0).item(), -std::log(0.8), 1e-14);
}

TEST(Heads, CombineRequiresTwiceAsWideAppellatePart) {
    Tape<Real> tape;
    const auto l = tape.constant(Shape{2}, {1, 2});
    const auto h = combine(l, tape.constant(Shape{4}, {3, 4, 5, 6}));
    EXPECT_EQ(std::vector<double>(h.value().begin(), h.value().end()), (std::vector<double>{1, 2, 3, 4, 5, 6}));
    EXPECT_THROW(combine(l, tape.constant(Shape{2}, {3, 4})), ShapeError);
}

TEST(Heads, GradientMatchesFiniteDifferences) {
    RngStream rng(4);
    AppellateParams p = random_heads(5, 4, rng);
    const std::vector<double> h = {0.5, -0.1, 0.2, 0.7, -0.6};
    auto loss = [&](AppellateParams* g) {
        Tape<Real> tape;
        const auto v = bind(tape, p, g);
        const auto x = tape.constant(Shape{5}, h);
        const auto total = sum<Real>({ruling_loss(predict_ruling(x, v), 1, 2.0), article_loss(predict_article(x, v), 2)});
        if (g) tape.backward(total);
        return total.item();
    };
    AppellateParams g{{Mat(Shape{1, 5}), Vec(Shape{1})}, {Mat(Shape{4, 5}), Vec(Shape{4})}};
    loss(&g);
    const std::vector<std::pair<Mat*, Mat*>> pairs = {{&p.ruling.weight, &g.ruling.weight},
                                                      {&p.ruling.bias, &g.ruling.bias},
                                                      {&p.article.weight, &g.article.weight},
                                                      {&p.article.bias, &g.article.bias}};
    for (const auto& [param, grad] : pairs) {
        EXPECT_LE(testing::relative_error(grad->data(), testing::central_difference(*param, [&] { return loss(nullptr); })), 1e-7);
    }
}

TEST(SimilarityBaseline, CosineDecisionRule) {
    const std::vector<double> a = {1, 0}, same = {2, 0}, orth = {0, 3}, opposite = {-1, 0};
    auto decide = [](const std::vector<double>& x, const std::vector<double>& y) {
        return mlma_similarity_predict<double>(std::span<const double>(x), std::span<const double>(y));
    };
    EXPECT_NEAR(decide(a, same).similarity, 1.0, 1e-15);
    EXPECT_EQ(decide(a, same).ruling, 0);
    EXPECT_EQ(decide(a, orth).ruling, 1);
    EXPECT_EQ(decide(a, opposite).ruling, 1);
    // cos 60 degrees is 0.5; only strictly greater similarity affirms.
    const std::vector<double> sixty = {0.5, std::sqrt(3.0) / 2};
    EXPECT_NEAR(decide(a, sixty).similarity, 0.5, 1e-15);
    const std::vector<double> fifty_nine = {std::cos(59.0 * M_PI / 180), std::sin(59.0 * M_PI / 180)};
    EXPECT_EQ(decide(a, fifty_nine).ruling, 0);
    const std::vector<double> sixty_one = {std::cos(61.0 * M_PI / 180), std::sin(61.0 * M_PI / 180)};
    EXPECT_EQ(decide(a, sixty_one).ruling, 1);
}

TEST(SimilarityBaseline, ZeroVectorIsFlaggedAndWidthsChecked) {
    const std::vector<double> a = {1, 2}, z = {0, 0}, short_vec = {1};
    const auto d = mlma_similarity_predict<double>(std::span<const double>(a), std::span<const double>(z));
    EXPECT_TRUE(d.undefined);
    EXPECT_EQ(d.ruling, 1);
    EXPECT_THROW(mlma_similarity_predict<double>(std::span<const double>(a), std::span<const double>(short_vec)), ShapeError);
}

}  // namespace
}  // namespace smajudge
