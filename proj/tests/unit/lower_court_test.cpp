// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "smajudge/lower_court/dependency_cell.hpp"
#include "smajudge/lower_court/task_graph.hpp"
#include "support/finite_difference.hpp"

namespace smajudge {
namespace {

using testing::central_difference;
using testing::relative_error;

TEST(TaskGraph, StandardGraphIsValidAndOrdered) {
    const TaskGraph g = TaskGraph::standard();
    EXPECT_TRUE(validate_task_graph(g).empty());
    EXPECT_NO_THROW(require_valid(g));
    EXPECT_EQ(g.edge_count(), 3u);
    EXPECT_EQ(g.position(LowerTask::penalty), 2u);
    EXPECT_EQ(TaskGraph::parallel().edge_count(), 0u);
}

TEST(TaskGraph, ReportsEveryOrderingViolation) {
    TaskGraph g = TaskGraph::standard();
    g.tasks[0].dependencies = {1, 2};  // law article on later tasks
    g.tasks[1].dependencies = {1};     // self loop
    const auto v = validate_task_graph(g);
    ASSERT_EQ(v.size(), 3u);
    EXPECT_EQ(v[0].dependency, 2u);  // 1-based
    EXPECT_EQ(v[0].task, 1u);
    EXPECT_EQ(v[2].dependency, 2u);
    EXPECT_EQ(v[2].task, 2u);
    EXPECT_THROW(require_valid(g), ConfigError);
}

TEST(TaskGraph, StructuralChecks) {
    TaskGraph dup = TaskGraph::standard();
    dup.tasks[2].kind = LowerTask::charge;
    EXPECT_THROW(require_valid(dup), ConfigError);
    TaskGraph repeated = TaskGraph::standard();
    repeated.tasks[2].dependencies = {0, 0};
    EXPECT_THROW(require_valid(repeated), ConfigError);
    TaskGraph missing = TaskGraph::standard();
    missing.tasks.pop_back();
    EXPECT_THROW(require_valid(missing), ConfigError);
}

TEST(TaskGraph, JsonRoundTripAndAlternativeOrder) {
    const TaskGraph g = TaskGraph::standard();
    EXPECT_EQ(task_graph_from_json(task_graph_to_json(g)), g);
    const auto j = nlohmann::json::parse(
        R"([{"task":"charge","depends_on":[]},{"task":"law_article","depends_on":[0]},{"task":"penalty","depends_on":[0,1]}])");
    const TaskGraph alt = task_graph_from_json(j);
    EXPECT_EQ(alt.position(LowerTask::charge), 0u);
    EXPECT_NO_THROW(require_valid(alt));
    EXPECT_THROW(task_graph_from_json(nlohmann::json::parse(R"([{"task":"verdict","depends_on":[]}])")), ConfigError);
}

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct CellState {
    std::vector<double> h, c;
};

// Loop oracle of one dependency cell.
CellState oracle_cell(const DependencyCellParams& p, const std::vector<double>& facts, const std::vector<CellState>& preds) {
    const std::size_t dim = p.cell_dim();
    std::vector<double> f(p.forget_bias.values().begin(), p.forget_bias.values().end());
    std::vector<double> i(p.input_bias.values().begin(), p.input_bias.values().end());
    std::vector<double> o(p.output_bias.values().begin(), p.output_bias.values().end());
    std::vector<double> g(p.candidate_bias.values().begin(), p.candidate_bias.values().end());
    std::vector<double> memory(dim, 0.0);
    for (std::size_t k = 0; k < preds.size(); ++k) {
        std::vector<double> joined = preds[k].h;
        joined.insert(joined.end(), facts.begin(), facts.end());
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < joined.size(); ++c) {
                f[r] += p.pairs[k].forget.at(r, c) * joined[c];
                i[r] += p.pairs[k].input.at(r, c) * joined[c];
                o[r] += p.pairs[k].output.at(r, c) * joined[c];
                g[r] += p.pairs[k].candidate.at(r, c) * joined[c];
            }
            memory[r] += preds[k].c[r];
        }
    }
    CellState out{std::vector<double>(dim), std::vector<double>(dim)};
    for (std::size_t r = 0; r < dim; ++r) {
        out.c[r] = sig(f[r]) * memory[r] + sig(i[r]) * std::tanh(g[r]);
        out.h[r] = sig(o[r]) * std::tanh(out.c[r]);
    }
    return out;
}

std::vector<double> random_values(std::size_t n, RngStream& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-1, 1);
    return v;
}

TEST(DependencyCell, TwoPredecessorsMatchLoopOracle) {
    RngStream rng(17);
    DependencyCellParams p = DependencyCellParams::random(2, 3, 4, rng);
    for (auto* b : {&p.forget_bias, &p.input_bias, &p.output_bias, &p.candidate_bias}) {
        for (auto& v : b->data()) v = rng.uniform(-0.5, 0.5);
    }
    const auto facts = random_values(4, rng);
    const std::vector<CellState> preds = {{random_values(3, rng), random_values(3, rng)}, {random_values(3, rng), random_values(3, rng)}};
    const CellState expect = oracle_cell(p, facts, preds);

    Tape<Real> tape;
    std::vector<LstmState> states;
    for (const auto& s : preds) {
        states.push_back({tape.constant(Shape{3}, s.h), tape.constant(Shape{3}, s.c)});
    }
    const LstmState got = dependency_cell(tape.constant(Shape{4}, facts), states, bind(tape, p, nullptr));
    for (std::size_t r = 0; r < 3; ++r) {
        EXPECT_NEAR(got.hidden.value()[r], expect.h[r], 1e-12);
        EXPECT_NEAR(got.cell.value()[r], expect.c[r], 1e-12);
    }
    EXPECT_THROW(dependency_cell(tape.constant(Shape{4}, facts), {states[0]}, bind(tape, p, nullptr)), ShapeError);
}

TEST(DependencyCell, RootTaskUsesZeroPredecessor) {
    RngStream rng(18);
    const DependencyCellParams p = DependencyCellParams::random(0, 2, 3, rng);
    ASSERT_EQ(p.pairs.size(), 1u);
    const auto facts = random_values(3, rng);
    const CellState expect = oracle_cell(p, facts, {{{0.0, 0.0}, {0.0, 0.0}}});
    Tape<Real> tape;
    const LstmState got = dependency_cell(tape.constant(Shape{3}, facts), {virtual_predecessor(tape, 2)}, bind(tape, p, nullptr));
    for (std::size_t r = 0; r < 2; ++r) EXPECT_NEAR(got.hidden.value()[r], expect.h[r], 1e-12);
}

LowerCourtParams random_lower(const TaskGraph& g, std::size_t dim, std::size_t facts, RngStream& rng) {
    const std::array<std::size_t, 3> classes = {3, 4, 11};
    LowerCourtParams p;
    for (const auto& t : g.tasks) {
        p.cells.push_back(DependencyCellParams::random(t.dependencies.size(), dim, facts, rng));
        p.heads.push_back(SubtaskHead::random(classes[static_cast<std::size_t>(t.kind)], dim, rng));
    }
    return p;
}

LowerCourtParams zeros_of(const LowerCourtParams& p) {
    LowerCourtParams z = p;
    for (auto& c : z.cells) {
        for (auto& pair : c.pairs) {
            for (auto* m : {&pair.forget, &pair.input, &pair.output, &pair.candidate}) m->fill(0);
        }
        for (auto* b : {&c.forget_bias, &c.input_bias, &c.output_bias, &c.candidate_bias}) b->fill(0);
    }
    for (auto& h : z.heads) {
        h.weight.fill(0);
        h.bias.fill(0);
    }
    return z;
}

std::vector<Mat*> tensors_of(LowerCourtParams& p) {
    std::vector<Mat*> out;
    for (auto& c : p.cells) {
        for (auto& pair : c.pairs) {
            for (auto* m : {&pair.forget, &pair.input, &pair.output, &pair.candidate}) out.push_back(m);
        }
        for (auto* b : {&c.forget_bias, &c.input_bias, &c.output_bias, &c.candidate_bias}) out.push_back(b);
    }
    for (auto& h : p.heads) {
        out.push_back(&h.weight);
        out.push_back(&h.bias);
    }
    return out;
}

TEST(LowerCourt, DistributionsAndDependencyPropagation) {
    RngStream rng(30);
    const TaskGraph g = TaskGraph::standard();
    LowerCourtParams p = random_lower(g, 4, 4, rng);
    const auto facts = random_values(4, rng);
    auto penalty = [&](const LowerCourtParams& q, const TaskGraph& graph) {
        Tape<Real> tape;
        const auto out = run_lower_court(tape.constant(Shape{4}, facts), graph, bind(tape, q, nullptr));
        double total = 0;
        for (double v : out.task(LowerTask::charge).distribution.value()) total += v;
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_EQ(out.task(LowerTask::penalty).distribution.size(), 11u);
        const auto v = out.task(LowerTask::penalty).distribution.value();
        return std::vector<double>(v.begin(), v.end());
    };
    const auto before = penalty(p, g);
    // Changing the law-article cell reaches the penalty task through both paths.
    LowerCourtParams changed = p;
    changed.cells[0].candidate_bias.fill(0.7);
    EXPECT_NE(penalty(changed, g), before);

    const TaskGraph flat = TaskGraph::parallel();
    LowerCourtParams q = random_lower(flat, 4, 4, rng);
    const auto flat_before = penalty(q, flat);
    LowerCourtParams q_changed = q;
    q_changed.cells[0].candidate_bias.fill(0.7);
    EXPECT_EQ(penalty(q_changed, flat), flat_before);
}

TEST(LowerCourt, RejectsParameterGraphMismatch) {
    RngStream rng(31);
    LowerCourtParams p = random_lower(TaskGraph::standard(), 2, 2, rng);
    p.heads.pop_back();
    Tape<Real> tape;
    EXPECT_THROW(run_lower_court(tape.constant(Shape{2}, {0.1, 0.2}), TaskGraph::standard(), bind(tape, p, nullptr)), ShapeError);
}

TEST(LowerCourt, GradientMatchesFiniteDifferences) {
    RngStream rng(32);
    const TaskGraph g = TaskGraph::standard();
    LowerCourtParams p = random_lower(g, 3, 4, rng);
    for (auto* t : tensors_of(p)) {
        for (auto& v : t->data()) v += rng.uniform(-0.3, 0.3);
    }
    const auto facts = random_values(4, rng);
    auto loss = [&](LowerCourtParams* grad) {
        Tape<Real> tape;
        const auto out = run_lower_court(tape.constant(Shape{4}, facts), g, bind(tape, p, grad));
        const auto total = sum<Real>({lower_subtask_loss(out.tasks[0].distribution, 2), lower_subtask_loss(out.tasks[1].distribution, 1),
                                      lower_subtask_loss(out.tasks[2].distribution, 7)});
        if (grad) tape.backward(total);
        return total.item();
    };
    LowerCourtParams grad = zeros_of(p);
    loss(&grad);
    const auto params = tensors_of(p);
    const auto grads = tensors_of(grad);
    for (std::size_t k = 0; k < params.size(); ++k) {
        const auto numeric = central_difference(*params[k], [&] { return loss(nullptr); });
        EXPECT_LE(relative_error(grads[k]->data(), numeric), 1e-6) << "tensor " << k;
    }
}

}  // namespace
}  // namespace smajudge
