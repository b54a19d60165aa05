// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_LOWER_COURT_DEPENDENCY_CELL_HPP
#define SMAJUDGE_LOWER_COURT_DEPENDENCY_CELL_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "smajudge/encoders/lstm.hpp"
#include "smajudge/lower_court/task_graph.hpp"

namespace smajudge {

/// Gate maps for one (dependency, task) pair, each [C x (C + 2H)] over the
/// concatenation [h_dependency ; h_facts].
struct GateWeights {
    Mat forget, input, output, candidate;

    static GateWeights random(std::size_t cell_dim, std::size_t fact_dim, RngStream& rng) {
        auto f = glorot_matrix(cell_dim, cell_dim + fact_dim, rng);
        auto i = glorot_matrix(cell_dim, cell_dim + fact_dim, rng);
        auto o = glorot_matrix(cell_dim, cell_dim + fact_dim, rng);
        auto c = glorot_matrix(cell_dim, cell_dim + fact_dim, rng);
        return {std::move(f), std::move(i), std::move(o), std::move(c)};
    }
};

/// Cell of task j: one GateWeights per dependency (a single one for the
/// virtual zero predecessor when the task has none) plus per-task biases.
struct DependencyCellParams {
    std::vector<GateWeights> pairs;
    Vec forget_bias, input_bias, output_bias, candidate_bias;

    static DependencyCellParams random(std::size_t predecessors, std::size_t cell_dim, std::size_t fact_dim, RngStream& rng) {
        DependencyCellParams p;
        for (std::size_t k = 0; k < std::max<std::size_t>(predecessors, 1); ++k) {
            p.pairs.push_back(GateWeights::random(cell_dim, fact_dim, rng));
        }
        p.forget_bias = zero_vector(cell_dim);
        p.input_bias = zero_vector(cell_dim);
        p.output_bias = zero_vector(cell_dim);
        p.candidate_bias = zero_vector(cell_dim);
        return p;
    }

    [[nodiscard]] std::size_t cell_dim() const { return forget_bias.size(); }
};

/// Softmax head of one subtask: [|Y_j| x C] weight and [|Y_j|] bias.
struct SubtaskHead {
    Mat weight;
    Vec bias;

    static SubtaskHead random(std::size_t classes, std::size_t input_dim, RngStream& rng) {
        return {glorot_matrix(classes, input_dim, rng), zero_vector(classes)};
    }

    [[nodiscard]] std::size_t classes() const { return bias.size(); }
};

/// Cells and heads in task-graph order.
struct LowerCourtParams {
    std::vector<DependencyCellParams> cells;
    std::vector<SubtaskHead> heads;
};

struct GateVars {
    Var<Real> forget, input, output, candidate;
};

struct CellVars {
    std::vector<GateVars> pairs;
    Var<Real> forget_bias, input_bias, output_bias, candidate_bias;
};

struct HeadVars {
    Var<Real> weight, bias;
};

struct LowerCourtVars {
    std::vector<CellVars> cells;
    std::vector<HeadVars> heads;
};

inline CellVars bind(Tape<Real>& tape, const DependencyCellParams& p, DependencyCellParams* g) {
    CellVars v;
    for (std::size_t k = 0; k < p.pairs.size(); ++k) {
        GateWeights* gp = g ? &g->pairs[k] : nullptr;
        const GateWeights& w = p.pairs[k];
        v.pairs.push_back({tape.param(w.forget, gp ? &gp->forget : nullptr), tape.param(w.input, gp ? &gp->input : nullptr),
                           tape.param(w.output, gp ? &gp->output : nullptr),
                           tape.param(w.candidate, gp ? &gp->candidate : nullptr)});
    }
    v.forget_bias = tape.param(p.forget_bias, g ? &g->forget_bias : nullptr);
    v.input_bias = tape.param(p.input_bias, g ? &g->input_bias : nullptr);
    v.output_bias = tape.param(p.output_bias, g ? &g->output_bias : nullptr);
    v.candidate_bias = tape.param(p.candidate_bias, g ? &g->candidate_bias : nullptr);
    return v;
}

inline HeadVars bind(Tape<Real>& tape, const SubtaskHead& p, SubtaskHead* g) {
    return {tape.param(p.weight, g ? &g->weight : nullptr), tape.param(p.bias, g ? &g->bias : nullptr)};
}

inline LowerCourtVars bind(Tape<Real>& tape, const LowerCourtParams& p, LowerCourtParams* g) {
    LowerCourtVars v;
    for (std::size_t j = 0; j < p.cells.size(); ++j) v.cells.push_back(bind(tape, p.cells[j], g ? &g->cells[j] : nullptr));
    for (std::size_t j = 0; j < p.heads.size(); ++j) v.heads.push_back(bind(tape, p.heads[j], g ? &g->heads[j] : nullptr));
    return v;
}

/// Zero hidden state and memory cell standing in for a task without dependencies.
inline LstmState virtual_predecessor(Tape<Real>& tape, std::size_t cell_dim) {
    return {tape.constant(Shape{cell_dim}, std::vector<Real>(cell_dim, Real{0})),
            tape.constant(Shape{cell_dim}, std::vector<Real>(cell_dim, Real{0}))};
}

/// Task cell over its predecessors' (hidden, cell) states:
///   z_* = act(sum_i W^*_{i,j} [h_i ; h_facts] + b^*_j)
///   C_j = z^F * sum_i C_i + z^I * C~_j,  h_j = z^O * tanh(C_j)
inline LstmState dependency_cell(Var<Real> facts, const std::vector<LstmState>& predecessors, const CellVars& cell) {
    if (predecessors.size() != cell.pairs.size()) {
        throw ShapeError("dependency_cell: " + std::to_string(predecessors.size()) + " predecessors for a cell with " +
                         std::to_string(cell.pairs.size()) + " gate sets");
    }
    std::vector<std::pair<Var<Real>, Var<Real>>> f_terms, i_terms, o_terms, c_terms;
    std::vector<Var<Real>> memory;
    for (std::size_t k = 0; k < predecessors.size(); ++k) {
        const Var<Real> joined = concat<Real>({predecessors[k].hidden, facts});
        f_terms.emplace_back(cell.pairs[k].forget, joined);
        i_terms.emplace_back(cell.pairs[k].input, joined);
        o_terms.emplace_back(cell.pairs[k].output, joined);
        c_terms.emplace_back(cell.pairs[k].candidate, joined);
        memory.push_back(predecessors[k].cell);
    }
    const Var<Real> forget = sigmoid(linear(f_terms, cell.forget_bias));
    const Var<Real> input = sigmoid(linear(i_terms, cell.input_bias));
    const Var<Real> output = sigmoid(linear(o_terms, cell.output_bias));
    const Var<Real> candidate = smajudge::tanh(linear(c_terms, cell.candidate_bias));
    const Var<Real> c = add(mul(forget, sum(memory)), mul(input, candidate));
    return {mul(output, smajudge::tanh(c)), c};
}

struct TaskOutput {
    LowerTask kind;
    Var<Real> distribution;
    LstmState state;
};

struct LowerCourtOutput {
    Var<Real> facts;
    std::vector<TaskOutput> tasks;  // graph order

    [[nodiscard]] const TaskOutput& task(LowerTask kind) const {
        for (const auto& t : tasks) {
            if (t.kind == kind) return t;
        }
        throw ConfigError(std::string("no output for task ") + task_name(kind));
    }
};

/// Evaluates the tasks in list order; each distribution is
/// softmax(W^ls_j h^ls_j + b^ls_j).
inline LowerCourtOutput run_lower_court(Var<Real> facts, const TaskGraph& graph, const LowerCourtVars& vars) {
    require_valid(graph);
    if (vars.cells.size() != graph.tasks.size() || vars.heads.size() != graph.tasks.size()) {
        throw ShapeError("run_lower_court: parameter count does not match the task graph");
    }
    Tape<Real>& tape = *facts.tape;
    std::vector<std::optional<LstmState>> slots(graph.tasks.size());
    LowerCourtOutput out{facts, {}};
    for (std::size_t j = 0; j < graph.tasks.size(); ++j) {
        const auto& deps = graph.tasks[j].dependencies;
        const CellVars& cell = vars.cells[j];
        std::vector<LstmState> preds;
        if (deps.empty()) {
            const std::size_t dim = cell.forget_bias.size();
            preds.push_back(virtual_predecessor(tape, dim));
        }
        for (std::size_t i : deps) {
            if (!slots.at(i)) throw std::logic_error("run_lower_court: task read an unset predecessor state");
            preds.push_back(*slots[i]);
        }
        const LstmState state = dependency_cell(facts, preds, cell);
        slots[j] = state;
        const Var<Real> dist = softmax(affine(state.hidden, vars.heads[j].weight, vars.heads[j].bias));
        out.tasks.push_back({graph.tasks[j].kind, dist, state});
    }
    return out;
}

/// Cross-entropy of one subtask's prediction.
inline Var<Real> lower_subtask_loss(Var<Real> distribution, std::size_t truth) { return cross_entropy(distribution, truth); }

}  // namespace smajudge

#endif  // SMAJUDGE_LOWER_COURT_DEPENDENCY_CELL_HPP
