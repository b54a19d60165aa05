// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_LOWER_COURT_TASK_GRAPH_HPP
#define SMAJUDGE_LOWER_COURT_TASK_GRAPH_HPP

#include <algorithm>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smajudge/numerics/error.hpp"

namespace smajudge {

/// The three lower-court judgment aspects.
enum class LowerTask { law_article, charge, penalty };

inline const char* task_name(LowerTask t) {
    switch (t) {
        case LowerTask::law_article: return "law_article";
        case LowerTask::charge: return "charge";
        case LowerTask::penalty: return "penalty";
    }
    return "?";
}

inline LowerTask task_from_name(const std::string& name) {
    if (name == "law_article") return LowerTask::law_article;
    if (name == "charge") return LowerTask::charge;
    if (name == "penalty") return LowerTask::penalty;
    throw ConfigError("unknown lower-court task \"" + name + "\"");
}

/// Ordered subtask list with dependency sets. A task may only depend on
/// tasks listed before it, which keeps the graph acyclic.
struct TaskGraph {
    struct Task {
        LowerTask kind;
        std::vector<std::size_t> dependencies;  // 0-based positions in `tasks`

        friend bool operator==(const Task&, const Task&) = default;
    };

    std::vector<Task> tasks;

    /// Law article first, then charge (needs the article), then penalty
    /// (needs both).
    static TaskGraph standard() {
        return {{{LowerTask::law_article, {}}, {LowerTask::charge, {0}}, {LowerTask::penalty, {0, 1}}}};
    }

    /// Same tasks with no dependencies.
    static TaskGraph parallel() {
        return {{{LowerTask::law_article, {}}, {LowerTask::charge, {}}, {LowerTask::penalty, {}}}};
    }

    [[nodiscard]] std::size_t edge_count() const {
        std::size_t n = 0;
        for (const auto& t : tasks) n += t.dependencies.size();
        return n;
    }

    [[nodiscard]] std::size_t position(LowerTask kind) const {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (tasks[i].kind == kind) return i;
        }
        throw ConfigError(std::string("task graph has no ") + task_name(kind) + " task");
    }

    friend bool operator==(const TaskGraph&, const TaskGraph&) = default;
};

/// Dependency i of task j with i >= j (1-based indices, as reported).
struct GraphViolation {
    std::size_t dependency;
    std::size_t task;

    friend bool operator==(const GraphViolation&, const GraphViolation&) = default;
};

/// Every (i, j) pair with t_i in D_j that breaks i < j. Empty means valid.
inline std::vector<GraphViolation> validate_task_graph(const TaskGraph& graph) {
    std::vector<GraphViolation> out;
    for (std::size_t j = 0; j < graph.tasks.size(); ++j) {
        for (std::size_t i : graph.tasks[j].dependencies) {
            if (!(i < j)) out.push_back({i + 1, j + 1});
        }
    }
    return out;
}

/// Structural checks the model needs on top of the ordering constraint:
/// each task exactly once and no repeated dependency.
inline void require_valid(const TaskGraph& graph) {
    if (graph.tasks.size() != 3) throw ConfigError("task graph must list the three lower-court tasks");
    for (LowerTask k : {LowerTask::law_article, LowerTask::charge, LowerTask::penalty}) {
        const auto n = std::count_if(graph.tasks.begin(), graph.tasks.end(), [k](const auto& t) { return t.kind == k; });
        if (n != 1) throw ConfigError(std::string("task graph must contain ") + task_name(k) + " exactly once");
    }
    for (const auto& t : graph.tasks) {
        auto deps = t.dependencies;
        std::sort(deps.begin(), deps.end());
        if (std::adjacent_find(deps.begin(), deps.end()) != deps.end()) throw ConfigError("task graph has a repeated dependency");
    }
    const auto violations = validate_task_graph(graph);
    if (!violations.empty()) {
        std::string msg = "task graph violates the ordering constraint:";
        for (const auto& v : violations) msg += " (" + std::to_string(v.dependency) + "," + std::to_string(v.task) + ")";
        throw ConfigError(msg);
    }
}

inline nlohmann::json task_graph_to_json(const TaskGraph& g) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : g.tasks) arr.push_back({{"task", task_name(t.kind)}, {"depends_on", t.dependencies}});
    return arr;
}

/// Reads `[{"task": "law_article", "depends_on": []}, ...]`.
inline TaskGraph task_graph_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("task_graph must be an array");
    TaskGraph g;
    for (const auto& item : j) {
        if (!item.is_object() || !item.contains("task")) throw ConfigError("task_graph entries need a \"task\" key");
        for (auto it = item.begin(); it != item.end(); ++it) {
            if (it.key() != "task" && it.key() != "depends_on") throw ConfigError("task_graph: unknown key \"" + it.key() + "\"");
        }
        TaskGraph::Task t{task_from_name(item.at("task").get<std::string>()), {}};
        if (item.contains("depends_on")) t.dependencies = item.at("depends_on").get<std::vector<std::size_t>>();
        g.tasks.push_back(std::move(t));
    }
    return g;
}

}  // namespace smajudge

#endif  // SMAJUDGE_LOWER_COURT_TASK_GRAPH_HPP
