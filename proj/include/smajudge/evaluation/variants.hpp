// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_EVALUATION_VARIANTS_HPP
#define SMAJUDGE_EVALUATION_VARIANTS_HPP

#include "smajudge/training/model.hpp"

namespace smajudge {

/// `graph` with every dependency set emptied, task order kept.
inline TaskGraph without_dependencies(TaskGraph graph) {
    for (auto& t : graph.tasks) t.dependencies.clear();
    return graph;
}

/// Initial parameters for an ablation variant.
///   full                 standard model over `graph`
///   no_attention         h^a is the last appellate fact state; no grounds encoder
///   no_dependency        same as full with every dependency set empty
///   separate_components  lower and appellate components share nothing; the
///                        ruling comes from projected-representation similarity
/// Parameter sets are disjoint across the two separate components, so joint
/// training of the sum of their losses trains each on its own losses.
inline SmaJudgeParams build_variant(const ModelDims& dims, Variant variant, std::uint64_t seed,
                                    const TaskGraph& graph = TaskGraph::standard()) {
    const TaskGraph g = variant == Variant::no_dependency ? without_dependencies(graph) : graph;
    return init_params(dims, variant, g, seed);
}

}  // namespace smajudge

#endif  // SMAJUDGE_EVALUATION_VARIANTS_HPP
