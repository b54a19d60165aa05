// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_ENCODERS_EMBEDDING_HPP
#define SMAJUDGE_ENCODERS_EMBEDDING_HPP

#include <vector>

#include "smajudge/corpus/vocabulary.hpp"
#include "smajudge/encoders/init.hpp"
#include "smajudge/numerics/ops.hpp"

namespace smajudge {

/// Trainable [vocabulary x dim] word vectors. Row 0 (padding) stays zero.
struct EmbeddingTable {
    Mat weights;

    static EmbeddingTable random(std::size_t vocabulary, std::size_t dim, RngStream& rng) {
        EmbeddingTable t{Mat(Shape{vocabulary, dim})};
        for (std::size_t r = 0; r < vocabulary; ++r) {
            for (auto& v : t.weights.row(r)) v = static_cast<Real>(rng.uniform(-0.05, 0.05));
        }
        for (auto& v : t.weights.row(Vocabulary::kPad)) v = Real{0};
        return t;
    }

    [[nodiscard]] std::size_t vocabulary() const { return weights.rows(); }
    [[nodiscard]] std::size_t dim() const { return weights.cols(); }
};

/// Embedding rows for `ids` as an [N x dim] matrix.
inline Var<Real> embed_sequence(Var<Real> table, const std::vector<std::size_t>& ids) {
    if (ids.empty()) throw DataError("empty sequence");
    return gather_rows(table, ids, Vocabulary::kPad);
}

}  // namespace smajudge

#endif  // SMAJUDGE_ENCODERS_EMBEDDING_HPP
