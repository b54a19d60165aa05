// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_ENCODERS_INIT_HPP
#define SMAJUDGE_ENCODERS_INIT_HPP

#include <cmath>

#include "smajudge/numerics/rng.hpp"
#include "smajudge/numerics/tensor.hpp"

namespace smajudge {

using Mat = Tensor<Real>;
using Vec = Tensor<Real>;

/// Glorot-uniform [rows x cols] matrix: U(-a, a), a = sqrt(6 / (rows + cols)).
inline Mat glorot_matrix(std::size_t rows, std::size_t cols, RngStream& rng) {
    Mat m(Shape{rows, cols});
    const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (auto& v : m.data()) v = static_cast<Real>(rng.uniform(-a, a));
    return m;
}

inline Vec zero_vector(std::size_t n) { return Vec(Shape{n}); }

}  // namespace smajudge

#endif  // SMAJUDGE_ENCODERS_INIT_HPP
