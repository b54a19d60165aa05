// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_NUMERICS_ADAM_HPP
#define SMAJUDGE_NUMERICS_ADAM_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "smajudge/numerics/error.hpp"
#include "smajudge/numerics/tensor.hpp"

namespace smajudge {

struct AdamConfig {
    double learning_rate = 0.003;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Moment estimates for a fixed, ordered parameter list.
template <std::floating_point T>
struct AdamState {
    AdamConfig config;
    std::vector<Tensor<T>> first_moment;
    std::vector<Tensor<T>> second_moment;
    std::uint64_t step = 0;

    AdamState() = default;
    explicit AdamState(AdamConfig cfg) : config(cfg) {}
};

/// One bias-corrected Adam update of `params` from `grads`, in place.
/// Moments are created on the first call and must keep their shapes.
template <std::floating_point T>
void adam_step(const std::vector<Tensor<T>*>& params, const std::vector<const Tensor<T>*>& grads, AdamState<T>& state) {
    if (params.size() != grads.size()) {
        throw ShapeError("adam_step: " + std::to_string(params.size()) + " parameters but " +
                         std::to_string(grads.size()) + " gradients");
    }
    if (state.first_moment.empty() && state.step == 0) {
        for (const Tensor<T>* p : params) {
            state.first_moment.emplace_back(p->shape());
            state.second_moment.emplace_back(p->shape());
        }
    }
    if (state.first_moment.size() != params.size()) throw ShapeError("adam_step: optimizer state tracks a different parameter list");
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (params[k]->shape() != grads[k]->shape() || state.first_moment[k].shape() != params[k]->shape()) {
            throw ShapeError("adam_step: shape mismatch at parameter " + std::to_string(k));
        }
        if (!grads[k]->all_finite()) throw NumericError("adam_step: non-finite gradient at parameter " + std::to_string(k));
    }

    state.step += 1;
    const double b1 = state.config.beta1, b2 = state.config.beta2;
    const double correction1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double correction2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    const double lr = state.config.learning_rate, eps = state.config.epsilon;
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto p = params[k]->data();
        const auto g = grads[k]->data();
        auto m = state.first_moment[k].data();
        auto v = state.second_moment[k].data();
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double gi = g[i];
            const double mi = b1 * m[i] + (1.0 - b1) * gi;
            const double vi = b2 * v[i] + (1.0 - b2) * gi * gi;
            m[i] = static_cast<T>(mi);
            v[i] = static_cast<T>(vi);
            const double m_hat = mi / correction1;
            const double v_hat = vi / correction2;
            p[i] = static_cast<T>(p[i] - lr * m_hat / (std::sqrt(v_hat) + eps));
        }
    }
}

}  // namespace smajudge

#endif  // SMAJUDGE_NUMERICS_ADAM_HPP
