// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_NUMERICS_TAPE_HPP
#define SMAJUDGE_NUMERICS_TAPE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "smajudge/numerics/error.hpp"
#include "smajudge/numerics/tensor.hpp"

namespace smajudge {

template <std::floating_point T>
class Tape;

/// Handle to a value recorded on a tape.
template <std::floating_point T>
struct Var {
    Tape<T>* tape = nullptr;
    std::size_t id = 0;

    [[nodiscard]] std::span<const T> value() const { return tape->value(id); }
    [[nodiscard]] const Shape& shape() const { return tape->shape(id); }
    [[nodiscard]] std::size_t size() const { return tape->value(id).size(); }
    [[nodiscard]] T item() const { return tape->value(id)[0]; }
    [[nodiscard]] bool requires_grad() const { return tape->requires_grad(id); }
    [[nodiscard]] Tensor<T> tensor() const {
        const auto v = value();
        return Tensor<T>(shape(), std::vector<T>(v.begin(), v.end()));
    }
};

/// Reverse-mode record of executed primitives.
///
/// Nodes are appended in execution order and the reverse pass walks them
/// back to front. Trainable parameters enter through `param`, which routes
/// their gradient into a caller-owned sink tensor of the same shape.
template <std::floating_point T>
class Tape {
public:
    using BackwardFn = std::function<void(Tape&, std::size_t)>;

    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    /// Value without gradient.
    Var<T> constant(const Tensor<T>& t) { return push(t.shape(), std::vector<T>(t.data().begin(), t.data().end()), false); }

    Var<T> constant(Shape shape, std::vector<T> values) { return push(std::move(shape), std::move(values), false); }

    /// Leaf copied onto the tape; keeps its own gradient when `t.requires_grad`.
    Var<T> leaf(const Tensor<T>& t) {
        return push(t.shape(), std::vector<T>(t.data().begin(), t.data().end()), t.requires_grad);
    }

    /// Trainable leaf viewing `value` in place. The gradient accumulates into
    /// `*sink`; a null sink makes the parameter a constant. Repeated calls with
    /// the same tensor return the same node.
    Var<T> param(const Tensor<T>& value, Tensor<T>* sink) {
        if (auto it = params_.find(&value); it != params_.end()) return Var<T>{this, it->second};
        if (sink != nullptr && sink->shape() != value.shape()) {
            throw ShapeError("gradient sink shape " + shape_string(sink->shape()) + " differs from parameter " +
                             shape_string(value.shape()));
        }
        Node node;
        node.shape = value.shape();
        node.external = &value;
        node.sink = sink;
        node.requires_grad = sink != nullptr;
        nodes_.push_back(std::move(node));
        params_.emplace(&value, nodes_.size() - 1);
        return Var<T>{this, nodes_.size() - 1};
    }

    /// Records an op result. `inputs` decide whether the result needs a gradient.
    Var<T> record(const char* op, Shape shape, std::vector<T> values, std::initializer_list<Var<T>> inputs,
                  BackwardFn backward) {
        bool needs = false;
        for (const auto& in : inputs) needs = needs || requires_grad(in.id);
        return record_if(op, std::move(shape), std::move(values), needs, std::move(backward));
    }

    Var<T> record_if(const char* op, Shape shape, std::vector<T> values, bool needs_grad, BackwardFn backward) {
        for (T v : values) {
            if (!std::isfinite(v)) throw NumericError(std::string(op) + " produced a non-finite value");
        }
        Var<T> out = push(std::move(shape), std::move(values), needs_grad);
        if (needs_grad) nodes_.back().backward = std::move(backward);
        return out;
    }

    /// Reverse pass from a scalar loss.
    void backward(Var<T> loss) {
        if (loss.tape != this) throw GradientError("loss belongs to a different tape");
        if (backward_done_) throw GradientError("backward already ran on this tape; reset it first");
        if (nodes_[loss.id].shape.size() != 0 && value(loss.id).size() != 1) {
            throw GradientError("non-scalar loss of shape " + shape_string(nodes_[loss.id].shape));
        }
        if (!nodes_[loss.id].requires_grad) throw GradientError("detached loss: no trainable input reaches it");
        backward_done_ = true;
        accum(loss.id)[0] += T{1};
        for (std::size_t i = loss.id + 1; i-- > 0;) {
            Node& node = nodes_[i];
            if (!node.requires_grad || !node.touched || !node.backward) continue;
            node.backward(*this, i);
        }
    }

    void reset() {
        nodes_.clear();
        params_.clear();
        backward_done_ = false;
    }

    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }

    [[nodiscard]] std::span<const T> value(std::size_t id) const {
        const Node& n = nodes_[id];
        if (n.external != nullptr) return n.external->data();
        return n.value;
    }

    [[nodiscard]] const Shape& shape(std::size_t id) const { return nodes_[id].shape; }
    [[nodiscard]] bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

    /// Gradient of a node after the reverse pass; empty when none reached it.
    [[nodiscard]] std::span<const T> grad(Var<T> v) const {
        const Node& n = nodes_[v.id];
        if (n.sink != nullptr) return n.sink->data();
        return n.grad;
    }

    [[nodiscard]] std::span<const T> grad_of(std::size_t id) const { return nodes_[id].grad; }

    /// Mutable gradient buffer of an input, allocated on first use; empty
    /// when the input does not need a gradient.
    std::span<T> accum(std::size_t id) {
        Node& n = nodes_[id];
        if (!n.requires_grad) return {};
        n.touched = true;
        if (n.sink != nullptr) return n.sink->data();
        if (n.grad.empty()) n.grad.assign(value(id).size(), T{0});
        return n.grad;
    }

private:
    struct Node {
        Shape shape;
        std::vector<T> value;
        const Tensor<T>* external = nullptr;
        Tensor<T>* sink = nullptr;
        std::vector<T> grad;
        bool requires_grad = false;
        bool touched = false;
        BackwardFn backward;
    };

    Var<T> push(Shape shape, std::vector<T> values, bool requires_grad) {
        if (values.size() != shape_size(shape)) throw ShapeError("tape value length does not match its shape");
        Node node;
        node.shape = std::move(shape);
        node.value = std::move(values);
        node.requires_grad = requires_grad;
        nodes_.push_back(std::move(node));
        return Var<T>{this, nodes_.size() - 1};
    }

    std::vector<Node> nodes_;
    std::unordered_map<const Tensor<T>*, std::size_t> params_;
    bool backward_done_ = false;
};

}  // namespace smajudge

#endif  // SMAJUDGE_NUMERICS_TAPE_HPP
