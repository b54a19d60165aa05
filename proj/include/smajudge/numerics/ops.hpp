// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_NUMERICS_OPS_HPP
#define SMAJUDGE_NUMERICS_OPS_HPP

// Differentiable forward primitives. Every op checks its operand shapes,
// rejects non-finite results and records a backward closure on the tape
// when any operand needs a gradient.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smajudge/numerics/error.hpp"
#include "smajudge/numerics/rng.hpp"
#include "smajudge/numerics/tape.hpp"

namespace smajudge {

enum class Activation { sigmoid, tanh };
enum class Mode { train, eval };

/// Probabilities are clamped to this floor before any log.
inline constexpr double kLogClamp = 1e-12;

namespace detail {

template <class T>
T stable_sigmoid(T x) {
    if (x >= T{0}) return T{1} / (T{1} + std::exp(-x));
    const T e = std::exp(x);
    return e / (T{1} + e);
}

template <class T>
void require_vector(const Var<T>& v, const char* op) {
    if (v.shape().size() != 1) {
        throw ShapeError(std::string(op) + ": expected a vector, got " + shape_string(v.shape()));
    }
}

template <class T>
void require_same_tape(const Var<T>& a, const Var<T>& b) {
    if (a.tape != b.tape) throw GradientError("operands recorded on different tapes");
}

}  // namespace detail

/// W x, with W of shape [m x n] and x of length n.
template <class T>
Var<T> matvec(Var<T> w, Var<T> x) {
    detail::require_same_tape(w, x);
    const Shape& ws = w.shape();
    if (ws.size() != 2 || x.size() != ws[1]) {
        throw ShapeError("matvec: cannot multiply " + shape_string(ws) + " by " + shape_string(x.shape()));
    }
    const std::size_t m = ws[0], n = ws[1];
    const auto W = w.value();
    const auto X = x.value();
    std::vector<T> out(m);
    for (std::size_t r = 0; r < m; ++r) {
        const T* row = W.data() + r * n;
        T acc{0};
        for (std::size_t c = 0; c < n; ++c) acc += row[c] * X[c];
        out[r] = acc;
    }
    const std::size_t wid = w.id, xid = x.id;
    return w.tape->record("matvec", Shape{m}, std::move(out), {w, x}, [wid, xid, m, n](Tape<T>& t, std::size_t self) {
        const auto g = t.grad_of(self);
        if (auto dw = t.accum(wid); !dw.empty()) {
            const auto X = t.value(xid);
            for (std::size_t r = 0; r < m; ++r) {
                const T gr = g[r];
                if (gr == T{0}) continue;
                T* row = dw.data() + r * n;
                for (std::size_t c = 0; c < n; ++c) row[c] += gr * X[c];
            }
        }
        if (auto dx = t.accum(xid); !dx.empty()) {
            const auto W = t.value(wid);
            for (std::size_t r = 0; r < m; ++r) {
                const T gr = g[r];
                if (gr == T{0}) continue;
                const T* row = W.data() + r * n;
                for (std::size_t c = 0; c < n; ++c) dx[c] += gr * row[c];
            }
        }
    });
}

/// Sum of matrix-vector products plus a bias: sum_k W_k x_k + b.
template <class T>
Var<T> linear(const std::vector<std::pair<Var<T>, Var<T>>>& terms, Var<T> b) {
    if (terms.empty()) throw ShapeError("linear: no terms");
    detail::require_vector(b, "linear");
    const std::size_t m = b.size();
    Tape<T>& tape = *b.tape;
    std::vector<T> out(b.value().begin(), b.value().end());
    bool needs = b.requires_grad();
    struct Term {
        std::size_t w, x, n;
    };
    std::vector<Term> ids;
    ids.reserve(terms.size());
    for (const auto& [w, x] : terms) {
        detail::require_same_tape(w, b);
        detail::require_same_tape(x, b);
        const Shape& ws = w.shape();
        if (ws.size() != 2 || ws[0] != m || x.size() != ws[1]) {
            throw ShapeError("linear: cannot apply " + shape_string(ws) + " to " + shape_string(x.shape()) +
                             " with bias " + shape_string(b.shape()));
        }
        const std::size_t n = ws[1];
        const auto W = w.value();
        const auto X = x.value();
        for (std::size_t r = 0; r < m; ++r) {
            const T* row = W.data() + r * n;
            T acc{0};
            for (std::size_t c = 0; c < n; ++c) acc += row[c] * X[c];
            out[r] += acc;
        }
        needs = needs || w.requires_grad() || x.requires_grad();
        ids.push_back({w.id, x.id, n});
    }
    const std::size_t bid = b.id;
    return tape.record_if("linear", Shape{m}, std::move(out), needs, [ids = std::move(ids), bid, m](Tape<T>& t, std::size_t self) {
        const auto g = t.grad_of(self);
        if (auto db = t.accum(bid); !db.empty()) {
            for (std::size_t r = 0; r < m; ++r) db[r] += g[r];
        }
        for (const auto& term : ids) {
            const std::size_t n = term.n;
            if (auto dw = t.accum(term.w); !dw.empty()) {
                const auto X = t.value(term.x);
                for (std::size_t r = 0; r < m; ++r) {
                    const T gr = g[r];
                    if (gr == T{0}) continue;
                    T* row = dw.data() + r * n;
                    for (std::size_t c = 0; c < n; ++c) row[c] += gr * X[c];
                }
            }
            if (auto dx = t.accum(term.x); !dx.empty()) {
                const auto W = t.value(term.w);
                for (std::size_t r = 0; r < m; ++r) {
                    const T gr = g[r];
                    if (gr == T{0}) continue;
                    const T* row = W.data() + r * n;
                    for (std::size_t c = 0; c < n; ++c) dx[c] += gr * row[c];
                }
            }
        }
    });
}

/// W x + b.
template <class T>
Var<T> affine(Var<T> x, Var<T> w, Var<T> b) {
    return linear<T>({{w, x}}, b);
}

template <class T>
Var<T> add(Var<T> a, Var<T> b) {
    detail::require_same_tape(a, b);
    if (a.shape() != b.shape()) {
        throw ShapeError("add: " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
    }
    const auto A = a.value(), B = b.value();
    std::vector<T> out(A.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = A[i] + B[i];
    const std::size_t aid = a.id, bid = b.id;
    return a.tape->record("add", a.shape(), std::move(out), {a, b}, [aid, bid](Tape<T>& t, std::size_t self) {
        const auto g = t.grad_of(self);
        if (auto da = t.accum(aid); !da.empty()) {
            for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i];
        }
        if (auto db = t.accum(bid); !db.empty()) {
            for (std::size_t i = 0; i < g.size(); ++i) db[i] += g[i];
        }
    });
}

/// Element-wise sum of equally shaped operands.
template <class T>
Var<T> sum(const std::vector<Var<T>>& parts) {
    if (parts.empty()) throw ShapeError("sum: no operands");
    if (parts.size() == 1) return parts.front();
    Var<T> acc = add(parts[0], parts[1]);
    for (std::size_t i = 2; i < parts.size(); ++i) acc = add(acc, parts[i]);
    return acc;
}

/// Hadamard product.
template <class T>
Var<T> mul(Var<T> a, Var<T> b) {
    detail::require_same_tape(a, b);
    if (a.shape() != b.shape()) {
        throw ShapeError("mul: " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
    }
    const auto A = a.value(), B = b.value();
    std::vector<T> out(A.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = A[i] * B[i];
    const std::size_t aid = a.id, bid = b.id;
    return a.tape->record("mul", a.shape(), std::move(out), {a, b}, [aid, bid](Tape<T>& t, std::size_t self) {
        const auto g = t.grad_of(self);
        if (auto da = t.accum(aid); !da.empty()) {
            const auto B = t.value(bid);
            for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] * B[i];
        }
        if (auto db = t.accum(bid); !db.empty()) {
            const auto A = t.value(aid);
            for (std::size_t i = 0; i < g.size(); ++i) db[i] += g[i] * A[i];
        }
    });
}

template <class T>
Var<T> scale(Var<T> a, T factor) {
    const auto A = a.value();
    std::vector<T> out(A.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = A[i] * factor;
    const std::size_t aid = a.id;
    return a.tape->record("scale", a.shape(), std::move(out), {a}, [aid, factor](Tape<T>& t, std::size_t self) {
        const auto g = t.grad_of(self);
        if (auto da = t.accum(aid); !da.empty()) {
            for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] * factor;
        }
    });
}

/// Element-wise sigmoid or tanh.
template <class T>
Var<T> activation(Var<T> x, Activation kind) {
    const auto X = x.value();
    std::vector<T> out(X.size());
    if (kind == Activation::sigmoid) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = detail::stable_sigmoid(X[i]);
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(X[i]);
    }
    const std::size_t xid = x.id;
    const char* name = kind == Activation::sigmoid ? "sigmoid" : "tanh";
    return x.tape->record(name, x.shape(), std::move(out), {x}, [xid, kind](Tape<T>& t, std::size_t self) {
        const auto g = t.grad_of(self);
        auto dx = t.accum(xid);
        if (dx.empty()) return;
        const auto y = t.value(self);
        if (kind == Activation::sigmoid) {
            for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i] * y[i] * (T{1} - y[i]);
        } else {
            for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i] * (T{1} - y[i] * y[i]);
        }
    });
}

template <class T>
Var<T> sigmoid(Var<T> x) {
    return activation(x, Activation::sigmoid);
}

template <class T>
Var<T> tanh(Var<T> x) {
    return activation(x, Activation::tanh);
}

/// Flattened concatenation, in argument order.
template <class T>
Var<T> concat(const std::vector<Var<T>>& parts) {
    if (parts.empty()) throw ShapeError("concat: no operands");
    std::vector<T> out;
    std::vector<std::pair<std::size_t, std::size_t>> ids;  // (node, offset)
    bool needs = false;
    for (const auto& p : parts) {
        detail::require_same_tape(p, parts.front());
        ids.emplace_back(p.id, out.size());
        const auto v = p.value();
        out.insert(out.end(), v.begin(), v.end());
        needs = needs || p.requires_grad();
    }
    const std::size_t n = out.size();
    return parts.front().tape->record_if("concat", Shape{n}, std::move(out), needs, [ids = std::move(ids)](Tape<T>& t, std::size_t self) {
        const auto g = t.grad_of(self);
        for (const auto& [id, offset] : ids) {
            auto d = t.accum(id);
            for (std::size_t i = 0; i < d.size(); ++i) d[i] += g[offset + i];
        }
    });
}

/// Elements [offset, offset + length) of a flattened operand, as a vector.
template <class T>
Var<T> slice(Var<T> a, std::size_t offset, std::size_t length) {
    const auto A = a.value();
    if (length == 0 || offset + length > A.size()) {
        throw ShapeError("slice [" + std::to_string(offset) + ", " + std::to_string(offset + length) +
                         ") out of range for " + shape_string(a.shape()));
    }
    std::vector<T> out(A.begin() + static_cast<std::ptrdiff_t>(offset), A.begin() + static_cast<std::ptrdiff_t>(offset + length));
    const std::size_t aid = a.id;
    return a.tape->record("slice", Shape{length}, std::move(out), {a}, [aid, offset](Tape<T>& t, std::size_t self) {
        const auto g = t.grad_of(self);
        if (auto da = t.accum(aid); !da.empty()) {
            for (std::size_t i = 0; i < g.size(); ++i) da[offset + i] += g[i];
        }
    });
}

/// Row `r` of a matrix.
template <class T>
Var<T> row(Var<T> m, std::size_t r) {
    const Shape& s = m.shape();
    if (s.size() != 2 || r >= s[0]) throw ShapeError("row " + std::to_string(r) + " out of range for " + shape_string(s));
    return slice(m, r * s[1], s[1]);
}

/// Inner product of two vectors, as a scalar.
template <class T>
Var<T> dot(Var<T> a, Var<T> b) {
    detail::require_same_tape(a, b);
    if (a.size() != b.size()) throw ShapeError("dot: " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
    const auto A = a.value(), B = b.value();
    T acc{0};
    for (std::size_t i = 0; i < A.size(); ++i) acc += A[i] * B[i];
    const std::size_t aid = a.id, bid = b.id;
    return a.tape->record("dot", Shape{}, {acc}, {a, b}, [aid, bid](Tape<T>& t, std::size_t self) {
        const T g = t.grad_of(self)[0];
        if (auto da = t.accum(aid); !da.empty()) {
            const auto B = t.value(bid);
            for (std::size_t i = 0; i < da.size(); ++i) da[i] += g * B[i];
        }
        if (auto db = t.accum(bid); !db.empty()) {
            const auto A = t.value(aid);
            for (std::size_t i = 0; i < db.size(); ++i) db[i] += g * A[i];
        }
    });
}

/// Exp-normalize with max subtraction.
template <class T>
Var<T> softmax(Var<T> v) {
    const auto V = v.value();
    if (V.empty()) throw ShapeError("softmax: empty input");
    const T peak = *std::max_element(V.begin(), V.end());
    std::vector<T> out(V.size());
    T z{0};
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::exp(V[i] - peak);
        z += out[i];
    }
    for (T& o : out) o /= z;
    const std::size_t vid = v.id;
    const std::size_t n = out.size();
    return v.tape->record("softmax", Shape{n}, std::move(out), {v}, [vid](Tape<T>& t, std::size_t self) {
        const auto g = t.grad_of(self);
        auto dv = t.accum(vid);
        if (dv.empty()) return;
        const auto y = t.value(self);
        T gy{0};
        for (std::size_t i = 0; i < g.size(); ++i) gy += g[i] * y[i];
        for (std::size_t i = 0; i < g.size(); ++i) dv[i] += y[i] * (g[i] - gy);
    });
}

/// -log(max(pred[truth], 1e-12)) for a predicted distribution.
template <class T>
Var<T> cross_entropy(Var<T> pred, std::size_t truth) {
    const auto P = pred.value();
    if (truth >= P.size()) {
        throw DataError("cross_entropy: label " + std::to_string(truth) + " out of range for " +
                        std::to_string(P.size()) + " classes");
    }
    const T clamp = static_cast<T>(kLogClamp);
    const T p = std::max(P[truth], clamp);
    const std::size_t pid = pred.id;
    const bool clamped = P[truth] < clamp;
    return pred.tape->record("cross_entropy", Shape{}, {-std::log(p)}, {pred}, [pid, truth, p, clamped](Tape<T>& t, std::size_t self) {
        if (clamped) return;
        const T g = t.grad_of(self)[0];
        if (auto dp = t.accum(pid); !dp.empty()) dp[truth] += -g / p;
    });
}

/// -[w y log p + (1 - y) log(1 - p)] with both logs clamped; w weights the
/// positive class and defaults to 1.
template <class T>
Var<T> binary_cross_entropy(Var<T> prob, int label, T positive_weight = T{1}) {
    if (prob.size() != 1) throw ShapeError("binary_cross_entropy: expected a scalar probability");
    if (label != 0 && label != 1) throw DataError("binary_cross_entropy: label must be 0 or 1");
    const T p = prob.value()[0];
    if (!(p >= T{0} && p <= T{1})) throw DataError("binary_cross_entropy: probability outside [0, 1]");
    const T clamp = static_cast<T>(kLogClamp);
    const T q = label == 1 ? p : T{1} - p;
    const T qc = std::max(q, clamp);
    const T weight = label == 1 ? positive_weight : T{1};
    const std::size_t pid = prob.id;
    const bool clamped = q < clamp;
    return prob.tape->record("binary_cross_entropy", Shape{}, {-weight * std::log(qc)}, {prob},
                             [pid, label, qc, weight, clamped](Tape<T>& t, std::size_t self) {
                                 if (clamped) return;
                                 const T g = t.grad_of(self)[0];
                                 auto dp = t.accum(pid);
                                 if (dp.empty()) return;
                                 // dq/dp is +1 for the positive label and -1 otherwise.
                                 dp[0] += (label == 1 ? -g : g) * weight / qc;
                             });
}

/// sum_i alpha_i h_i over equally sized vectors h_i.
template <class T>
Var<T> weighted_sum(Var<T> alpha, const std::vector<Var<T>>& items) {
    if (items.empty() || alpha.size() != items.size()) {
        throw ShapeError("weighted_sum: " + std::to_string(alpha.size()) + " weights for " +
                         std::to_string(items.size()) + " items");
    }
    const std::size_t d = items.front().size();
    const auto A = alpha.value();
    std::vector<T> out(d, T{0});
    std::vector<std::size_t> ids;
    bool needs = alpha.requires_grad();
    for (std::size_t i = 0; i < items.size(); ++i) {
        detail::require_same_tape(items[i], alpha);
        if (items[i].size() != d) throw ShapeError("weighted_sum: items differ in length");
        const auto H = items[i].value();
        for (std::size_t k = 0; k < d; ++k) out[k] += A[i] * H[k];
        ids.push_back(items[i].id);
        needs = needs || items[i].requires_grad();
    }
    const std::size_t aid = alpha.id;
    return alpha.tape->record_if("weighted_sum", Shape{d}, std::move(out), needs, [aid, ids = std::move(ids), d](Tape<T>& t, std::size_t self) {
        const auto g = t.grad_of(self);
        auto da = t.accum(aid);
        const auto A = t.value(aid);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const auto H = t.value(ids[i]);
            if (!da.empty()) {
                T acc{0};
                for (std::size_t k = 0; k < d; ++k) acc += g[k] * H[k];
                da[i] += acc;
            }
            if (auto dh = t.accum(ids[i]); !dh.empty()) {
                for (std::size_t k = 0; k < d; ++k) dh[k] += A[i] * g[k];
            }
        }
    });
}

/// sum_i w_i s_i over scalar operands.
template <class T>
Var<T> weighted_total(const std::vector<Var<T>>& scalars, const std::vector<T>& weights) {
    if (scalars.empty() || scalars.size() != weights.size()) throw ShapeError("weighted_total: operand count mismatch");
    T acc{0};
    std::vector<std::size_t> ids;
    bool needs = false;
    for (std::size_t i = 0; i < scalars.size(); ++i) {
        if (scalars[i].size() != 1) throw ShapeError("weighted_total: operands must be scalars");
        const T v = scalars[i].value()[0];
        if (!std::isfinite(v)) throw NumericError("weighted_total: non-finite operand");
        acc += weights[i] * v;
        ids.push_back(scalars[i].id);
        needs = needs || scalars[i].requires_grad();
    }
    return scalars.front().tape->record_if("weighted_total", Shape{}, {acc}, needs, [ids = std::move(ids), weights](Tape<T>& t, std::size_t self) {
        const T g = t.grad_of(self)[0];
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (auto d = t.accum(ids[i]); !d.empty()) d[0] += g * weights[i];
        }
    });
}

/// Rows of `table` selected by `ids`, as an [N x k] matrix. Rows equal to
/// `frozen_row` receive no gradient.
template <class T>
Var<T> gather_rows(Var<T> table, const std::vector<std::size_t>& ids, std::size_t frozen_row = std::numeric_limits<std::size_t>::max()) {
    const Shape& s = table.shape();
    if (s.size() != 2) throw ShapeError("gather_rows: table must be a matrix");
    if (ids.empty()) throw ShapeError("gather_rows: empty sequence");
    const std::size_t k = s[1];
    const auto W = table.value();
    std::vector<T> out;
    out.reserve(ids.size() * k);
    for (std::size_t id : ids) {
        if (id >= s[0]) throw DataError("token id " + std::to_string(id) + " out of range for " + std::to_string(s[0]) + " rows");
        out.insert(out.end(), W.begin() + static_cast<std::ptrdiff_t>(id * k), W.begin() + static_cast<std::ptrdiff_t>((id + 1) * k));
    }
    const std::size_t tid = table.id;
    return table.tape->record("gather_rows", Shape{ids.size(), k}, std::move(out), {table},
                              [tid, ids, k, frozen_row](Tape<T>& t, std::size_t self) {
                                  const auto g = t.grad_of(self);
                                  auto dt = t.accum(tid);
                                  if (dt.empty()) return;
                                  for (std::size_t i = 0; i < ids.size(); ++i) {
                                      if (ids[i] == frozen_row) continue;
                                      T* dst = dt.data() + ids[i] * k;
                                      for (std::size_t c = 0; c < k; ++c) dst[c] += g[i * k + c];
                                  }
                              });
}

/// Inverted dropout: in train mode each element is zeroed with probability
/// `rate` and survivors are scaled by 1 / (1 - rate). Eval mode and rate 0
/// return the operand itself.
template <class T>
Var<T> dropout(Var<T> x, double rate, Mode mode, RngStream& rng) {
    if (!(rate >= 0.0 && rate < 1.0)) throw ConfigError("dropout rate must be in [0, 1)");
    if (mode == Mode::eval || rate == 0.0) return x;
    const auto X = x.value();
    const T keep_scale = static_cast<T>(1.0 / (1.0 - rate));
    std::vector<T> mask(X.size());
    std::vector<T> out(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        mask[i] = rng.uniform() < rate ? T{0} : keep_scale;
        out[i] = X[i] * mask[i];
    }
    const std::size_t xid = x.id;
    return x.tape->record("dropout", x.shape(), std::move(out), {x}, [xid, mask = std::move(mask)](Tape<T>& t, std::size_t self) {
        const auto g = t.grad_of(self);
        if (auto dx = t.accum(xid); !dx.empty()) {
            for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i] * mask[i];
        }
    });
}

}  // namespace smajudge

#endif  // SMAJUDGE_NUMERICS_OPS_HPP
