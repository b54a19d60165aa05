// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_TRAINING_MODEL_HPP
#define SMAJUDGE_TRAINING_MODEL_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <zlib.h>

#include "smajudge/appellate/heads.hpp"
#include "smajudge/encoders/attention.hpp"
#include "smajudge/encoders/embedding.hpp"
#include "smajudge/lower_court/dependency_cell.hpp"
#include "smajudge/training/config.hpp"
#include "smajudge/training/data.hpp"

namespace smajudge {

/// Sizes every parameter shape is derived from.
struct ModelDims {
    std::size_t vocabulary = 0;
    std::size_t embedding = 0;
    std::size_t hidden = 0;
    std::size_t lower_articles = 0;
    std::size_t charges = 0;
    std::size_t penalty = kPenaltyIntervals;
    std::size_t appellate_articles = 0;

    friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

inline ModelDims model_dims(const TrainConfig& c, const Vocabulary& vocab, const LabelSpaces& labels) {
    return {vocab.size(), c.embedding_dim, c.hidden, labels.lower_articles.size(), labels.charges.size(), kPenaltyIntervals,
            labels.appellate_articles.size()};
}

inline std::size_t task_classes(const ModelDims& d, LowerTask t) {
    switch (t) {
        case LowerTask::law_article: return d.lower_articles;
        case LowerTask::charge: return d.charges;
        case LowerTask::penalty: return d.penalty;
    }
    return 0;
}

/// Linear map without bias.
struct Projection {
    Mat weight;
};

/// All trainable tensors. The same struct, zero-filled, holds gradients.
/// Optional members exist only for the variants that use them:
/// grounds encoder and attention for every variant but no_attention;
/// a second embedding table and both projections for separate_components.
struct SmaJudgeParams {
    Variant variant = Variant::full;
    TaskGraph graph = TaskGraph::standard();
    EmbeddingTable embedding;
    BiLstmEncoder lower_encoder;
    BiLstmEncoder appellate_encoder;
    std::optional<BiLstmEncoder> grounds_encoder;
    std::optional<AttentionParams> attention;
    LowerCourtParams lower;
    AppellateParams appellate;
    std::optional<EmbeddingTable> appellate_embedding;
    std::optional<Projection> lower_projection;      // [2H x 2H]
    std::optional<Projection> appellate_projection;  // [2H x (width of h^a)]

    /// Calls f(name, tensor) for every tensor in declaration order.
    template <class F>
    void visit(F&& f) {
        visit_impl(*this, f);
    }
    template <class F>
    void visit(F&& f) const {
        visit_impl(*this, f);
    }

private:
    template <class Self, class F>
    static void visit_impl(Self& s, F& f) {
        auto lstm = [&f](const std::string& p, auto& enc) {
            for (auto* dir : {&enc.forward, &enc.backward}) {
                const std::string q = p + (dir == &enc.forward ? ".forward" : ".backward");
                f(q + ".input_weights", dir->input_weights);
                f(q + ".recurrent_weights", dir->recurrent_weights);
                f(q + ".bias", dir->bias);
            }
        };
        f(std::string("embedding"), s.embedding.weights);
        lstm("lower_encoder", s.lower_encoder);
        lstm("appellate_encoder", s.appellate_encoder);
        if (s.grounds_encoder) lstm("grounds_encoder", *s.grounds_encoder);
        if (s.attention) {
            f(std::string("attention.context_weight"), s.attention->context_weight);
            f(std::string("attention.context_bias"), s.attention->context_bias);
            f(std::string("attention.fact_projection"), s.attention->fact_projection);
        }
        for (std::size_t j = 0; j < s.lower.cells.size(); ++j) {
            auto& cell = s.lower.cells[j];
            const std::string p = "lower.cell" + std::to_string(j);
            for (std::size_t k = 0; k < cell.pairs.size(); ++k) {
                const std::string q = p + ".pair" + std::to_string(k);
                f(q + ".forget", cell.pairs[k].forget);
                f(q + ".input", cell.pairs[k].input);
                f(q + ".output", cell.pairs[k].output);
                f(q + ".candidate", cell.pairs[k].candidate);
            }
            f(p + ".forget_bias", cell.forget_bias);
            f(p + ".input_bias", cell.input_bias);
            f(p + ".output_bias", cell.output_bias);
            f(p + ".candidate_bias", cell.candidate_bias);
        }
        for (std::size_t j = 0; j < s.lower.heads.size(); ++j) {
            const std::string p = "lower.head" + std::to_string(j);
            f(p + ".weight", s.lower.heads[j].weight);
            f(p + ".bias", s.lower.heads[j].bias);
        }
        f(std::string("appellate.ruling.weight"), s.appellate.ruling.weight);
        f(std::string("appellate.ruling.bias"), s.appellate.ruling.bias);
        f(std::string("appellate.article.weight"), s.appellate.article.weight);
        f(std::string("appellate.article.bias"), s.appellate.article.bias);
        if (s.appellate_embedding) f(std::string("appellate_embedding"), s.appellate_embedding->weights);
        if (s.lower_projection) f(std::string("lower_projection"), s.lower_projection->weight);
        if (s.appellate_projection) f(std::string("appellate_projection"), s.appellate_projection->weight);
    }
};

/// Width of the appellate fact representation h^a for a variant.
inline std::size_t appellate_repr_dim(Variant v, std::size_t hidden) { return v == Variant::no_attention ? 2 * hidden : 4 * hidden; }

/// Width of the appellate heads' input.
inline std::size_t appellate_head_dim(Variant v, std::size_t hidden) {
    if (v == Variant::separate_components) return 2 * hidden;
    return 2 * hidden + appellate_repr_dim(v, hidden);
}

/// Fresh parameters. Each group draws from its own fork of `seed`, so groups
/// shared between variants start from identical values.
inline SmaJudgeParams init_params(const ModelDims& d, Variant variant, const TaskGraph& graph, std::uint64_t seed) {
    require_valid(graph);
    if (d.vocabulary < 2 || d.embedding == 0 || d.hidden == 0) throw ConfigError("init_params: degenerate dimensions");
    if (d.lower_articles == 0 || d.charges == 0 || d.appellate_articles == 0 || d.penalty == 0) {
        throw ConfigError("init_params: empty label space");
    }
    const RngStream root(seed);
    const std::size_t h2 = 2 * d.hidden;
    SmaJudgeParams p;
    p.variant = variant;
    p.graph = graph;
    {
        RngStream r = root.fork(1);
        p.embedding = EmbeddingTable::random(d.vocabulary, d.embedding, r);
    }
    {
        RngStream r = root.fork(2);
        p.lower_encoder = BiLstmEncoder::random(d.embedding, d.hidden, r);
    }
    {
        RngStream r = root.fork(3);
        p.appellate_encoder = BiLstmEncoder::random(d.embedding, d.hidden, r);
    }
    if (variant != Variant::no_attention) {
        RngStream r = root.fork(4);
        p.grounds_encoder = BiLstmEncoder::random(d.embedding, d.hidden, r);
        RngStream a = root.fork(5);
        p.attention = AttentionParams::random(h2, h2, a);
    }
    for (std::size_t j = 0; j < graph.tasks.size(); ++j) {
        RngStream r = root.fork(100 + j);
        p.lower.cells.push_back(DependencyCellParams::random(graph.tasks[j].dependencies.size(), h2, h2, r));
        RngStream q = root.fork(200 + j);
        p.lower.heads.push_back(SubtaskHead::random(task_classes(d, graph.tasks[j].kind), h2, q));
    }
    {
        const std::size_t in = appellate_head_dim(variant, d.hidden);
        RngStream r = root.fork(6);
        p.appellate.ruling = RulingHead::random(in, r);
        RngStream q = root.fork(7);
        p.appellate.article = ArticleHead::random(d.appellate_articles, in, q);
    }
    if (variant == Variant::separate_components) {
        RngStream r = root.fork(8);
        p.appellate_embedding = EmbeddingTable::random(d.vocabulary, d.embedding, r);
        RngStream a = root.fork(9);
        p.lower_projection = Projection{glorot_matrix(h2, h2, a)};
        RngStream b = root.fork(10);
        p.appellate_projection = Projection{glorot_matrix(h2, appellate_repr_dim(variant, d.hidden), b)};
    }
    return p;
}

/// Same structure as `p` with every tensor zeroed.
inline SmaJudgeParams zeros_like(const SmaJudgeParams& p) {
    SmaJudgeParams z = p;
    z.visit([](const std::string&, Mat& t) { t.fill(Real{0}); });
    return z;
}

inline std::size_t parameter_count(const SmaJudgeParams& p) {
    std::size_t n = 0;
    p.visit([&n](const std::string&, const Mat& t) { n += t.size(); });
    return n;
}

/// CRC-32 over names, shapes and raw values; equal digests mean equal
/// parameters for all practical purposes.
inline std::uint32_t parameter_digest(const SmaJudgeParams& p) {
    uLong crc = crc32(0L, Z_NULL, 0);
    p.visit([&crc](const std::string& name, const Mat& t) {
        crc = crc32(crc, reinterpret_cast<const Bytef*>(name.data()), static_cast<uInt>(name.size()));
        for (std::size_t s : t.shape()) {
            const auto v = static_cast<std::uint64_t>(s);
            crc = crc32(crc, reinterpret_cast<const Bytef*>(&v), sizeof v);
        }
        crc = crc32(crc, reinterpret_cast<const Bytef*>(t.data().data()), static_cast<uInt>(t.size() * sizeof(Real)));
    });
    return static_cast<std::uint32_t>(crc);
}

/// Parameters of the lower-court component: everything a lower-court loss
/// can reach. Fine-tuning updates exactly these.
inline bool is_lower_court_group(const std::string& name) {
    return name == "embedding" || name.rfind("lower_encoder.", 0) == 0 || name.rfind("lower.", 0) == 0 ||
           name == "lower_projection";
}

struct ForwardOptions {
    Mode mode = Mode::eval;
    double dropout = 0.0;
    RngStream* rng = nullptr;  // required when mode is train and dropout > 0
    bool lower_only = false;
};

struct ForwardResult {
    LowerCourtOutput lower;
    Var<Real> h_lower;  // h^l before dropout
    std::optional<Var<Real>> h_appellate;
    std::optional<Var<Real>> alpha;
    std::optional<Var<Real>> ruling;   // one-element probability
    std::optional<Var<Real>> article;  // distribution over appellate articles
    std::optional<Var<Real>> lower_projected;
    std::optional<Var<Real>> appellate_projected;
};

/// One pass over a document. Gradients go to `grads` when it is non-null.
inline ForwardResult forward(Tape<Real>& tape, const SmaJudgeParams& p, SmaJudgeParams* grads, const EncodedDocument& doc,
                             const ForwardOptions& opt) {
    const bool drop = opt.mode == Mode::train && opt.dropout > 0;
    if (drop && opt.rng == nullptr) throw ConfigError("forward: training-mode dropout needs an RNG");
    RngStream dummy(0);
    RngStream& rng = opt.rng ? *opt.rng : dummy;
    auto dropped = [&](Var<Real> v) { return drop ? dropout(v, opt.dropout, opt.mode, rng) : v; };

    const Var<Real> table = tape.param(p.embedding.weights, grads ? &grads->embedding.weights : nullptr);
    const HiddenSequence lower_states =
        bilstm_encode(embed_sequence(table, doc.lower_facts), bind(tape, p.lower_encoder, grads ? &grads->lower_encoder : nullptr));
    const Var<Real> h_l = lower_states.back();
    Var<Real> cell_input = dropped(h_l);
    if (p.lower_projection) {
        cell_input = matvec(tape.param(p.lower_projection->weight, grads ? &grads->lower_projection->weight : nullptr), cell_input);
    }
    ForwardResult out{run_lower_court(cell_input, p.graph, bind(tape, p.lower, grads ? &grads->lower : nullptr)), h_l, {}, {}, {}, {}, {}, {}};
    if (opt.lower_only) return out;

    const bool separate = p.variant == Variant::separate_components;
    const Var<Real> app_table =
        separate ? tape.param(p.appellate_embedding->weights, grads ? &grads->appellate_embedding->weights : nullptr) : table;
    const HiddenSequence fact_states = bilstm_encode(embed_sequence(app_table, doc.appellate_facts),
                                                     bind(tape, p.appellate_encoder, grads ? &grads->appellate_encoder : nullptr));
    Var<Real> h_a = fact_states.back();
    if (p.attention) {
        const HiddenSequence grounds_states = bilstm_encode(embed_sequence(app_table, doc.grounds),
                                                            bind(tape, *p.grounds_encoder, grads ? &*grads->grounds_encoder : nullptr));
        const AttentionResult att =
            grounds_attention(fact_states, grounds_states.back(), bind(tape, *p.attention, grads ? &*grads->attention : nullptr));
        out.alpha = att.alpha;
        h_a = appellate_fact_repr(fact_states, att.u);
    }
    out.h_appellate = h_a;

    Var<Real> head_input = h_a;
    if (separate) {
        const Var<Real> pa = tape.param(p.appellate_projection->weight, grads ? &grads->appellate_projection->weight : nullptr);
        head_input = matvec(pa, dropped(h_a));
        out.appellate_projected = matvec(pa, h_a);
        out.lower_projected =
            matvec(tape.param(p.lower_projection->weight, grads ? &grads->lower_projection->weight : nullptr), h_l);
    } else if (p.variant == Variant::no_attention) {
        head_input = dropped(concat<Real>({h_l, h_a}));
    } else {
        head_input = dropped(combine(h_l, h_a));
    }
    const AppellateVars heads = bind(tape, p.appellate, grads ? &grads->appellate : nullptr);
    out.ruling = predict_ruling(head_input, heads);
    out.article = predict_article(head_input, heads);
    return out;
}

/// sum_i lambda_i L_i.
inline Var<Real> joint_loss(const std::array<Var<Real>, kLossCount>& losses, const std::array<double, kLossCount>& weights) {
    std::vector<Real> w;
    for (double x : weights) {
        if (!(x >= 0) || !std::isfinite(x)) throw ConfigError("loss weights must be finite and non-negative");
        w.push_back(static_cast<Real>(x));
    }
    return weighted_total<Real>({losses.begin(), losses.end()}, w);
}

/// Scalar form of the joint loss.
inline double joint_loss_value(const std::array<double, kLossCount>& losses, const std::array<double, kLossCount>& weights) {
    double total = 0;
    for (std::size_t i = 0; i < kLossCount; ++i) {
        if (!std::isfinite(losses[i])) throw NumericError("joint_loss: non-finite loss " + std::string(kLossNames[i]));
        if (!(weights[i] >= 0) || !std::isfinite(weights[i])) throw ConfigError("loss weights must be finite and non-negative");
        total += weights[i] * losses[i];
    }
    return total;
}

/// Per-task losses in loss order.
inline std::array<Var<Real>, kLossCount> task_losses(const ForwardResult& r, const SmaJudgeParams& p, const EncodedDocument& doc,
                                                     Real positive_weight) {
    if (!doc.lower || !doc.appeal) throw DataError(doc.case_id + ": training needs both judgments");
    if (!r.ruling || !r.article) throw std::logic_error("task_losses: forward pass ran without the appellate component");
    const std::array<std::size_t, 3> truth = {doc.lower->article, doc.lower->charge, doc.lower->penalty};
    std::array<Var<Real>, kLossCount> out;
    for (LowerTask t : {LowerTask::law_article, LowerTask::charge, LowerTask::penalty}) {
        const auto k = static_cast<std::size_t>(t);
        out[k] = lower_subtask_loss(r.lower.tasks[p.graph.position(t)].distribution, truth[k]);
    }
    out[3] = ruling_loss(*r.ruling, doc.appeal->ruling, positive_weight);
    out[4] = article_loss(*r.article, doc.appeal->article);
    return out;
}

/// L^l_1 + L^l_2 + L^l_3 against the document's lower-court record.
inline Var<Real> lower_court_loss(const ForwardResult& r, const SmaJudgeParams& p, const LowerTargets& t) {
    return sum<Real>({lower_subtask_loss(r.lower.tasks[p.graph.position(LowerTask::law_article)].distribution, t.article),
                      lower_subtask_loss(r.lower.tasks[p.graph.position(LowerTask::charge)].distribution, t.charge),
                      lower_subtask_loss(r.lower.tasks[p.graph.position(LowerTask::penalty)].distribution, t.penalty)});
}

}  // namespace smajudge

#endif  // SMAJUDGE_TRAINING_MODEL_HPP
