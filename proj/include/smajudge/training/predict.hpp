// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_TRAINING_PREDICT_HPP
#define SMAJUDGE_TRAINING_PREDICT_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "smajudge/evaluation/mlma.hpp"
#include "smajudge/numerics/adam.hpp"
#include "smajudge/training/model.hpp"

namespace smajudge {

struct AppealPrediction {
    std::string case_id;
    double probability = 0;  // sigmoid output of the ruling head
    int ruling = 0;
    std::vector<double> article_distribution;
    std::size_t article = 0;
    std::vector<double> alpha;  // over appellate fact tokens; empty without attention
    std::array<std::size_t, 3> lower{};  // predicted article, charge, interval id after fine-tuning
    bool fine_tuned = false;
    std::string warning;
    std::optional<SimilarityDecision> similarity;  // separate-components variant only
};

struct PredictOptions {
    std::size_t finetune_steps = 1;
    double learning_rate = 0.003;
};

/// `steps` Adam updates of a copy of `params` on L^l_1 + L^l_2 + L^l_3 of one
/// document, with fresh optimizer state and no dropout. Only lower-court
/// groups move.
inline SmaJudgeParams finetune_lower_court(const SmaJudgeParams& params, const EncodedDocument& doc, std::size_t steps,
                                           double learning_rate) {
    if (!doc.lower) throw DataError(doc.case_id + ": fine-tuning needs the lower-court judgment");
    SmaJudgeParams clone = params;
    if (steps == 0) return clone;
    std::vector<Mat*> targets;
    clone.visit([&](const std::string& name, Mat& t) {
        if (is_lower_court_group(name)) targets.push_back(&t);
    });
    AdamState<Real> state(AdamConfig{learning_rate});
    for (std::size_t s = 0; s < steps; ++s) {
        SmaJudgeParams grads = zeros_like(clone);
        Tape<Real> tape;
        ForwardOptions opt;
        opt.lower_only = true;
        const ForwardResult r = forward(tape, clone, &grads, doc, opt);
        tape.backward(lower_court_loss(r, clone, *doc.lower));
        std::vector<const Mat*> g;
        grads.visit([&](const std::string& name, const Mat& t) {
            if (is_lower_court_group(name)) g.push_back(&t);
        });
        adam_step<Real>(targets, g, state);
    }
    return clone;
}

/// Fine-tune-then-predict on a private copy; `params` is never modified.
/// Without a usable lower-court record the prediction is a plain forward
/// pass and `warning` says why.
inline AppealPrediction predict_appeal(const SmaJudgeParams& params, const EncodedDocument& doc, const PredictOptions& opt) {
    AppealPrediction out;
    out.case_id = doc.case_id;
    std::optional<SmaJudgeParams> tuned;
    if (doc.lower && opt.finetune_steps > 0) {
        tuned = finetune_lower_court(params, doc, opt.finetune_steps, opt.learning_rate);
        out.fine_tuned = true;
    } else if (!doc.lower) {
        out.warning = "no usable lower-court judgment; predicted without fine-tuning";
    }
    const SmaJudgeParams& model = tuned ? *tuned : params;
    Tape<Real> tape;
    const ForwardResult r = forward(tape, model, nullptr, doc, {});
    out.probability = static_cast<double>(r.ruling->item());
    out.ruling = ruling_class(out.probability);
    const auto dist = r.article->value();
    out.article_distribution.assign(dist.begin(), dist.end());
    out.article = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
    if (r.alpha) out.alpha.assign(r.alpha->value().begin(), r.alpha->value().end());
    for (LowerTask t : {LowerTask::law_article, LowerTask::charge, LowerTask::penalty}) {
        const auto v = r.lower.tasks[model.graph.position(t)].distribution.value();
        out.lower[static_cast<std::size_t>(t)] = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    }
    if (r.lower_projected && r.appellate_projected) {
        out.similarity = mlma_similarity_predict<Real>(r.lower_projected->value(), r.appellate_projected->value());
        out.ruling = out.similarity->ruling;
    }
    return out;
}

}  // namespace smajudge

#endif  // SMAJUDGE_TRAINING_PREDICT_HPP
