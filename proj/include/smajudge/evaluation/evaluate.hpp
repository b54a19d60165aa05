// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_EVALUATION_EVALUATE_HPP
#define SMAJUDGE_EVALUATION_EVALUATE_HPP

#include <array>
#include <vector>

#include <nlohmann/json.hpp>

#include "smajudge/evaluation/metrics.hpp"
#include "smajudge/training/predict.hpp"
#include "smajudge/training/trainer.hpp"

namespace smajudge {

/// Metrics of the five subtasks in loss order. The two appellate subtasks
/// use fine-tune-then-predict; the lower-court subtasks use a plain
/// forward pass of the stored parameters.
struct EvaluationReport {
    std::array<MetricsReport, kLossCount> tasks;
    std::vector<AppealPrediction> predictions;
};

inline std::array<std::size_t, kLossCount> task_class_counts(const ModelDims& d) {
    return {d.lower_articles, d.charges, d.penalty, 2, d.appellate_articles};
}

inline EvaluationReport evaluate_model(const SmaJudgeParams& params, const ModelDims& dims, const std::vector<EncodedDocument>& docs,
                                       const PredictOptions& predict) {
    if (docs.empty()) throw DataError("evaluate_model: no documents");
    const TaskPredictions plain = plain_predictions(params, docs);
    std::vector<AppealPrediction> preds(docs.size());
    parallel_chunks(docs.size(), thread_count(), [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) preds[k] = predict_appeal(params, docs[k], predict);
    });
    EvaluationReport report;
    const auto classes = task_class_counts(dims);
    for (std::size_t i = 0; i < 3; ++i) report.tasks[i] = evaluate_labels(plain.predicted[i], plain.truth[i], classes[i]);
    std::vector<std::size_t> ruling, article;
    for (const auto& p : preds) {
        ruling.push_back(static_cast<std::size_t>(p.ruling));
        article.push_back(p.article);
    }
    report.tasks[3] = evaluate_labels(ruling, plain.truth[3], 2);
    report.tasks[4] = evaluate_labels(article, plain.truth[4], classes[4]);
    report.predictions = std::move(preds);
    return report;
}

inline nlohmann::ordered_json to_json(const EvaluationReport& r) {
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < kLossCount; ++i) j[kLossNames[i]] = to_json(r.tasks[i]);
    return j;
}

}  // namespace smajudge

#endif  // SMAJUDGE_EVALUATION_EVALUATE_HPP
