// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_EVALUATION_METRICS_HPP
#define SMAJUDGE_EVALUATION_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smajudge/numerics/error.hpp"

namespace smajudge {

/// One-vs-rest counts per class.
struct ConfusionCounts {
    std::size_t classes = 0;
    std::size_t samples = 0;
    std::vector<std::uint64_t> tp, fp, tn, fn;

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

inline ConfusionCounts confusion_counts(const std::vector<std::size_t>& predictions, const std::vector<std::size_t>& truths,
                                        std::size_t classes) {
    if (predictions.size() != truths.size()) {
        throw DataError("confusion_counts: " + std::to_string(predictions.size()) + " predictions for " +
                        std::to_string(truths.size()) + " labels");
    }
    if (predictions.empty()) throw DataError("confusion_counts: empty input");
    if (classes == 0) throw DataError("confusion_counts: no classes");
    ConfusionCounts c{classes, predictions.size(), std::vector<std::uint64_t>(classes), std::vector<std::uint64_t>(classes),
                      std::vector<std::uint64_t>(classes), std::vector<std::uint64_t>(classes)};
    for (std::size_t k = 0; k < predictions.size(); ++k) {
        const std::size_t p = predictions[k], t = truths[k];
        if (p >= classes || t >= classes) throw DataError("confusion_counts: label out of range at position " + std::to_string(k));
        if (p == t) {
            ++c.tp[p];
        } else {
            ++c.fp[p];
            ++c.fn[t];
        }
    }
    for (std::size_t i = 0; i < classes; ++i) c.tn[i] = c.samples - c.tp[i] - c.fp[i] - c.fn[i];
    return c;
}

/// Acc, MP, MR and F1 from pooled sums over classes:
///   Acc = (sum TP + sum TN) / sum (TP + TN + FP + FN)
///   MP = sum TP / (sum TP + sum FP),  MR = sum TP / (sum TP + sum FN)
///   F1 = 2 MP MR / (MP + MR)
/// A zero denominator yields 0 and sets the matching flag. The macro_*
/// fields are per-class averages kept for diagnostics only.
struct MetricsReport {
    double accuracy = 0, precision = 0, recall = 0, f1 = 0;
    bool accuracy_undefined = false, precision_undefined = false, recall_undefined = false, f1_undefined = false;
    double macro_precision = 0, macro_recall = 0, macro_f1 = 0;
    ConfusionCounts counts;
};

namespace detail {

inline double ratio(double num, double den, bool& undefined) {
    if (den == 0) {
        undefined = true;
        return 0.0;
    }
    return num / den;
}

}  // namespace detail

inline MetricsReport compute_metrics(const ConfusionCounts& c) {
    const std::size_t k = c.classes;
    if (c.tp.size() != k || c.fp.size() != k || c.tn.size() != k || c.fn.size() != k) {
        throw DataError("compute_metrics: count vectors do not match the class count");
    }
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < k; ++i) {
        tp += c.tp[i];
        fp += c.fp[i];
        tn += c.tn[i];
        fn += c.fn[i];
    }
    MetricsReport r;
    r.counts = c;
    r.accuracy = detail::ratio(static_cast<double>(tp + tn), static_cast<double>(tp + tn + fp + fn), r.accuracy_undefined);
    r.precision = detail::ratio(static_cast<double>(tp), static_cast<double>(tp + fp), r.precision_undefined);
    r.recall = detail::ratio(static_cast<double>(tp), static_cast<double>(tp + fn), r.recall_undefined);
    r.f1 = detail::ratio(2 * r.precision * r.recall, r.precision + r.recall, r.f1_undefined);

    double mp = 0, mr = 0, mf = 0;
    for (std::size_t i = 0; i < k; ++i) {
        bool ignored = false;
        const double p = detail::ratio(static_cast<double>(c.tp[i]), static_cast<double>(c.tp[i] + c.fp[i]), ignored);
        const double q = detail::ratio(static_cast<double>(c.tp[i]), static_cast<double>(c.tp[i] + c.fn[i]), ignored);
        mp += p;
        mr += q;
        mf += detail::ratio(2 * p * q, p + q, ignored);
    }
    if (k > 0) {
        r.macro_precision = mp / static_cast<double>(k);
        r.macro_recall = mr / static_cast<double>(k);
        r.macro_f1 = mf / static_cast<double>(k);
    }
    return r;
}

inline MetricsReport evaluate_labels(const std::vector<std::size_t>& predictions, const std::vector<std::size_t>& truths,
                                     std::size_t classes) {
    return compute_metrics(confusion_counts(predictions, truths, classes));
}

inline nlohmann::ordered_json to_json(const MetricsReport& r) {
    nlohmann::ordered_json j;
    j["acc"] = r.accuracy;
    j["mp"] = r.precision;
    j["mr"] = r.recall;
    j["f1"] = r.f1;
    nlohmann::ordered_json flags = nlohmann::ordered_json::array();
    if (r.accuracy_undefined) flags.push_back("acc_undefined");
    if (r.precision_undefined) flags.push_back("mp_undefined");
    if (r.recall_undefined) flags.push_back("mr_undefined");
    if (r.f1_undefined) flags.push_back("f1_undefined");
    j["flags"] = flags;
    j["per_class_macro"] = {{"precision", r.macro_precision}, {"recall", r.macro_recall}, {"f1", r.macro_f1}};
    j["samples"] = r.counts.samples;
    j["counts"] = {{"tp", r.counts.tp}, {"fp", r.counts.fp}, {"tn", r.counts.tn}, {"fn", r.counts.fn}};
    return j;
}

}  // namespace smajudge

#endif  // SMAJUDGE_EVALUATION_METRICS_HPP
