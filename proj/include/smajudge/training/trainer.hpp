// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_TRAINING_TRAINER_HPP
#define SMAJUDGE_TRAINING_TRAINER_HPP

#include <cstdlib>
#include <exception>
#include <functional>
#include <numeric>
#include <thread>
#include <vector>

#include "smajudge/evaluation/metrics.hpp"
#include "smajudge/log.hpp"
#include "smajudge/numerics/adam.hpp"
#include "smajudge/training/model.hpp"

namespace smajudge {

/// Worker count from SMAJUDGE_THREADS, default 1. Results depend on the
/// count (shard sums are reduced in shard order) but not on scheduling.
inline std::size_t thread_count() {
    const char* env = std::getenv("SMAJUDGE_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw ConfigError("SMAJUDGE_THREADS must be a positive integer");
    return static_cast<std::size_t>(n);
}

/// Runs body(k) for k in [0, n) on up to `workers` threads, contiguous
/// chunks per thread. The first exception by chunk order is rethrown.
inline void parallel_chunks(std::size_t n, std::size_t workers, const std::function<void(std::size_t chunk, std::size_t begin, std::size_t end)>& body) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        body(0, 0, n);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers, end = n * (w + 1) / workers;
        pool.emplace_back([&, w, begin, end] {
            try {
                body(w, begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

/// Hard predictions and truths of the five subtasks, in loss order.
struct TaskPredictions {
    std::array<std::vector<std::size_t>, kLossCount> predicted;
    std::array<std::vector<std::size_t>, kLossCount> truth;
};

inline std::size_t argmax(std::span<const Real> v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

/// Eval-mode forward pass without fine-tuning, for every document.
inline TaskPredictions plain_predictions(const SmaJudgeParams& params, const std::vector<EncodedDocument>& docs) {
    std::vector<std::array<std::size_t, 2 * kLossCount>> rows(docs.size());
    parallel_chunks(docs.size(), thread_count(), [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const auto& d = docs[k];
            if (!d.lower || !d.appeal) throw DataError(d.case_id + ": evaluation needs both judgments");
            Tape<Real> tape;
            const ForwardResult r = forward(tape, params, nullptr, d, {});
            auto& row = rows[k];
            for (LowerTask t : {LowerTask::law_article, LowerTask::charge, LowerTask::penalty}) {
                row[static_cast<std::size_t>(t)] = argmax(r.lower.tasks[params.graph.position(t)].distribution.value());
            }
            row[3] = static_cast<std::size_t>(ruling_class(r.ruling->item()));
            row[4] = argmax(r.article->value());
            row[5] = d.lower->article;
            row[6] = d.lower->charge;
            row[7] = d.lower->penalty;
            row[8] = static_cast<std::size_t>(d.appeal->ruling);
            row[9] = d.appeal->article;
        }
    });
    TaskPredictions out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < kLossCount; ++i) {
            out.predicted[i].push_back(row[i]);
            out.truth[i].push_back(row[kLossCount + i]);
        }
    }
    return out;
}

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double mean_loss = 0;
    std::array<double, kLossCount> task_losses{};
    std::optional<MetricsReport> validation_ruling;
    std::array<double, kLossCount> validation_accuracy{};
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0;
    bool stopped_early = false;
};

struct TrainResult {
    SmaJudgeParams params;
    AdamState<Real> optimizer;
    TrainHistory history;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

namespace detail {

inline void add_into(SmaJudgeParams& into, const SmaJudgeParams& from) {
    std::vector<Mat*> a;
    into.visit([&a](const std::string&, Mat& t) { a.push_back(&t); });
    std::size_t k = 0;
    from.visit([&a, &k](const std::string&, const Mat& t) {
        auto dst = a[k++]->data();
        auto src = t.data();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    });
}

inline double scale_and_norm(SmaJudgeParams& g, Real factor) {
    double sq = 0;
    g.visit([&](const std::string&, Mat& t) {
        for (auto& v : t.data()) {
            v *= factor;
            sq += static_cast<double>(v) * static_cast<double>(v);
        }
    });
    return std::sqrt(sq);
}

inline std::vector<Mat*> tensor_list(SmaJudgeParams& p) {
    std::vector<Mat*> out;
    p.visit([&out](const std::string&, Mat& t) { out.push_back(&t); });
    return out;
}

inline std::vector<const Mat*> const_tensor_list(const SmaJudgeParams& p) {
    std::vector<const Mat*> out;
    p.visit([&out](const std::string&, const Mat& t) { out.push_back(&t); });
    return out;
}

}  // namespace detail

/// Gradient of the batch-mean joint loss over `batch` (indices into
/// `docs`). Adds per-task loss sums into `loss_sums`.
inline SmaJudgeParams batch_gradient(const SmaJudgeParams& params, const std::vector<EncodedDocument>& docs,
                                     const std::vector<std::size_t>& batch, const TrainConfig& config, const RngStream& epoch_rng,
                                     std::array<double, kLossCount>& loss_sums, double& joint_sum) {
    const std::size_t workers = std::max<std::size_t>(1, std::min(thread_count(), batch.size()));
    std::vector<SmaJudgeParams> shard_grads(workers, zeros_like(params));
    std::vector<std::array<double, kLossCount + 1>> shard_losses(workers, std::array<double, kLossCount + 1>{});
    parallel_chunks(batch.size(), workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t index = batch[k];
            RngStream rng = epoch_rng.fork(index);
            Tape<Real> tape;
            const EncodedDocument& doc = docs[index];
            const ForwardResult r = forward(tape, params, &shard_grads[w], doc, {Mode::train, config.dropout, &rng, false});
            const auto losses = task_losses(r, params, doc, static_cast<Real>(config.ruling_positive_weight));
            const Var<Real> loss = joint_loss(losses, config.loss_weights);
            for (std::size_t i = 0; i < kLossCount; ++i) shard_losses[w][i] += losses[i].item();
            shard_losses[w][kLossCount] += loss.item();
            tape.backward(loss);
        }
    });
    SmaJudgeParams total = std::move(shard_grads[0]);
    for (std::size_t w = 1; w < workers; ++w) detail::add_into(total, shard_grads[w]);
    for (std::size_t w = 0; w < workers; ++w) {
        for (std::size_t i = 0; i < kLossCount; ++i) loss_sums[i] += shard_losses[w][i];
        joint_sum += shard_losses[w][kLossCount];
    }
    return total;
}

/// Mini-batch Adam over the joint loss. Batches are drawn from a per-epoch
/// shuffle of `train`; dropout masks come from per-document RNG forks, so
/// a run is a pure function of (data, config, initial parameters).
inline TrainResult train(const std::vector<EncodedDocument>& train_docs, const std::vector<EncodedDocument>& validation_docs,
                         const TrainConfig& config, SmaJudgeParams initial, const EpochCallback& on_epoch = {}) {
    validate(config);
    if (train_docs.empty()) throw DataError("train: empty train split");
    TrainResult result{std::move(initial), AdamState<Real>(AdamConfig{config.learning_rate}), {}};
    const RngStream root(config.seed);
    const RngStream shuffle_root = root.fork(0x5348);
    const RngStream dropout_root = root.fork(0x4452);

    std::optional<SmaJudgeParams> best;
    double best_f1 = -1;
    std::size_t since_best = 0;
    std::size_t batch_id = 0;

    std::vector<Mat*> param_list = detail::tensor_list(result.params);
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        std::vector<std::size_t> order(train_docs.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        RngStream shuffler = shuffle_root.fork(epoch);
        shuffler.shuffle(order);
        const RngStream epoch_rng = dropout_root.fork(epoch);

        EpochRecord record;
        record.epoch = epoch;
        double joint_sum = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            ++batch_id;
            const std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                 order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), start + config.batch_size)));
            SmaJudgeParams grads;
            try {
                grads = batch_gradient(result.params, train_docs, batch, config, epoch_rng, record.task_losses, joint_sum);
            } catch (const NumericError& e) {
                throw DivergenceError(std::string("training diverged in batch ") + std::to_string(batch_id) + ": " + e.what(), batch_id);
            }
            const double norm = detail::scale_and_norm(grads, Real{1} / static_cast<Real>(batch.size()));
            if (!std::isfinite(norm)) throw DivergenceError("training diverged in batch " + std::to_string(batch_id) + ": non-finite gradient", batch_id);
            if (config.gradient_clip > 0 && norm > config.gradient_clip) {
                detail::scale_and_norm(grads, static_cast<Real>(config.gradient_clip / norm));
            }
            adam_step<Real>(param_list, detail::const_tensor_list(grads), result.optimizer);
        }
        const auto n = static_cast<double>(train_docs.size());
        record.mean_loss = joint_sum / n;
        for (auto& l : record.task_losses) l /= n;

        if (!validation_docs.empty()) {
            const TaskPredictions vp = plain_predictions(result.params, validation_docs);
            record.validation_ruling = evaluate_labels(vp.predicted[3], vp.truth[3], 2);
            for (std::size_t i = 0; i < kLossCount; ++i) {
                std::size_t hits = 0;
                for (std::size_t k = 0; k < vp.truth[i].size(); ++k) hits += vp.predicted[i][k] == vp.truth[i][k];
                record.validation_accuracy[i] = static_cast<double>(hits) / static_cast<double>(vp.truth[i].size());
            }
        }
        log::info("epoch " + std::to_string(epoch) + " loss " + std::to_string(record.mean_loss) +
                  (record.validation_ruling ? " val_ruling_f1 " + std::to_string(record.validation_ruling->f1) : ""));
        result.history.epochs.push_back(record);
        if (on_epoch) on_epoch(record);

        if (config.early_stopping && record.validation_ruling) {
            if (record.validation_ruling->f1 > best_f1) {
                best_f1 = record.validation_ruling->f1;
                best = result.params;
                result.history.best_epoch = epoch;
                since_best = 0;
            } else if (++since_best >= config.patience) {
                result.history.stopped_early = true;
                break;
            }
        }
    }
    if (best) {
        result.params = std::move(*best);
    } else {
        result.history.best_epoch = result.history.epochs.size();
    }
    return result;
}

}  // namespace smajudge

#endif  // SMAJUDGE_TRAINING_TRAINER_HPP
