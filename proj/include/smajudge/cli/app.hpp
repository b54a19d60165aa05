// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_CLI_APP_HPP
#define SMAJUDGE_CLI_APP_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <zlib.h>

#include "smajudge/cli/run_config.hpp"
#include "smajudge/corpus/synthetic.hpp"
#include "smajudge/evaluation/ablation.hpp"
#include "smajudge/evaluation/evaluate.hpp"
#include "smajudge/evaluation/heatmap.hpp"
#include "smajudge/evaluation/sensitivity.hpp"
#include "smajudge/training/checkpoint.hpp"

#ifndef SMAJUDGE_VERSION
#define SMAJUDGE_VERSION "0.1.0"
#endif

namespace smajudge::cli {

inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitDivergence = 3;

inline constexpr const char* kModelFile = "model.smj";
inline constexpr const char* kRunFile = "run.json";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kManifestTag = "smajudge_manifest";

/// Missing or contradictory command-line input; maps to exit 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config, corpus, ckpt, out, variant, fractions, seeds, doc, explain, spec;
    std::string split = "test";
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t limit = 20;
    std::vector<std::string> argv;
};

namespace detail {

inline std::string hex32(std::uint32_t v) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", v);
    return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

/// A manifest's "config" member, or `j` itself when it is not a manifest.
inline nlohmann::json unwrap_manifest(const nlohmann::json& j) {
    if (j.is_object() && j.contains(kManifestTag)) return j.at("config");
    return j;
}

inline nlohmann::json read_json_file(const std::string& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + " is not valid JSON: " + e.what());
    }
}

inline nlohmann::ordered_json versions() {
    return {{"smajudge", SMAJUDGE_VERSION},
            {"checkpoint_format", kCheckpointVersion},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
            {"cli11", CLI11_VERSION},
            {"zlib", ZLIB_VERSION},
            {"compiler", __VERSION__},
            {"real", sizeof(Real) == sizeof(double) ? "double" : "float"}};
}

inline nlohmann::ordered_json file_fingerprint(const std::string& path) {
    return {{"path", path}, {"crc32", hex32(crc32_of(read_file(path)))}};
}

/// Everything needed to rerun a command: the effective configuration (also
/// loadable through --config), the argument list and input checksums.
/// Deliberately free of timestamps so identical runs give identical files.
inline nlohmann::ordered_json make_manifest(const std::string& command, const Options& o, const nlohmann::ordered_json& config,
                                            std::uint64_t seed, nlohmann::ordered_json inputs, nlohmann::ordered_json outputs,
                                            nlohmann::ordered_json parameters = nlohmann::ordered_json::object()) {
    nlohmann::ordered_json m;
    m[kManifestTag] = 1;
    m["command"] = command;
    m["argv"] = o.argv;
    m["config_digest"] = hex32(crc32_of(config.dump()));
    m["seed"] = seed;
    m["versions"] = versions();
    m["threads"] = thread_count();
    m["config"] = config;
    m["parameters"] = std::move(parameters);
    m["inputs"] = std::move(inputs);
    m["outputs"] = std::move(outputs);
    return m;
}

/// Base configuration, then flags. `fallback` is used when --config is absent.
inline RunConfig effective_config(const Options& o, const std::string& fallback = {}) {
    RunConfig c;
    if (!o.config.empty()) {
        c = run_config_from_json(unwrap_manifest(read_json_file(o.config)));
    } else if (!fallback.empty() && std::filesystem::exists(fallback)) {
        c = run_config_from_json(unwrap_manifest(read_json_file(fallback)));
    }
    if (!o.corpus.empty()) c.corpus = o.corpus;
    if (!o.ckpt.empty()) c.checkpoint = o.ckpt;
    if (!o.out.empty()) c.output = o.out;
    if (!o.variant.empty()) c.variant = variant_from_name(o.variant);
    if (!o.fractions.empty()) c.fractions = parse_fraction_list(o.fractions);
    if (!o.seeds.empty()) {
        c.seeds.clear();
        for (double s : parse_fraction_list(o.seeds)) {
            if (s < 0 || s != static_cast<double>(static_cast<std::uint64_t>(s))) throw ConfigError("seeds must be non-negative integers");
            c.seeds.push_back(static_cast<std::uint64_t>(s));
        }
    }
    if (o.seed_given) {
        c.train.seed = o.seed;
        if (o.seeds.empty()) c.seeds = {o.seed};
    }
    validate(c);
    return c;
}

inline void require(const std::string& value, const char* what) {
    if (value.empty()) throw UsageError(std::string("missing ") + what);
}

inline std::filesystem::path checkpoint_file(const std::string& ckpt) {
    const std::filesystem::path p(ckpt);
    return std::filesystem::is_directory(p) ? p / kModelFile : p;
}

inline std::string run_file_for(const std::string& ckpt) {
    if (ckpt.empty()) return {};
    const std::filesystem::path p(ckpt);
    return ((std::filesystem::is_directory(p) ? p : p.parent_path()) / kRunFile).string();
}

inline std::vector<AppealDocument> split_documents(const Checkpoint& ck, const std::vector<AppealDocument>& docs, const std::string& split) {
    const FilteredCorpus filtered = filter_labels(docs, ck.data.min_label_count);
    CorpusSplit s = split_corpus(filtered.docs, ck.data.split, ck.data.split_seed);
    if (split == "train") return std::move(s.train);
    if (split == "validation") return std::move(s.validation);
    if (split == "test") return std::move(s.test);
    if (split == "all") return filtered.docs;
    throw UsageError("unknown split \"" + split + "\" (expected train, validation, test or all)");
}

/// One object, or one record per line.
inline std::vector<AppealDocument> read_query_documents(const std::string& path) {
    const std::string text = read_file(path);
    if (nlohmann::json::accept(text)) return {parse_document(text, RecordKind::query)};
    std::istringstream in(text);
    return read_corpus(in, RecordKind::query);
}

inline PredictOptions predict_options(const Checkpoint& ck) { return {ck.config.finetune_steps, ck.config.learning_rate}; }

inline nlohmann::ordered_json prediction_json(const AppealPrediction& p, const AppealDocument& doc, const Checkpoint& ck) {
    nlohmann::ordered_json j;
    j["case_id"] = p.case_id;
    j["ruling"] = p.ruling;
    j["ruling_text"] = p.ruling == 0 ? "affirmed" : "not affirmed";
    j["probability"] = p.probability;
    j["appellate_article"] = ck.labels.appellate_articles.name(p.article);
    nlohmann::ordered_json dist;
    for (std::size_t i = 0; i < p.article_distribution.size(); ++i) dist[ck.labels.appellate_articles.name(i)] = p.article_distribution[i];
    j["article_distribution"] = dist;
    j["lower_court"] = {{"law_article", ck.labels.lower_articles.name(p.lower[0])},
                        {"charge", ck.labels.charges.name(p.lower[1])},
                        {"penalty_interval", p.lower[2] + 1}};
    j["fine_tuned"] = p.fine_tuned;
    if (!p.warning.empty()) j["warning"] = p.warning;
    if (p.similarity) j["similarity"] = {{"value", p.similarity->similarity}, {"undefined", p.similarity->undefined}};
    if (doc.appeal_judgment) j["truth"] = {{"ruling", doc.appeal_judgment->ruling}, {"appellate_article", doc.appeal_judgment->law_article}};
    return j;
}

inline nlohmann::ordered_json explain_documents(const Checkpoint& ck, const std::vector<AppealDocument>& docs, const std::filesystem::path& dir,
                                                nlohmann::ordered_json* predictions) {
    if (ck.params.variant == Variant::no_attention) throw ConfigError("the no_att variant has no attention weights to explain");
    nlohmann::ordered_json index = nlohmann::ordered_json::array();
    for (const auto& doc : docs) {
        const EncodedDocument e = encode_document(doc, ck.vocab, ck.labels, ck.config.max_seq_len, false);
        const AppealPrediction p = predict_appeal(ck.params, e, predict_options(ck));
        const AttentionHeatmap h = make_heatmap(p, doc, ck.config.max_seq_len);
        const auto html = write_heatmap(h, dir);
        nlohmann::ordered_json entry = {{"case_id", doc.case_id},
                                        {"html", html.string()},
                                        {"text", (dir / (heatmap_file_stem(doc.case_id) + ".txt")).string()},
                                        {"predicted_ruling", p.ruling}};
        if (doc.appeal_judgment) entry["true_ruling"] = doc.appeal_judgment->ruling;
        index.push_back(entry);
        if (predictions) predictions->push_back(prediction_json(p, doc, ck));
    }
    return index;
}

// ---- subcommands ----

inline int cmd_gen(const Options& o, std::ostream& out) {
    require(o.out, "--out (corpus file to write)");
    SyntheticSpec spec;
    if (!o.spec.empty()) spec = synthetic_spec_from_json(unwrap_manifest(read_json_file(o.spec)));
    if (o.seed_given) spec.seed = o.seed;
    const auto docs = generate_synthetic_corpus(spec);
    const std::filesystem::path path(o.out);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    write_corpus(o.out, docs);
    nlohmann::json spec_json = spec;
    const nlohmann::ordered_json config = nlohmann::ordered_json::parse(spec_json.dump());
    const auto manifest_path = o.out + ".manifest.json";
    write_json(manifest_path, make_manifest("gen", o, config, spec.seed, nlohmann::ordered_json::array(),
                                            nlohmann::ordered_json::array({file_fingerprint(o.out)})));
    out << nlohmann::ordered_json{{"corpus", o.out}, {"documents", docs.size()}, {"manifest", manifest_path}}.dump(2) << '\n';
    return 0;
}

inline int cmd_train(const Options& o, std::ostream& out) {
    RunConfig c = effective_config(o);
    require(c.corpus, "--corpus (or \"corpus\" in the config)");
    const std::string dir_text = c.output.empty() ? c.checkpoint : c.output;
    require(dir_text, "--out (checkpoint directory)");
    const std::filesystem::path dir(dir_text);
    c.checkpoint = dir_text;
    c.output = dir_text;

    const auto docs = read_corpus(c.corpus);
    const PreparedData data = prepare_data(docs, c.data, c.train.max_seq_len);
    const ModelDims dims = model_dims(c.train, data.vocab, data.labels);
    TrainResult r = train(data.train, data.validation, c.train, build_variant(dims, c.variant, c.train.seed, c.graph));

    std::filesystem::create_directories(dir);
    const Checkpoint ck{c.train, c.data, dims, data.vocab, data.labels, std::move(r.params), std::move(r.optimizer), c.train.seed};
    save_checkpoint(ck, (dir / kModelFile).string());
    write_json(dir / kRunFile, to_json(c));

    nlohmann::ordered_json history = nlohmann::ordered_json::array();
    for (const auto& e : r.history.epochs) {
        nlohmann::ordered_json rec;
        rec["epoch"] = e.epoch;
        rec["loss"] = e.mean_loss;
        for (std::size_t i = 0; i < kLossCount; ++i) rec["task_losses"][kLossNames[i]] = e.task_losses[i];
        if (e.validation_ruling) {
            rec["validation_ruling"] = to_json(*e.validation_ruling);
            for (std::size_t i = 0; i < kLossCount; ++i) rec["validation_accuracy"][kLossNames[i]] = e.validation_accuracy[i];
        }
        history.push_back(rec);
    }
    write_json(dir / "history.json", {{"epochs", history}, {"best_epoch", r.history.best_epoch}, {"stopped_early", r.history.stopped_early}});

    const std::string digest = hex32(parameter_digest(ck.params));
    write_json(dir / kManifestFile,
               make_manifest("train", o, to_json(c), c.train.seed, nlohmann::ordered_json::array({file_fingerprint(c.corpus)}),
                             nlohmann::ordered_json::array({file_fingerprint((dir / kModelFile).string())}),
                             {{"parameter_digest", digest}, {"parameters", parameter_count(ck.params)}}));

    nlohmann::ordered_json summary;
    summary["checkpoint"] = dir.string();
    summary["variant"] = variant_name(c.variant);
    summary["train_documents"] = data.train.size();
    summary["validation_documents"] = data.validation.size();
    summary["test_documents"] = data.test.size();
    summary["epochs"] = r.history.epochs.size();
    if (!r.history.epochs.empty()) summary["final_loss"] = r.history.epochs.back().mean_loss;
    summary["parameter_digest"] = digest;
    out << summary.dump(2) << '\n';
    return 0;
}

struct LoadedRun {
    RunConfig config;
    Checkpoint checkpoint;
};

inline LoadedRun load_run(const Options& o) {
    require(o.ckpt, "--ckpt (checkpoint directory or file)");
    LoadedRun run{effective_config(o, run_file_for(o.ckpt)), load_checkpoint(checkpoint_file(o.ckpt).string())};
    return run;
}

inline int cmd_eval(const Options& o, std::ostream& out) {
    const LoadedRun run = load_run(o);
    const Checkpoint& ck = run.checkpoint;
    require(run.config.corpus, "--corpus (or a run.json next to the checkpoint)");
    const auto docs = split_documents(ck, read_corpus(run.config.corpus), o.split);
    const auto encoded = encode_all(docs, ck.vocab, ck.labels, ck.config.max_seq_len);
    const EvaluationReport report = evaluate_model(ck.params, ck.dims, encoded, predict_options(ck));

    nlohmann::ordered_json result;
    result["split"] = o.split;
    result["documents"] = encoded.size();
    result["variant"] = variant_name(ck.params.variant);
    result["metrics"] = to_json(report);
    if (!o.out.empty()) {
        const std::filesystem::path dir(o.out);
        write_json(dir / "metrics.json", result);
        write_json(dir / kManifestFile,
                   make_manifest("eval", o, to_json(run.config), ck.seed,
                                 {file_fingerprint(run.config.corpus), file_fingerprint(checkpoint_file(o.ckpt).string())},
                                 nlohmann::ordered_json::array({file_fingerprint((dir / "metrics.json").string())}), {{"split", o.split}}));
    }
    out << result.dump(2) << '\n';
    return 0;
}

inline int cmd_predict(const Options& o, std::ostream& out) {
    require(o.doc, "--doc (case file)");
    const LoadedRun run = load_run(o);
    const Checkpoint& ck = run.checkpoint;
    const auto docs = read_query_documents(o.doc);
    if (docs.empty()) throw DataError(o.doc + " holds no case");

    nlohmann::ordered_json predictions = nlohmann::ordered_json::array();
    nlohmann::ordered_json heatmaps;
    if (!o.explain.empty()) {
        heatmaps = explain_documents(ck, docs, o.explain, &predictions);
    } else {
        for (const auto& doc : docs) {
            const EncodedDocument e = encode_document(doc, ck.vocab, ck.labels, ck.config.max_seq_len, false);
            predictions.push_back(prediction_json(predict_appeal(ck.params, e, predict_options(ck)), doc, ck));
        }
    }
    const nlohmann::ordered_json result = predictions.size() == 1 ? predictions[0] : predictions;

    nlohmann::ordered_json inputs = {file_fingerprint(o.doc), file_fingerprint(checkpoint_file(o.ckpt).string())};
    nlohmann::ordered_json parameters = {{"doc", o.doc}, {"explain", o.explain}};
    if (!o.out.empty()) {
        const std::filesystem::path dir(o.out);
        write_json(dir / "prediction.json", result);
        write_json(dir / kManifestFile, make_manifest("predict", o, to_json(run.config), ck.seed, inputs,
                                                      nlohmann::ordered_json::array({file_fingerprint((dir / "prediction.json").string())}),
                                                      parameters));
    }
    if (!o.explain.empty()) {
        const std::filesystem::path dir(o.explain);
        write_json(dir / "index.json", heatmaps);
        write_json(dir / kManifestFile, make_manifest("predict", o, to_json(run.config), ck.seed, inputs, heatmaps, parameters));
    }
    out << result.dump(2) << '\n';
    return 0;
}

inline int cmd_explain(const Options& o, std::ostream& out) {
    require(o.out, "--out (heatmap directory)");
    const LoadedRun run = load_run(o);
    const Checkpoint& ck = run.checkpoint;
    std::vector<AppealDocument> docs;
    nlohmann::ordered_json inputs = {file_fingerprint(checkpoint_file(o.ckpt).string())};
    if (!o.doc.empty()) {
        docs = read_query_documents(o.doc);
        inputs.push_back(file_fingerprint(o.doc));
    } else {
        require(run.config.corpus, "--doc, --corpus or a run.json next to the checkpoint");
        docs = split_documents(ck, read_corpus(run.config.corpus), o.split);
        inputs.push_back(file_fingerprint(run.config.corpus));
        if (docs.size() > o.limit) docs.resize(o.limit);
    }
    const std::filesystem::path dir(o.out);
    const nlohmann::ordered_json index = explain_documents(ck, docs, dir, nullptr);
    write_json(dir / "index.json", index);
    write_json(dir / kManifestFile, make_manifest("explain", o, to_json(run.config), ck.seed, inputs, index,
                                                  {{"split", o.split}, {"limit", o.limit}, {"doc", o.doc}}));
    out << nlohmann::ordered_json{{"heatmaps", index.size()}, {"index", (dir / "index.json").string()}}.dump(2) << '\n';
    return 0;
}

inline int cmd_ablate(const Options& o, std::ostream& out) {
    const RunConfig c = effective_config(o);
    require(c.corpus, "--corpus (or \"corpus\" in the config)");
    require(c.output, "--out (report directory)");
    const PreparedData data = prepare_data(read_corpus(c.corpus), c.data, c.train.max_seq_len);
    const auto entries = run_ablation(data, c.train, c.seeds, c.graph);
    const nlohmann::ordered_json report = to_json(entries);
    const std::filesystem::path dir(c.output);
    write_json(dir / "ablation.json", report);
    write_json(dir / kManifestFile, make_manifest("ablate", o, to_json(c), c.train.seed, nlohmann::ordered_json::array({file_fingerprint(c.corpus)}),
                                                  nlohmann::ordered_json::array({file_fingerprint((dir / "ablation.json").string())})));
    nlohmann::ordered_json summary = nlohmann::ordered_json::array();
    for (const auto& e : report) summary.push_back({{"variant", e["variant"]}, {"ruling", e["ruling"]}});
    out << summary.dump(2) << '\n';
    return 0;
}

inline int cmd_sensitivity(const Options& o, std::ostream& out) {
    const RunConfig c = effective_config(o);
    require(c.corpus, "--corpus (or \"corpus\" in the config)");
    require(c.output, "--out (report directory)");
    const PreparedData data = prepare_data(read_corpus(c.corpus), c.data, c.train.max_seq_len);
    const auto points = run_sensitivity(data, c.train, {c.fractions, c.seeds, c.variant, c.graph});
    const std::filesystem::path dir(c.output);
    write_json(dir / "sensitivity.json", to_json(points));
    write_text(dir / "sensitivity.csv", sensitivity_csv(points));
    write_json(dir / kManifestFile,
               make_manifest("sensitivity", o, to_json(c), c.train.seed, nlohmann::ordered_json::array({file_fingerprint(c.corpus)}),
                             {file_fingerprint((dir / "sensitivity.json").string()), file_fingerprint((dir / "sensitivity.csv").string())}));
    out << sensitivity_csv(points);
    return 0;
}

}  // namespace detail

/// Parses `argv`, runs one subcommand and returns the process exit code:
/// 0 success, 1 usage error, 2 data/config/checkpoint error, 3 numeric divergence.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Sequential multi-task appeal judgment prediction", "smajudge"};
    app.require_subcommand(1);
    Options o;
    for (int i = 1; i < argc; ++i) o.argv.emplace_back(argv[i]);
    bool quiet = false;
    int verbose = 0;
    app.add_flag("-q,--quiet", quiet, "Suppress progress output");
    app.add_flag("-v,--verbose", verbose, "More progress output; repeat for debug detail");

    const auto add_config = [&o](CLI::App* s) {
        s->add_option("--config", o.config, "Run configuration JSON (a manifest also works)");
    };
    const auto add_training = [&o, &add_config](CLI::App* s) {
        add_config(s);
        s->add_option("--corpus", o.corpus, "Labelled JSON-Lines corpus");
        s->add_option("--out", o.out, "Output directory");
        s->add_option("--seed", o.seed, "Seed for initialisation and training")->each([&o](const std::string&) { o.seed_given = true; });
        s->add_option("--variant", o.variant, "full, no_att, no_dep or mlma");
    };
    const auto add_checkpoint = [&o, &add_config](CLI::App* s) {
        add_config(s);
        s->add_option("--ckpt", o.ckpt, "Checkpoint directory or model file");
        s->add_option("--corpus", o.corpus, "Corpus to draw documents from (default: the training corpus)");
        s->add_option("--split", o.split, "train, validation, test or all");
    };

    auto* gen = app.add_subcommand("gen", "Write a planted-signal synthetic corpus");
    gen->add_option("--spec", o.spec, "Generator spec JSON");
    gen->add_option("--out", o.out, "Corpus file to write");
    gen->add_option("--seed", o.seed, "Overrides the spec seed")->each([&o](const std::string&) { o.seed_given = true; });

    auto* train_cmd = app.add_subcommand("train", "Train a model and write a checkpoint directory");
    add_training(train_cmd);

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on one split");
    add_checkpoint(eval_cmd);
    eval_cmd->add_option("--out", o.out, "Directory for metrics.json and the manifest");

    auto* predict_cmd = app.add_subcommand("predict", "Predict the appeal outcome of one or more cases");
    add_config(predict_cmd);
    predict_cmd->add_option("--ckpt", o.ckpt, "Checkpoint directory or model file");
    predict_cmd->add_option("--doc", o.doc, "Case JSON object, or JSON Lines");
    predict_cmd->add_option("--explain", o.explain, "Directory for attention heatmaps");
    predict_cmd->add_option("--out", o.out, "Directory for prediction.json and the manifest");

    auto* ablate_cmd = app.add_subcommand("ablate", "Train and test every model variant");
    add_training(ablate_cmd);
    ablate_cmd->add_option("--seeds", o.seeds, "Comma-separated seeds");

    auto* sens_cmd = app.add_subcommand("sensitivity", "Test F1 against the share of training data used");
    add_training(sens_cmd);
    sens_cmd->add_option("--fractions", o.fractions, "Comma-separated fractions in (0, 1]");
    sens_cmd->add_option("--seeds", o.seeds, "Comma-separated seeds");

    auto* explain_cmd = app.add_subcommand("explain", "Write attention heatmaps for documents of a split");
    add_checkpoint(explain_cmd);
    explain_cmd->add_option("--doc", o.doc, "Explain these cases instead of a split");
    explain_cmd->add_option("--out", o.out, "Heatmap directory");
    explain_cmd->add_option("--limit", o.limit, "Maximum number of documents from the split");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }
    log::set_level(quiet ? log::Level::quiet : verbose > 1 ? log::Level::debug : log::Level::info);

    try {
        if (*gen) return detail::cmd_gen(o, out);
        if (*train_cmd) return detail::cmd_train(o, out);
        if (*eval_cmd) return detail::cmd_eval(o, out);
        if (*predict_cmd) return detail::cmd_predict(o, out);
        if (*ablate_cmd) return detail::cmd_ablate(o, out);
        if (*sens_cmd) return detail::cmd_sensitivity(o, out);
        if (*explain_cmd) return detail::cmd_explain(o, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DivergenceError& e) {
        err << "diverged at batch " << e.batch() << ": " << e.what() << '\n';
        return kExitDivergence;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace smajudge::cli

#endif  // SMAJUDGE_CLI_APP_HPP
