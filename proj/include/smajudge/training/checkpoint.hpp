// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_TRAINING_CHECKPOINT_HPP
#define SMAJUDGE_TRAINING_CHECKPOINT_HPP

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <zlib.h>

#include "smajudge/numerics/adam.hpp"
#include "smajudge/training/model.hpp"

namespace smajudge {

/// Everything needed to rebuild a trained model and resume its optimizer.
struct Checkpoint {
    TrainConfig config;
    DataConfig data;
    ModelDims dims;
    Vocabulary vocab;
    LabelSpaces labels;
    SmaJudgeParams params;
    AdamState<Real> optimizer;
    std::uint64_t seed = 0;
};

inline constexpr char kCheckpointMagic[8] = {'S', 'M', 'A', 'J', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline nlohmann::ordered_json to_json(const ModelDims& d) {
    return {{"vocabulary", d.vocabulary},         {"embedding", d.embedding}, {"hidden", d.hidden},
            {"lower_articles", d.lower_articles}, {"charges", d.charges},     {"penalty", d.penalty},
            {"appellate_articles", d.appellate_articles}};
}

inline ModelDims model_dims_from_json(const nlohmann::json& j) {
    ModelDims d;
    d.vocabulary = j.at("vocabulary").get<std::size_t>();
    d.embedding = j.at("embedding").get<std::size_t>();
    d.hidden = j.at("hidden").get<std::size_t>();
    d.lower_articles = j.at("lower_articles").get<std::size_t>();
    d.charges = j.at("charges").get<std::size_t>();
    d.penalty = j.at("penalty").get<std::size_t>();
    d.appellate_articles = j.at("appellate_articles").get<std::size_t>();
    return d;
}

/// Canonical JSON of the settings a checkpoint was built with.
inline std::string checkpoint_config_json(const Checkpoint& c) {
    nlohmann::ordered_json j;
    j["train"] = to_json(c.config);
    j["data"] = to_json(c.data);
    j["dims"] = to_json(c.dims);
    j["variant"] = variant_name(c.params.variant);
    j["task_graph"] = task_graph_to_json(c.params.graph);
    j["real_bytes"] = sizeof(Real);
    return j.dump();
}

inline std::uint32_t crc32_of(std::string_view bytes) {
    return static_cast<std::uint32_t>(
        crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

namespace detail {

// Little-endian host layout; the format is not meant to cross architectures.
class ByteWriter {
public:
    template <class V>
    void pod(V v) {
        static_assert(std::is_trivially_copyable_v<V>);
        buf_.append(reinterpret_cast<const char*>(&v), sizeof v);
    }
    void str(const std::string& s) {
        pod<std::uint64_t>(s.size());
        buf_ += s;
    }
    void tensor_values(const Mat& t) { buf_.append(reinterpret_cast<const char*>(t.data().data()), t.size() * sizeof(Real)); }
    [[nodiscard]] std::string& bytes() { return buf_; }

private:
    std::string buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::string_view b) : b_(b) {}
    template <class V>
    V pod() {
        V v;
        need(sizeof v);
        std::memcpy(&v, b_.data() + pos_, sizeof v);
        pos_ += sizeof v;
        return v;
    }
    std::string str() {
        const auto n = pod<std::uint64_t>();
        need(n);
        std::string s(b_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    void tensor_values(Mat& t) {
        need(t.size() * sizeof(Real));
        std::memcpy(t.data().data(), b_.data() + pos_, t.size() * sizeof(Real));
        pos_ += t.size() * sizeof(Real);
    }
    [[nodiscard]] bool done() const { return pos_ == b_.size(); }

private:
    void need(std::size_t n) const {
        if (b_.size() - pos_ < n) throw CheckpointError("checkpoint ends inside a block");
    }
    std::string_view b_;
    std::size_t pos_ = 0;
};

inline void write_labels(ByteWriter& w, const LabelSet& s) {
    w.pod<std::uint64_t>(s.size());
    for (const auto& n : s.names()) w.str(n);
}

inline LabelSet read_labels(ByteReader& r) {
    const auto n = r.pod<std::uint64_t>();
    std::vector<std::string> names;
    for (std::uint64_t i = 0; i < n; ++i) names.push_back(r.str());
    return LabelSet(std::move(names));
}

}  // namespace detail

inline std::string serialize_checkpoint(const Checkpoint& c) {
    detail::ByteWriter w;
    w.bytes().append(kCheckpointMagic, sizeof kCheckpointMagic);
    w.pod(kCheckpointVersion);
    const std::string config = checkpoint_config_json(c);
    w.pod(crc32_of(config));
    w.str(config);

    w.pod<std::uint64_t>(c.vocab.min_count());
    w.pod<std::uint64_t>(c.vocab.size());
    for (const auto& t : c.vocab.tokens()) w.str(t);

    detail::write_labels(w, c.labels.lower_articles);
    detail::write_labels(w, c.labels.charges);
    detail::write_labels(w, c.labels.appellate_articles);

    std::vector<const Mat*> tensors;
    c.params.visit([&tensors](const std::string&, const Mat& t) { tensors.push_back(&t); });
    w.pod<std::uint64_t>(tensors.size());
    c.params.visit([&w](const std::string& name, const Mat& t) {
        w.str(name);
        w.pod<std::uint32_t>(static_cast<std::uint32_t>(t.rank()));
        for (std::size_t s : t.shape()) w.pod<std::uint64_t>(s);
        w.tensor_values(t);
    });

    const auto& opt = c.optimizer;
    w.pod<std::uint64_t>(opt.step);
    w.pod<double>(opt.config.learning_rate);
    w.pod<double>(opt.config.beta1);
    w.pod<double>(opt.config.beta2);
    w.pod<double>(opt.config.epsilon);
    const bool has_moments = !opt.first_moment.empty();
    if (has_moments && (opt.first_moment.size() != tensors.size() || opt.second_moment.size() != tensors.size())) {
        throw CheckpointError("optimizer state does not match the parameter list");
    }
    w.pod<std::uint8_t>(has_moments ? 1 : 0);
    if (has_moments) {
        for (const auto& m : opt.first_moment) w.tensor_values(m);
        for (const auto& m : opt.second_moment) w.tensor_values(m);
    }
    w.pod<std::uint64_t>(c.seed);
    w.pod(crc32_of(w.bytes()));
    return std::move(w.bytes());
}

/// Parses a checkpoint. When `expect` is given, its dimensions must match
/// the stored ones exactly.
inline Checkpoint deserialize_checkpoint(std::string_view bytes, const ModelDims* expect = nullptr) {
    constexpr std::size_t header = sizeof kCheckpointMagic + 2 * sizeof(std::uint32_t);
    if (bytes.size() < header + sizeof(std::uint32_t)) throw CheckpointError("checkpoint checksum mismatch: file is truncated");
    std::uint32_t stored = 0;
    std::memcpy(&stored, bytes.data() + bytes.size() - sizeof stored, sizeof stored);
    const std::string_view body = bytes.substr(0, bytes.size() - sizeof stored);
    if (crc32_of(body) != stored) throw CheckpointError("checkpoint checksum mismatch: file is truncated or corrupted");
    if (std::memcmp(body.data(), kCheckpointMagic, sizeof kCheckpointMagic) != 0) throw CheckpointError("not a checkpoint file");

    detail::ByteReader r(body.substr(sizeof kCheckpointMagic));
    const auto version = r.pod<std::uint32_t>();
    if (version != kCheckpointVersion) {
        throw CheckpointError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                              std::to_string(kCheckpointVersion) + ")");
    }
    const auto digest = r.pod<std::uint32_t>();
    const std::string config = r.str();
    if (crc32_of(config) != digest) throw CheckpointError("checkpoint config digest mismatch");

    Checkpoint c;
    try {
        const auto j = nlohmann::json::parse(config);
        if (j.at("real_bytes").get<std::size_t>() != sizeof(Real)) {
            throw CheckpointError("checkpoint was written with a different floating-point precision");
        }
        c.config = train_config_from_json(j.at("train"));
        c.data = data_config_from_json(j.at("data"));
        c.dims = model_dims_from_json(j.at("dims"));
        c.params.variant = variant_from_name(j.at("variant").get<std::string>());
        c.params.graph = task_graph_from_json(j.at("task_graph"));
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("bad checkpoint config: ") + e.what());
    } catch (const ConfigError& e) {
        throw CheckpointError(std::string("bad checkpoint config: ") + e.what());
    }
    if (expect && !(*expect == c.dims)) {
        throw CheckpointError("checkpoint shape mismatch: stored hidden " + std::to_string(c.dims.hidden) + ", embedding " +
                              std::to_string(c.dims.embedding) + ", vocabulary " + std::to_string(c.dims.vocabulary) +
                              " differ from the expected model (hidden " + std::to_string(expect->hidden) + ", embedding " +
                              std::to_string(expect->embedding) + ", vocabulary " + std::to_string(expect->vocabulary) + ")");
    }

    const auto min_count = r.pod<std::uint64_t>();
    const auto vocab_size = r.pod<std::uint64_t>();
    std::vector<std::string> tokens;
    for (std::uint64_t i = 0; i < vocab_size; ++i) tokens.push_back(r.str());
    if (tokens.size() < 2 || tokens[0] != Vocabulary::kPadToken || tokens[1] != Vocabulary::kUnkToken) {
        throw CheckpointError("checkpoint vocabulary lacks the reserved tokens");
    }
    c.vocab = Vocabulary::from_tokens({tokens.begin() + 2, tokens.end()}, min_count);
    c.labels.lower_articles = detail::read_labels(r);
    c.labels.charges = detail::read_labels(r);
    c.labels.appellate_articles = detail::read_labels(r);

    SmaJudgeParams shaped = init_params(c.dims, c.params.variant, c.params.graph, 0);
    shaped.variant = c.params.variant;
    c.params = std::move(shaped);
    std::vector<std::pair<std::string, Mat*>> slots;
    c.params.visit([&slots](const std::string& name, Mat& t) { slots.emplace_back(name, &t); });
    const auto count = r.pod<std::uint64_t>();
    if (count != slots.size()) {
        throw CheckpointError("checkpoint shape mismatch: " + std::to_string(count) + " parameter blocks, model has " +
                              std::to_string(slots.size()));
    }
    for (auto& [name, tensor] : slots) {
        const std::string stored_name = r.str();
        if (stored_name != name) throw CheckpointError("checkpoint block \"" + stored_name + "\" found where \"" + name + "\" belongs");
        const auto rank = r.pod<std::uint32_t>();
        Shape shape;
        for (std::uint32_t k = 0; k < rank; ++k) shape.push_back(static_cast<std::size_t>(r.pod<std::uint64_t>()));
        if (shape != tensor->shape()) {
            throw CheckpointError("checkpoint shape mismatch for " + name + ": stored " + shape_string(shape) + ", expected " +
                                  shape_string(tensor->shape()));
        }
        r.tensor_values(*tensor);
    }

    c.optimizer.step = r.pod<std::uint64_t>();
    c.optimizer.config.learning_rate = r.pod<double>();
    c.optimizer.config.beta1 = r.pod<double>();
    c.optimizer.config.beta2 = r.pod<double>();
    c.optimizer.config.epsilon = r.pod<double>();
    if (r.pod<std::uint8_t>() != 0) {
        for (auto* moments : {&c.optimizer.first_moment, &c.optimizer.second_moment}) {
            for (const auto& slot : slots) {
                moments->emplace_back(slot.second->shape());
                r.tensor_values(moments->back());
            }
        }
    }
    c.seed = r.pod<std::uint64_t>();
    if (!r.done()) throw CheckpointError("trailing bytes after the checkpoint body");
    return c;
}

inline void save_checkpoint(const Checkpoint& c, const std::string& path) {
    const std::string bytes = serialize_checkpoint(c);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CheckpointError("failed writing " + path);
}

inline Checkpoint load_checkpoint(const std::string& path, const ModelDims* expect = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_checkpoint(ss.str(), expect);
}

}  // namespace smajudge

#endif  // SMAJUDGE_TRAINING_CHECKPOINT_HPP
