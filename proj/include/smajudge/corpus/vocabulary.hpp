// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_CORPUS_VOCABULARY_HPP
#define SMAJUDGE_CORPUS_VOCABULARY_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "smajudge/corpus/document.hpp"
#include "smajudge/numerics/error.hpp"

namespace smajudge {

/// Token <-> id map. Ids 0 and 1 are reserved for padding and unknown tokens.
class Vocabulary {
public:
    static constexpr std::size_t kPad = 0;
    static constexpr std::size_t kUnk = 1;
    static constexpr const char* kPadToken = "<pad>";
    static constexpr const char* kUnkToken = "<unk>";

    Vocabulary() : tokens_{kPadToken, kUnkToken} {}

    /// Builds from an explicit token list (reserved entries excluded).
    static Vocabulary from_tokens(const std::vector<std::string>& tokens, std::size_t min_count) {
        Vocabulary v;
        v.min_count_ = min_count;
        for (const auto& t : tokens) {
            if (t == kPadToken || t == kUnkToken) throw DataError("reserved token in vocabulary list: " + t);
            if (!v.index_.emplace(t, v.tokens_.size()).second) throw DataError("duplicate vocabulary token: " + t);
            v.tokens_.push_back(t);
        }
        return v;
    }

    [[nodiscard]] std::size_t size() const noexcept { return tokens_.size(); }
    [[nodiscard]] std::size_t min_count() const noexcept { return min_count_; }
    [[nodiscard]] const std::vector<std::string>& tokens() const noexcept { return tokens_; }

    [[nodiscard]] std::size_t id(const std::string& token) const {
        auto it = index_.find(token);
        return it == index_.end() ? kUnk : it->second;
    }

    [[nodiscard]] const std::string& token(std::size_t id) const {
        if (id >= tokens_.size()) throw DataError("token id out of range: " + std::to_string(id));
        return tokens_[id];
    }

    /// Ids of `tokens`, keeping at most `max_length` leading tokens.
    [[nodiscard]] std::vector<std::size_t> encode(const Tokens& tokens, std::size_t max_length) const {
        std::vector<std::size_t> ids;
        const std::size_t n = std::min(tokens.size(), max_length);
        ids.reserve(n);
        for (std::size_t i = 0; i < n; ++i) ids.push_back(id(tokens[i]));
        return ids;
    }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t min_count_ = 1;
};

/// Tokens occurring at least `min_count` times across lower facts, grounds
/// and new facts. Ids are ordered by descending frequency, then by token.
inline Vocabulary build_vocabulary(const std::vector<AppealDocument>& docs, std::size_t min_count) {
    if (docs.empty()) throw DataError("cannot build a vocabulary from an empty corpus");
    std::map<std::string, std::size_t> counts;
    auto count = [&counts](const Tokens& tokens) {
        for (const auto& t : tokens) {
            if (t != Vocabulary::kPadToken && t != Vocabulary::kUnkToken) ++counts[t];
        }
    };
    for (const auto& d : docs) {
        count(d.lower_facts);
        count(d.grounds);
        count(d.new_facts);
    }
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (const auto& [token, n] : counts) {
        if (n >= min_count) kept.emplace_back(token, n);
    }
    std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> tokens;
    tokens.reserve(kept.size());
    for (auto& [token, n] : kept) tokens.push_back(std::move(token));
    return Vocabulary::from_tokens(tokens, min_count);
}

}  // namespace smajudge

#endif  // SMAJUDGE_CORPUS_VOCABULARY_HPP
