// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_TRAINING_DATA_HPP
#define SMAJUDGE_TRAINING_DATA_HPP

#include <optional>
#include <string>
#include <vector>

#include "smajudge/corpus/document.hpp"
#include "smajudge/corpus/labels.hpp"
#include "smajudge/corpus/split.hpp"
#include "smajudge/corpus/vocabulary.hpp"
#include "smajudge/training/config.hpp"

namespace smajudge {

struct LowerTargets {
    std::size_t article = 0;
    std::size_t charge = 0;
    std::size_t penalty = 0;  // interval - 1
};

struct AppealTargets {
    int ruling = 0;
    std::size_t article = 0;
};

/// Token ids of one case plus label ids where available. The appellate fact
/// sequence is the lower facts followed by the new facts, each truncated on
/// its own.
struct EncodedDocument {
    std::string case_id;
    std::vector<std::size_t> lower_facts;
    std::vector<std::size_t> appellate_facts;
    std::vector<std::size_t> grounds;
    std::optional<LowerTargets> lower;
    std::optional<AppealTargets> appeal;
};

/// Tokens aligned with `EncodedDocument::appellate_facts`.
inline Tokens appellate_fact_tokens(const AppealDocument& doc, std::size_t max_seq_len) {
    Tokens out(doc.lower_facts.begin(), doc.lower_facts.begin() + static_cast<std::ptrdiff_t>(std::min(doc.lower_facts.size(), max_seq_len)));
    const std::size_t extra = std::min(doc.new_facts.size(), max_seq_len);
    out.insert(out.end(), doc.new_facts.begin(), doc.new_facts.begin() + static_cast<std::ptrdiff_t>(extra));
    return out;
}

/// Labels outside the known spaces leave the corresponding targets unset
/// when `strict` is false and throw DataError otherwise.
inline EncodedDocument encode_document(const AppealDocument& doc, const Vocabulary& vocab, const LabelSpaces& labels,
                                       std::size_t max_seq_len, bool strict = true) {
    EncodedDocument e;
    e.case_id = doc.case_id;
    e.lower_facts = vocab.encode(doc.lower_facts, max_seq_len);
    for (const auto& t : appellate_fact_tokens(doc, max_seq_len)) e.appellate_facts.push_back(vocab.id(t));
    e.grounds = vocab.encode(doc.grounds, max_seq_len);
    if (e.lower_facts.empty() || e.grounds.empty()) throw DataError(doc.case_id + ": empty facts or grounds");

    if (doc.lower_judgment) {
        const auto& r = *doc.lower_judgment;
        if (labels.lower_articles.contains(r.law_article) && labels.charges.contains(r.charge)) {
            e.lower = LowerTargets{labels.lower_articles.id(r.law_article), labels.charges.id(r.charge),
                                   static_cast<std::size_t>(r.penalty_interval() - 1)};
        } else if (strict) {
            throw DataError(doc.case_id + ": lower-court label outside the trained label spaces");
        }
    }
    if (doc.appeal_judgment) {
        const auto& a = *doc.appeal_judgment;
        if (labels.appellate_articles.contains(a.law_article)) {
            e.appeal = AppealTargets{a.ruling, labels.appellate_articles.id(a.law_article)};
        } else if (strict) {
            throw DataError(doc.case_id + ": appellate article outside the trained label space");
        }
    }
    return e;
}

inline std::vector<EncodedDocument> encode_all(const std::vector<AppealDocument>& docs, const Vocabulary& vocab,
                                               const LabelSpaces& labels, std::size_t max_seq_len) {
    std::vector<EncodedDocument> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back(encode_document(d, vocab, labels, max_seq_len));
    return out;
}

/// Filtered, split and encoded corpus. The vocabulary comes from the train
/// split only; label spaces from the whole filtered corpus.
struct PreparedData {
    Vocabulary vocab;
    LabelSpaces labels;
    CorpusSplit split;
    std::vector<EncodedDocument> train, validation, test;
};

inline PreparedData prepare_data(const std::vector<AppealDocument>& docs, const DataConfig& data, std::size_t max_seq_len) {
    FilteredCorpus filtered = filter_labels(docs, data.min_label_count);
    PreparedData p;
    p.labels = std::move(filtered.labels);
    p.split = split_corpus(filtered.docs, data.split, data.split_seed);
    if (p.split.train.empty()) throw DataError("the train split is empty");
    p.vocab = build_vocabulary(p.split.train, data.vocab_min_count);
    p.train = encode_all(p.split.train, p.vocab, p.labels, max_seq_len);
    p.validation = encode_all(p.split.validation, p.vocab, p.labels, max_seq_len);
    p.test = encode_all(p.split.test, p.vocab, p.labels, max_seq_len);
    return p;
}

}  // namespace smajudge

#endif  // SMAJUDGE_TRAINING_DATA_HPP
