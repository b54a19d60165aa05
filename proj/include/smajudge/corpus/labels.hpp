// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_CORPUS_LABELS_HPP
#define SMAJUDGE_CORPUS_LABELS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smajudge/corpus/document.hpp"
#include "smajudge/corpus/penalty.hpp"
#include "smajudge/numerics/error.hpp"

namespace smajudge {

/// Ordered set of label names for one classification task.
class LabelSet {
public:
    LabelSet() = default;
    explicit LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (!index_.emplace(names_[i], i).second) throw DataError("duplicate label " + names_[i]);
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] const std::string& name(std::size_t id) const { return names_.at(id); }
    [[nodiscard]] bool contains(const std::string& name) const { return index_.count(name) != 0; }

    [[nodiscard]] std::size_t id(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw DataError("unknown label \"" + name + "\"");
        return it->second;
    }

    friend bool operator==(const LabelSet& a, const LabelSet& b) { return a.names_ == b.names_; }

private:
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> index_;
};

/// Label spaces of the five subtasks. Penalty intervals are always 1..11,
/// stored as ids 0..10.
struct LabelSpaces {
    LabelSet lower_articles;
    LabelSet charges;
    LabelSet appellate_articles;

    [[nodiscard]] static constexpr std::size_t penalty_size() noexcept { return kPenaltyIntervals; }

    friend bool operator==(const LabelSpaces&, const LabelSpaces&) = default;
};

/// Label spaces spanned by `docs`, each sorted by name.
inline LabelSpaces collect_labels(const std::vector<AppealDocument>& docs) {
    std::set<std::string> lower, charges, appellate;
    for (const auto& d : docs) {
        if (d.lower_judgment) {
            lower.insert(d.lower_judgment->law_article);
            charges.insert(d.lower_judgment->charge);
        }
        if (d.appeal_judgment) appellate.insert(d.appeal_judgment->law_article);
    }
    return LabelSpaces{LabelSet({lower.begin(), lower.end()}), LabelSet({charges.begin(), charges.end()}),
                       LabelSet({appellate.begin(), appellate.end()})};
}

struct FilteredCorpus {
    std::vector<AppealDocument> docs;
    LabelSpaces labels;
};

/// Drops every document carrying a law article or charge that occurs fewer
/// than `min_label_count` times corpus-wide, then rebuilds the label spaces
/// from the survivors. Counts are taken once over the input.
inline FilteredCorpus filter_labels(const std::vector<AppealDocument>& docs, std::size_t min_label_count) {
    std::map<std::string, std::size_t> lower, charges, appellate;
    for (const auto& d : docs) {
        if (!d.lower_judgment || !d.appeal_judgment) throw DataError("filter_labels needs labelled documents: " + d.case_id);
        ++lower[d.lower_judgment->law_article];
        ++charges[d.lower_judgment->charge];
        ++appellate[d.appeal_judgment->law_article];
    }
    FilteredCorpus out;
    for (const auto& d : docs) {
        if (lower[d.lower_judgment->law_article] < min_label_count) continue;
        if (charges[d.lower_judgment->charge] < min_label_count) continue;
        if (appellate[d.appeal_judgment->law_article] < min_label_count) continue;
        out.docs.push_back(d);
    }
    if (out.docs.empty()) throw DataError("label filtering dropped every document");
    out.labels = collect_labels(out.docs);
    return out;
}

}  // namespace smajudge

#endif  // SMAJUDGE_CORPUS_LABELS_HPP
