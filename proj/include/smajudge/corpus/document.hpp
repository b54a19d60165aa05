// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_CORPUS_DOCUMENT_HPP
#define SMAJUDGE_CORPUS_DOCUMENT_HPP

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "smajudge/corpus/penalty.hpp"
#include "smajudge/numerics/error.hpp"

namespace smajudge {

using Tokens = std::vector<std::string>;

/// Lower-court judgment: law article, charge and sentence.
struct LowerJudgment {
    std::string law_article;
    std::string charge;
    PenaltyTerm penalty;

    [[nodiscard]] int penalty_interval() const { return penalty_to_interval(penalty); }

    friend bool operator==(const LowerJudgment&, const LowerJudgment&) = default;
};

/// Appellate judgment. ruling is 0 when the whole lower judgment is affirmed.
struct AppealJudgment {
    int ruling = 0;
    std::string law_article;

    friend bool operator==(const AppealJudgment&, const AppealJudgment&) = default;
};

/// One appeal case: lower-court facts and judgment, grounds of appeal, new
/// facts and the appellate judgment. The appellate judgment is absent for
/// cases to be predicted; the lower judgment may be absent for such cases too.
struct AppealDocument {
    std::string case_id;
    Tokens lower_facts;
    std::optional<LowerJudgment> lower_judgment;
    Tokens grounds;
    Tokens new_facts;
    std::optional<AppealJudgment> appeal_judgment;

    friend bool operator==(const AppealDocument&, const AppealDocument&) = default;
};

/// Labelled records need both judgments; query records need neither.
enum class RecordKind { labeled, query };

inline Tokens tokenize(std::string_view text) {
    Tokens out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        const std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) out.emplace_back(text.substr(start, i - start));
    }
    return out;
}

inline std::string join_tokens(const Tokens& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i != 0) out += ' ';
        out += tokens[i];
    }
    return out;
}

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline const nlohmann::json& require_field(const nlohmann::json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) throw DataError(std::string("missing field \"") + key + "\"");
    return *it;
}

inline std::string text_field(const nlohmann::json& obj, const char* key) {
    const auto& v = require_field(obj, key);
    if (!v.is_string()) throw DataError(std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

inline std::string label_field(const nlohmann::json& obj, const char* key) {
    const auto& v = require_field(obj, key);
    std::string label;
    if (v.is_string()) {
        label = v.get<std::string>();
    } else if (v.is_number_integer()) {
        label = std::to_string(v.get<long long>());
    } else {
        throw DataError(std::string("invalid label in field \"") + key + "\"");
    }
    if (label.empty() || tokenize(label).size() != 1 || tokenize(label).front() != label) {
        throw DataError(std::string("invalid label in field \"") + key + "\"");
    }
    return label;
}

inline PenaltyTerm penalty_field(const nlohmann::json& obj) {
    const auto& v = require_field(obj, "lower_penalty");
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "none") return PenaltyTerm::no_penalty();
        if (s == "death_or_life") return PenaltyTerm::death_or_life();
        throw DataError("invalid label in field \"lower_penalty\": " + s);
    }
    if (v.is_number_integer()) {
        const auto m = v.get<long long>();
        if (m < 0) throw DataError("invalid label in field \"lower_penalty\": negative months");
        return PenaltyTerm::of_months(m);
    }
    if (v.is_object() && v.contains("months")) {
        const auto& m = v.at("months");
        if (!m.is_number_integer() || m.get<long long>() < 0) throw DataError("invalid label in field \"lower_penalty\"");
        return PenaltyTerm::of_months(m.get<long long>());
    }
    throw DataError("invalid label in field \"lower_penalty\"");
}

inline bool has_value(const nlohmann::json& obj, const char* key) {
    auto it = obj.find(key);
    return it != obj.end() && !it->is_null();
}

}  // namespace detail

/// Parses and validates one JSON-Lines record.
inline AppealDocument parse_document(std::string_view line, RecordKind kind = RecordKind::labeled) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) throw DataError("malformed JSON: record is not an object");

    static const char* const known[] = {"case_id",  "lower_facts", "lower_law_article", "lower_charge",     "lower_penalty",
                                        "grounds",  "new_facts",   "appeal_ruling",     "appeal_law_article"};
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known)) {
            throw DataError("unknown field \"" + it.key() + "\"");
        }
    }

    AppealDocument doc;
    doc.case_id = detail::text_field(obj, "case_id");
    if (doc.case_id.empty()) throw DataError("field \"case_id\" is empty");
    doc.lower_facts = tokenize(detail::text_field(obj, "lower_facts"));
    if (doc.lower_facts.empty()) throw DataError("field \"lower_facts\" is empty");
    doc.grounds = tokenize(detail::text_field(obj, "grounds"));
    if (doc.grounds.empty()) throw DataError("field \"grounds\" is empty");
    if (detail::has_value(obj, "new_facts")) {
        doc.new_facts = tokenize(detail::text_field(obj, "new_facts"));
    } else if (kind == RecordKind::labeled) {
        throw DataError("missing field \"new_facts\"");
    }

    const bool lower_present = detail::has_value(obj, "lower_law_article") || detail::has_value(obj, "lower_charge") ||
                               detail::has_value(obj, "lower_penalty");
    if (kind == RecordKind::labeled || lower_present) {
        doc.lower_judgment = LowerJudgment{detail::label_field(obj, "lower_law_article"),
                                           detail::label_field(obj, "lower_charge"), detail::penalty_field(obj)};
    }

    const bool appeal_present = detail::has_value(obj, "appeal_ruling") || detail::has_value(obj, "appeal_law_article");
    if (kind == RecordKind::labeled || appeal_present) {
        const auto& r = detail::require_field(obj, "appeal_ruling");
        if (!r.is_number_integer() || (r.get<long long>() != 0 && r.get<long long>() != 1)) {
            throw DataError("invalid label in field \"appeal_ruling\": must be 0 or 1");
        }
        doc.appeal_judgment = AppealJudgment{static_cast<int>(r.get<long long>()), detail::label_field(obj, "appeal_law_article")};
    }
    return doc;
}

/// Inverse of parse_document: one compact JSON object in schema key order.
inline std::string serialize_document(const AppealDocument& doc) {
    detail::ordered_json obj;
    obj["case_id"] = doc.case_id;
    obj["lower_facts"] = join_tokens(doc.lower_facts);
    if (doc.lower_judgment) {
        obj["lower_law_article"] = doc.lower_judgment->law_article;
        obj["lower_charge"] = doc.lower_judgment->charge;
        const auto& p = doc.lower_judgment->penalty;
        switch (p.kind) {
            case PenaltyTerm::Kind::none: obj["lower_penalty"] = "none"; break;
            case PenaltyTerm::Kind::death_or_life: obj["lower_penalty"] = "death_or_life"; break;
            case PenaltyTerm::Kind::months: obj["lower_penalty"] = p.months; break;
        }
    }
    obj["grounds"] = join_tokens(doc.grounds);
    obj["new_facts"] = join_tokens(doc.new_facts);
    if (doc.appeal_judgment) {
        obj["appeal_ruling"] = doc.appeal_judgment->ruling;
        obj["appeal_law_article"] = doc.appeal_judgment->law_article;
    }
    return obj.dump();
}

/// Reads a JSON-Lines corpus; blank lines are skipped. Errors carry the line number.
inline std::vector<AppealDocument> read_corpus(std::istream& in, RecordKind kind = RecordKind::labeled) {
    std::vector<AppealDocument> docs;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (tokenize(line).empty()) continue;
        try {
            docs.push_back(parse_document(line, kind));
            if (!seen.insert(docs.back().case_id).second) throw DataError("duplicate case_id \"" + docs.back().case_id + "\"");
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(number) + ": " + e.what());
        }
    }
    return docs;
}

inline std::vector<AppealDocument> read_corpus(const std::string& path, RecordKind kind = RecordKind::labeled) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus file " + path);
    return read_corpus(in, kind);
}

inline void write_corpus(std::ostream& out, const std::vector<AppealDocument>& docs) {
    for (const auto& d : docs) out << serialize_document(d) << '\n';
}

inline void write_corpus(const std::string& path, const std::vector<AppealDocument>& docs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write corpus file " + path);
    write_corpus(out, docs);
}

}  // namespace smajudge

#endif  // SMAJUDGE_CORPUS_DOCUMENT_HPP
