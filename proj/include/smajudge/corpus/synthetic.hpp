// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_CORPUS_SYNTHETIC_HPP
#define SMAJUDGE_CORPUS_SYNTHETIC_HPP

#include <array>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smajudge/corpus/document.hpp"
#include "smajudge/corpus/penalty.hpp"
#include "smajudge/numerics/error.hpp"
#include "smajudge/numerics/rng.hpp"

namespace smajudge {

struct LengthRange {
    std::size_t min = 0;
    std::size_t max = 0;
};

/// Parameters of the planted-signal corpus generator.
///
/// Every label is a function of injected keyword tokens:
///   - the charge comes from a `crime_<c>` token in the lower facts and the
///     lower law article follows the charge;
///   - the penalty interval k comes from a `count_<k>` token in the lower facts;
///   - the appeal is not affirmed exactly when the grounds raise a mitigation
///     plea `plea_<m>` and the facts contain the matching `fact_<m>`; affirmed
///     cases carry one-sided or no mitigation tokens, and with probability
///     `mismatch_rate` a plea paired with the fact of another kind;
///   - the appellate article is the lower article when affirmed and the
///     mitigation article otherwise.
/// With probability 1 - signal_strength each label is replaced by a uniformly
/// drawn one.
struct SyntheticSpec {
    std::size_t documents = 1000;
    std::size_t vocabulary_size = 120;
    double affirm_rate = 27584.0 / 33238.0;
    LengthRange lower_facts_length{8, 14};
    LengthRange grounds_length{3, 6};
    LengthRange new_facts_length{0, 5};
    std::size_t charges = 4;
    std::size_t mitigation_types = 3;
    std::uint64_t seed = 1;
    double signal_strength = 1.0;
    double mismatch_rate = 0.0;
};

namespace synthetic {

inline constexpr std::array<const char*, 6> kMitigations = {"remorse",     "compensation", "surrender",
                                                           "restitution", "forgiveness",  "cooperation"};
inline const std::string kMitigationArticle = "art_67";

inline std::string charge_token(std::size_t c) { return "crime_" + std::to_string(c); }
inline std::string charge_label(std::size_t c) { return "charge_" + std::to_string(c); }
inline std::string article_label(std::size_t c) { return "art_" + std::to_string(101 + c); }
inline std::string count_token(int interval) { return "count_" + std::to_string(interval); }
inline std::string plea_token(std::size_t m) { return std::string("plea_") + kMitigations.at(m); }
inline std::string fact_token(std::size_t m) { return std::string("fact_") + kMitigations.at(m); }
inline std::string filler_token(std::size_t i) { return "w" + std::to_string(i); }

inline std::size_t planted_token_count(const SyntheticSpec& spec) {
    return spec.charges + kPenaltyIntervals + 2 * spec.mitigation_types;
}

}  // namespace synthetic

inline void validate(const SyntheticSpec& spec) {
    if (spec.documents == 0) throw ConfigError("synthetic spec: documents must be positive");
    if (!(spec.affirm_rate > 0.0 && spec.affirm_rate < 1.0)) throw ConfigError("synthetic spec: affirm_rate must be in (0, 1)");
    if (!(spec.mismatch_rate >= 0.0 && spec.mismatch_rate <= 1.0)) throw ConfigError("synthetic spec: mismatch_rate must be in [0, 1]");
    if (!(spec.signal_strength >= 0.0 && spec.signal_strength <= 1.0)) throw ConfigError("synthetic spec: signal_strength must be in [0, 1]");
    if (spec.charges == 0) throw ConfigError("synthetic spec: charges must be positive");
    if (spec.mitigation_types == 0 || spec.mitigation_types > synthetic::kMitigations.size()) {
        throw ConfigError("synthetic spec: mitigation_types must be in [1, " + std::to_string(synthetic::kMitigations.size()) + "]");
    }
    for (const auto* r : {&spec.lower_facts_length, &spec.grounds_length, &spec.new_facts_length}) {
        if (r->min > r->max) throw ConfigError("synthetic spec: length range has min > max");
    }
    if (spec.lower_facts_length.max == 0 || spec.grounds_length.max == 0) {
        throw ConfigError("synthetic spec: lower facts and grounds need a positive maximum length");
    }
    if (spec.vocabulary_size < synthetic::planted_token_count(spec) + 1) {
        throw ConfigError("synthetic spec: vocabulary of " + std::to_string(spec.vocabulary_size) +
                          " tokens cannot host " + std::to_string(synthetic::planted_token_count(spec)) +
                          " planted keywords plus filler");
    }
}

/// Generates `spec.documents` labelled cases; identical specs give identical corpora.
inline std::vector<AppealDocument> generate_synthetic_corpus(const SyntheticSpec& spec) {
    using namespace synthetic;
    validate(spec);
    RngStream rng(spec.seed);
    const std::size_t filler = spec.vocabulary_size - planted_token_count(spec);
    const std::size_t kinds = spec.mitigation_types;

    auto draw_len = [&rng](const LengthRange& r) {
        return static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(r.min), static_cast<std::int64_t>(r.max)));
    };
    auto filler_seq = [&](std::size_t n) {
        Tokens out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(filler_token(rng.below(filler)));
        return out;
    };
    auto plant = [&rng](Tokens& seq, const std::string& token) {
        const auto pos = static_cast<std::ptrdiff_t>(rng.below(seq.size() + 1));
        seq.insert(seq.begin() + pos, token);
    };
    auto other_kind = [&](std::size_t m) { return (m + 1 + rng.below(kinds - 1)) % kinds; };

    std::vector<AppealDocument> docs;
    docs.reserve(spec.documents);
    char id[32];
    for (std::size_t i = 0; i < spec.documents; ++i) {
        AppealDocument d;
        std::snprintf(id, sizeof id, "syn-%06zu", i);
        d.case_id = id;

        const std::size_t charge = rng.below(spec.charges);
        const int interval = static_cast<int>(rng.between(1, static_cast<std::int64_t>(kPenaltyIntervals)));
        const int ruling = rng.bernoulli(spec.affirm_rate) ? 0 : 1;

        d.lower_facts = filler_seq(draw_len(spec.lower_facts_length));
        plant(d.lower_facts, charge_token(charge));
        plant(d.lower_facts, count_token(interval));
        d.grounds = filler_seq(std::max<std::size_t>(draw_len(spec.grounds_length), 1));
        d.new_facts = filler_seq(draw_len(spec.new_facts_length));

        auto plant_fact = [&](std::size_t m) {
            if (!d.new_facts.empty() && rng.bernoulli(0.5)) {
                plant(d.new_facts, fact_token(m));
            } else {
                plant(d.lower_facts, fact_token(m));
            }
        };
        const std::size_t m = rng.below(kinds);
        if (ruling == 1) {
            plant(d.grounds, plea_token(m));
            plant_fact(m);
        } else {
            if (kinds > 1 && rng.bernoulli(spec.mismatch_rate)) {
                plant(d.grounds, plea_token(m));
                plant_fact(other_kind(m));
            } else {
                switch (rng.below(3)) {
                    case 0:  // plea without supporting fact
                        plant(d.grounds, plea_token(m));
                        break;
                    case 1:  // mitigating fact nobody pleads
                        plant_fact(m);
                        break;
                    default:
                        break;
                }
            }
        }

        auto noisy = [&](auto truth, auto draw) { return rng.bernoulli(spec.signal_strength) ? truth : draw(); };
        const std::size_t charge_out = noisy(charge, [&] { return rng.below(spec.charges); });
        const std::size_t article_out = noisy(charge, [&] { return rng.below(spec.charges); });
        const int interval_out = noisy(interval, [&] { return static_cast<int>(rng.between(1, 11)); });
        const int ruling_out = noisy(ruling, [&] { return static_cast<int>(rng.below(2)); });
        const std::string appeal_article = ruling == 1 ? kMitigationArticle : article_label(charge);
        const std::string appeal_article_out =
            noisy(appeal_article, [&] { return rng.bernoulli(0.5) ? kMitigationArticle : article_label(rng.below(spec.charges)); });

        d.lower_judgment = LowerJudgment{article_label(article_out), charge_label(charge_out), representative_term(interval_out)};
        d.appeal_judgment = AppealJudgment{ruling_out, appeal_article_out};
        docs.push_back(std::move(d));
    }
    return docs;
}

inline void to_json(nlohmann::json& j, const SyntheticSpec& s) {
    j = nlohmann::json{{"documents", s.documents},
                       {"vocabulary_size", s.vocabulary_size},
                       {"affirm_rate", s.affirm_rate},
                       {"lower_facts_length", {s.lower_facts_length.min, s.lower_facts_length.max}},
                       {"grounds_length", {s.grounds_length.min, s.grounds_length.max}},
                       {"new_facts_length", {s.new_facts_length.min, s.new_facts_length.max}},
                       {"charges", s.charges},
                       {"mitigation_types", s.mitigation_types},
                       {"seed", s.seed},
                       {"signal_strength", s.signal_strength},
                       {"mismatch_rate", s.mismatch_rate}};
}

/// Reads a spec object; omitted keys keep their defaults, unknown keys are errors.
inline SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("synthetic spec must be a JSON object");
    SyntheticSpec s;
    auto range = [](const nlohmann::json& v, const char* key) {
        if (!v.is_array() || v.size() != 2) throw ConfigError(std::string("synthetic spec: ") + key + " must be [min, max]");
        return LengthRange{v[0].get<std::size_t>(), v[1].get<std::size_t>()};
    };
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto& k = it.key();
            const auto& v = it.value();
            if (k == "documents") s.documents = v.get<std::size_t>();
            else if (k == "vocabulary_size") s.vocabulary_size = v.get<std::size_t>();
            else if (k == "affirm_rate") s.affirm_rate = v.get<double>();
            else if (k == "lower_facts_length") s.lower_facts_length = range(v, "lower_facts_length");
            else if (k == "grounds_length") s.grounds_length = range(v, "grounds_length");
            else if (k == "new_facts_length") s.new_facts_length = range(v, "new_facts_length");
            else if (k == "charges") s.charges = v.get<std::size_t>();
            else if (k == "mitigation_types") s.mitigation_types = v.get<std::size_t>();
            else if (k == "seed") s.seed = v.get<std::uint64_t>();
            else if (k == "signal_strength") s.signal_strength = v.get<double>();
            else if (k == "mismatch_rate") s.mismatch_rate = v.get<double>();
            else throw ConfigError("synthetic spec: unknown key \"" + k + "\"");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("synthetic spec: ") + e.what());
    }
    validate(s);
    return s;
}

}  // namespace smajudge

#endif  // SMAJUDGE_CORPUS_SYNTHETIC_HPP
