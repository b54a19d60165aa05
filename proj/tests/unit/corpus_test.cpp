// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "smajudge/corpus/document.hpp"
#include "smajudge/corpus/labels.hpp"
#include "smajudge/corpus/penalty.hpp"
#include "smajudge/corpus/split.hpp"
#include "smajudge/corpus/synthetic.hpp"
#include "smajudge/corpus/vocabulary.hpp"

namespace smajudge {
namespace {

const char* const kRecord =
    R"({"case_id":"c1","lower_facts":"the accused stole a bike","lower_law_article":"art_264","lower_charge":"theft",)"
    R"("lower_penalty":8,"grounds":"sentence too heavy","new_facts":"returned the bike","appeal_ruling":1,"appeal_law_article":"art_67"})";

TEST(Penalty, IntervalTable) {
    const std::vector<std::pair<PenaltyTerm, int>> rows = {
        {PenaltyTerm::no_penalty(), 1},     {PenaltyTerm::of_months(0), 2},    {PenaltyTerm::of_months(6), 2},
        {PenaltyTerm::of_months(7), 3},     {PenaltyTerm::of_months(9), 3},    {PenaltyTerm::of_months(10), 4},
        {PenaltyTerm::of_months(12), 4},    {PenaltyTerm::of_months(13), 5},   {PenaltyTerm::of_months(35), 5},
        {PenaltyTerm::of_months(36), 6},    {PenaltyTerm::of_months(59), 6},   {PenaltyTerm::of_months(60), 7},
        {PenaltyTerm::of_months(83), 7},    {PenaltyTerm::of_months(84), 8},   {PenaltyTerm::of_months(107), 8},
        {PenaltyTerm::of_months(108), 9},   {PenaltyTerm::of_months(120), 9},  {PenaltyTerm::of_months(121), 10},
        {PenaltyTerm::of_months(1000), 10}, {PenaltyTerm::death_or_life(), 11}};
    for (const auto& [term, interval] : rows) EXPECT_EQ(penalty_to_interval(term), interval) << term.months;
    EXPECT_THROW(penalty_to_interval(PenaltyTerm::of_months(-1)), DataError);
}

TEST(Penalty, EveryMonthCountMapsMonotonically) {
    int previous = 2;
    for (std::int64_t m = 0; m <= 400; ++m) {
        const int k = penalty_to_interval(PenaltyTerm::of_months(m));
        ASSERT_GE(k, previous);
        ASSERT_LE(k, 10);
        previous = k;
    }
}

TEST(Penalty, RepresentativeTermsRoundTrip) {
    for (int k = 1; k <= 11; ++k) EXPECT_EQ(penalty_to_interval(representative_term(k)), k);
    EXPECT_THROW(representative_term(0), DataError);
    EXPECT_THROW(representative_term(12), DataError);
}

TEST(Document, TokenizeSplitsOnWhitespace) {
    EXPECT_EQ(tokenize("  a\tb \n c  "), (Tokens{"a", "b", "c"}));
    EXPECT_TRUE(tokenize("   ").empty());
    EXPECT_EQ(join_tokens({"a", "b"}), "a b");
}

TEST(Document, ParsesLabelledRecord) {
    const AppealDocument d = parse_document(kRecord);
    EXPECT_EQ(d.case_id, "c1");
    EXPECT_EQ(d.lower_facts.size(), 5u);
    ASSERT_TRUE(d.lower_judgment);
    EXPECT_EQ(d.lower_judgment->penalty, PenaltyTerm::of_months(8));
    EXPECT_EQ(d.lower_judgment->penalty_interval(), 3);
    ASSERT_TRUE(d.appeal_judgment);
    EXPECT_EQ(d.appeal_judgment->ruling, 1);
    EXPECT_EQ(d.appeal_judgment->law_article, "art_67");
}

TEST(Document, SerializeParseRoundTrip) {
    const AppealDocument d = parse_document(kRecord);
    const std::string line = serialize_document(d);
    EXPECT_EQ(parse_document(line), d);
    EXPECT_EQ(serialize_document(parse_document(line)), line);
}

TEST(Document, RejectsSchemaViolations) {
    auto with = [](const std::string& from, const std::string& to) {
        std::string s = kRecord;
        s.replace(s.find(from), from.size(), to);
        return s;
    };
    EXPECT_THROW(parse_document("{not json"), DataError);
    EXPECT_THROW(parse_document("[1,2]"), DataError);
    EXPECT_THROW(parse_document(with(R"("appeal_ruling":1)", R"("appeal_ruling":2)")), DataError);
    EXPECT_THROW(parse_document(with(R"("case_id":"c1")", R"("case_id":"c1","extra":1)")), DataError);
    EXPECT_THROW(parse_document(with(R"("grounds":"sentence too heavy")", R"("grounds":"  ")")), DataError);
    EXPECT_THROW(parse_document(with(R"("lower_penalty":8)", R"("lower_penalty":-3)")), DataError);
    EXPECT_THROW(parse_document(with(R"(,"new_facts":"returned the bike")", "")), DataError);
}

TEST(Document, QueryRecordsMayOmitJudgments) {
    const AppealDocument d = parse_document(R"({"case_id":"q","lower_facts":"a b","grounds":"c"})", RecordKind::query);
    EXPECT_FALSE(d.lower_judgment);
    EXPECT_FALSE(d.appeal_judgment);
    EXPECT_TRUE(d.new_facts.empty());
    EXPECT_THROW(parse_document(R"({"case_id":"q","lower_facts":"a b","grounds":"c"})"), DataError);
}

TEST(Document, ReadCorpusSkipsBlankLinesAndReportsLineNumbers) {
    std::istringstream ok(std::string(kRecord) + "\n\n" + serialize_document([] {
                              AppealDocument d = parse_document(kRecord);
                              d.case_id = "c2";
                              return d;
                          }()) + "\n");
    EXPECT_EQ(read_corpus(ok).size(), 2u);

    std::istringstream dup(std::string(kRecord) + "\n" + kRecord + "\n");
    try {
        read_corpus(dup);
        FAIL() << "duplicate case id accepted";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(Vocabulary, ReservedIdsFrequencyOrderAndThreshold) {
    AppealDocument d;
    d.lower_facts = {"b", "a", "b", "c"};
    d.grounds = {"a", "b"};
    d.new_facts = {"d"};
    const Vocabulary v = build_vocabulary({d}, 2);
    ASSERT_EQ(v.size(), 4u);  // pad, unk, b (3), a (2)
    EXPECT_EQ(v.token(Vocabulary::kPad), Vocabulary::kPadToken);
    EXPECT_EQ(v.token(Vocabulary::kUnk), Vocabulary::kUnkToken);
    EXPECT_EQ(v.id("b"), 2u);
    EXPECT_EQ(v.id("a"), 3u);
    EXPECT_EQ(v.id("c"), Vocabulary::kUnk);
    EXPECT_EQ(v.encode({"a", "c", "b"}, 2), (std::vector<std::size_t>{3, 1}));
    const Vocabulary all = build_vocabulary({d}, 1);
    EXPECT_EQ(all.size(), 6u);
    EXPECT_EQ(all.id("c"), 4u);  // ties broken by token
    EXPECT_THROW(Vocabulary::from_tokens({"x", "x"}, 1), DataError);
    EXPECT_THROW(Vocabulary::from_tokens({"<pad>"}, 1), DataError);
}

TEST(Labels, CollectSortsAndFilterDropsRareLabels) {
    std::vector<AppealDocument> docs;
    for (int i = 0; i < 5; ++i) {
        AppealDocument d = parse_document(kRecord);
        d.case_id = "c" + std::to_string(i);
        if (i == 4) d.lower_judgment->charge = "fraud";
        docs.push_back(d);
    }
    const LabelSpaces all = collect_labels(docs);
    EXPECT_EQ(all.charges.names(), (std::vector<std::string>{"fraud", "theft"}));
    const FilteredCorpus f = filter_labels(docs, 2);
    EXPECT_EQ(f.docs.size(), 4u);
    EXPECT_EQ(f.labels.charges.names(), (std::vector<std::string>{"theft"}));
    EXPECT_THROW(static_cast<void>(f.labels.charges.id("fraud")), DataError);
    EXPECT_THROW(filter_labels(docs, 100), DataError);
}

std::vector<AppealDocument> numbered(std::size_t n) {
    std::vector<AppealDocument> docs;
    for (std::size_t i = 0; i < n; ++i) {
        AppealDocument d = parse_document(kRecord);
        d.case_id = "c" + std::to_string(i);
        docs.push_back(d);
    }
    return docs;
}

TEST(Split, FloorSizesDisjointCoverAndDeterminism) {
    const auto docs = numbered(97);
    const CorpusSplit s = split_corpus(docs, {0.7, 0.1, 0.1}, 5);
    EXPECT_EQ(s.train.size(), 67u);
    EXPECT_EQ(s.validation.size(), 9u);
    EXPECT_EQ(s.test.size(), 9u);
    EXPECT_EQ(s.discarded.size(), 12u);
    std::set<std::string> ids;
    for (const auto* part : {&s.train, &s.validation, &s.test, &s.discarded}) {
        for (const auto& d : *part) EXPECT_TRUE(ids.insert(d.case_id).second);
    }
    EXPECT_EQ(ids.size(), docs.size());

    const CorpusSplit again = split_corpus(docs, {0.7, 0.1, 0.1}, 5);
    EXPECT_EQ(again.test, s.test);
    const CorpusSplit other = split_corpus(docs, {0.7, 0.1, 0.1}, 6);
    EXPECT_NE(other.train, s.train);
}

TEST(Split, FullRatiosKeepEveryDocumentAndBadRatiosThrow) {
    const auto docs = numbered(10);
    const CorpusSplit s = split_corpus(docs, {0.8, 0.1, 0.1}, 1);
    EXPECT_EQ(s.train.size() + s.validation.size() + s.test.size(), 10u);
    EXPECT_TRUE(s.discarded.empty());
    EXPECT_THROW(split_corpus(docs, {0.8, 0.2, 0.1}, 1), ConfigError);
    EXPECT_THROW(split_corpus(docs, {-0.1, 0.2, 0.1}, 1), ConfigError);
}

// Independent labelling rule, recomputed from the planted tokens alone.
struct OracleLabels {
    std::string charge, article, appeal_article;
    int interval = 0;
    int ruling = 0;
};

OracleLabels oracle(const AppealDocument& d) {
    OracleLabels o;
    std::set<std::string> facts(d.lower_facts.begin(), d.lower_facts.end());
    facts.insert(d.new_facts.begin(), d.new_facts.end());
    for (const auto& t : d.lower_facts) {
        if (t.rfind("crime_", 0) == 0) {
            const int c = std::stoi(t.substr(6));
            o.charge = "charge_" + std::to_string(c);
            o.article = "art_" + std::to_string(101 + c);
        }
        if (t.rfind("count_", 0) == 0) o.interval = std::stoi(t.substr(6));
    }
    for (const auto& t : d.grounds) {
        if (t.rfind("plea_", 0) == 0 && facts.count("fact_" + t.substr(5))) o.ruling = 1;
    }
    o.appeal_article = o.ruling == 1 ? "art_67" : o.article;
    return o;
}

class SyntheticRule : public ::testing::TestWithParam<double> {};

TEST_P(SyntheticRule, LabelsFollowPlantedTokens) {
    SyntheticSpec spec;
    spec.documents = 600;
    spec.mismatch_rate = GetParam();
    spec.seed = 11;
    std::size_t positives = 0, mismatched = 0;
    for (const auto& d : generate_synthetic_corpus(spec)) {
        const OracleLabels o = oracle(d);
        ASSERT_EQ(d.lower_judgment->charge, o.charge) << d.case_id;
        ASSERT_EQ(d.lower_judgment->law_article, o.article) << d.case_id;
        ASSERT_EQ(d.lower_judgment->penalty_interval(), o.interval) << d.case_id;
        ASSERT_EQ(d.appeal_judgment->ruling, o.ruling) << d.case_id;
        ASSERT_EQ(d.appeal_judgment->law_article, o.appeal_article) << d.case_id;
        positives += static_cast<std::size_t>(o.ruling);
        const bool pleads = std::any_of(d.grounds.begin(), d.grounds.end(), [](const auto& t) { return t.rfind("plea_", 0) == 0; });
        const bool has_fact = std::any_of(d.lower_facts.begin(), d.lower_facts.end(), [](const auto& t) { return t.rfind("fact_", 0) == 0; }) ||
                              std::any_of(d.new_facts.begin(), d.new_facts.end(), [](const auto& t) { return t.rfind("fact_", 0) == 0; });
        if (o.ruling == 0 && pleads && has_fact) ++mismatched;
    }
    EXPECT_GT(positives, 0u);
    if (GetParam() == 0.0) {
        EXPECT_EQ(mismatched, 0u);
    } else {
        EXPECT_GT(mismatched, 0u);
    }
}

INSTANTIATE_TEST_SUITE_P(MismatchRates, SyntheticRule, ::testing::Values(0.0, 0.5, 1.0));

TEST(Synthetic, DeterministicPerSeedAndAffirmRateHolds) {
    SyntheticSpec spec;
    spec.documents = 2000;
    const auto a = generate_synthetic_corpus(spec);
    EXPECT_EQ(a, generate_synthetic_corpus(spec));
    spec.seed = 2;
    EXPECT_NE(a, generate_synthetic_corpus(spec));
    const auto affirmed = std::count_if(a.begin(), a.end(), [](const auto& d) { return d.appeal_judgment->ruling == 0; });
    EXPECT_NEAR(static_cast<double>(affirmed) / 2000.0, spec.affirm_rate, 0.03);
}

TEST(Synthetic, GeneratedRecordsSurviveSerialization) {
    SyntheticSpec spec;
    spec.documents = 50;
    for (const auto& d : generate_synthetic_corpus(spec)) EXPECT_EQ(parse_document(serialize_document(d)), d);
}

TEST(Synthetic, ZeroSignalBreaksTheRule) {
    SyntheticSpec spec;
    spec.documents = 500;
    spec.signal_strength = 0.0;
    std::size_t wrong = 0;
    for (const auto& d : generate_synthetic_corpus(spec)) wrong += d.lower_judgment->charge != oracle(d).charge;
    EXPECT_GT(wrong, 250u);  // uniform over 4 charges: about 3/4 disagree
}

TEST(Synthetic, SpecJsonRoundTripAndValidation) {
    SyntheticSpec spec;
    spec.documents = 7;
    spec.mismatch_rate = 0.3;
    spec.grounds_length = {2, 9};
    nlohmann::json j = spec;
    const SyntheticSpec back = synthetic_spec_from_json(j);
    EXPECT_EQ(back.documents, 7u);
    EXPECT_EQ(back.mismatch_rate, 0.3);
    EXPECT_EQ(back.grounds_length.max, 9u);
    EXPECT_THROW(synthetic_spec_from_json({{"documentz", 3}}), ConfigError);
    SyntheticSpec bad;
    bad.vocabulary_size = 10;
    EXPECT_THROW(validate(bad), ConfigError);
    bad = SyntheticSpec{};
    bad.mitigation_types = 7;
    EXPECT_THROW(validate(bad), ConfigError);
    bad = SyntheticSpec{};
    bad.affirm_rate = 1.0;
    EXPECT_THROW(validate(bad), ConfigError);
}

}  // namespace
}  // namespace smajudge
