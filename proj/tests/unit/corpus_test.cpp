#include <gtest/gtest.h>

#include <string>

#include "rankfreq/corpus.hpp"
#include "rankfreq/error.hpp"

using namespace rankfreq;

namespace {

TokenCounts counts_of(std::initializer_list<std::pair<const char*, std::uint64_t>> kv,
                      Mode mode = Mode::word) {
  TokenCounts tc(mode);
  for (const auto& [t, c] : kv) tc.add(t, c);
  return tc;
}

}  // namespace

TEST(Tokenize, HanFilterKeepsOnlyHanGraphemes) {
  const TokenCounts tc = tokenize("道可道，非常道。abc 123 名", Mode::character, Filter::han);
  EXPECT_EQ(tc.count("道"), 3u);
  EXPECT_EQ(tc.count("可"), 1u);
  EXPECT_EQ(tc.count("名"), 1u);
  EXPECT_EQ(tc.count("，"), 0u);
  EXPECT_EQ(tc.count("a"), 0u);
  EXPECT_EQ(tc.total(), 7u);
  EXPECT_EQ(tc.distinct(), 5u);
}

TEST(Tokenize, CharacterModeKeepsCombiningSequencesTogether) {
  // e + combining acute is one grapheme.
  const TokenCounts tc = tokenize("e\xCC\x81" "e", Mode::character, Filter::none);
  EXPECT_EQ(tc.distinct(), 2u);
  EXPECT_EQ(tc.count("e\xCC\x81"), 1u);
}

TEST(Tokenize, WordModeLowercasesAndStripsPunctuation) {
  const TokenCounts tc =
      tokenize("The time, the TIME! don't \"stop\" 42 state-of-art", Mode::word,
               Filter::alpha);
  EXPECT_EQ(tc.count("the"), 2u);
  EXPECT_EQ(tc.count("time"), 2u);
  EXPECT_EQ(tc.count("don't"), 1u);
  EXPECT_EQ(tc.count("stop"), 1u);
  EXPECT_EQ(tc.count("state-of-art"), 1u);
  EXPECT_EQ(tc.count("42"), 0u);
}

TEST(Tokenize, WordModeFilterNoneKeepsDigits) {
  const TokenCounts tc = tokenize("route 66, route", Mode::word, Filter::none);
  EXPECT_EQ(tc.count("66"), 1u);
  EXPECT_EQ(tc.count("route"), 2u);
}

TEST(Tokenize, InvalidUtf8ReportsByteOffset) {
  const std::string bad = std::string("ab") + '\xC3' + "(";
  try {
    tokenize(bad, Mode::character, Filter::none);
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_EQ(e.byte_offset(), 2u);
  }
}

TEST(Tokenize, NothingSurvivingIsEmptyCorpusError) {
  EXPECT_THROW(tokenize("hello world", Mode::character, Filter::han), EmptyCorpusError);
  EXPECT_THROW(tokenize("", Mode::word, Filter::none), EmptyCorpusError);
}

TEST(Rank, SortsByCountThenToken) {
  const RankFrequency rf = rank(counts_of({{"b", 2}, {"a", 2}, {"c", 5}, {"d", 1}}));
  ASSERT_EQ(rf.size(), 4u);
  EXPECT_EQ(rf.tokens()[0], "c");
  EXPECT_EQ(rf.tokens()[1], "a");
  EXPECT_EQ(rf.tokens()[2], "b");
  EXPECT_EQ(rf.tokens()[3], "d");
  EXPECT_EQ(rf.total(), 10u);
  EXPECT_DOUBLE_EQ(rf.freq(1), 0.5);
  EXPECT_DOUBLE_EQ(rf.freq(4), 0.1);
}

TEST(Rank, EmptyIsError) {
  EXPECT_THROW(rank(TokenCounts(Mode::word)), EmptyCorpusError);
}

TEST(RankFrequency, FromFrequenciesValidates) {
  EXPECT_THROW(RankFrequency::from_frequencies({}), EmptyCorpusError);
  EXPECT_THROW(RankFrequency::from_frequencies({0.5, 0.6}), DomainError);
  EXPECT_THROW(RankFrequency::from_frequencies({0.5, 0.0}), DomainError);
  const auto rf = RankFrequency::from_frequencies({0.5, 0.3, 0.2});
  EXPECT_FALSE(rf.has_counts());
  EXPECT_EQ(rf.total(), 0u);
}

TEST(JumpRanks, CountsTypesAtOrAboveEachLevel) {
  // counts 5,3,3,1,1,1
  const RankFrequency rf = rank(
      counts_of({{"a", 5}, {"b", 3}, {"c", 3}, {"d", 1}, {"e", 1}, {"f", 1}}));
  const JumpRanks jr = jump_ranks(rf);
  ASSERT_EQ(jr.r.size(), 6u);
  EXPECT_EQ(jr.at(0), 6u);  // n
  EXPECT_EQ(jr.at(1), 3u);  // count >= 2
  EXPECT_EQ(jr.at(2), 3u);
  EXPECT_EQ(jr.at(3), 1u);
  EXPECT_EQ(jr.at(4), 1u);
  EXPECT_EQ(jr.at(5), 0u);
  EXPECT_EQ(jr.at(99), 0u);
  EXPECT_EQ(jr.types_with_count(1), 3u);
  EXPECT_EQ(jr.types_with_count(3), 2u);
  EXPECT_EQ(jr.types_with_count(2), 0u);
}

TEST(JumpRanks, NeedsCounts) {
  EXPECT_THROW(jump_ranks(RankFrequency::from_frequencies({0.6, 0.4})), DomainError);
}

TEST(HapaxBoundary, FirstGroupLargerThanThreshold) {
  TokenCounts tc(Mode::word);
  tc.add("top", 50);
  for (int i = 0; i < 5; ++i) tc.add("m" + std::to_string(i), 3);   // 5 share 3
  for (int i = 0; i < 11; ++i) tc.add("h" + std::to_string(i), 2);  // 11 share 2
  for (int i = 0; i < 20; ++i) tc.add("o" + std::to_string(i), 1);
  const RankFrequency rf = rank(tc);
  EXPECT_EQ(hapax_boundary(rf, 10), std::optional<std::size_t>(7));
  EXPECT_EQ(hapax_boundary(rf, 4), std::optional<std::size_t>(2));
  EXPECT_EQ(hapax_boundary(rf, 20), std::nullopt);
}

TEST(RangeMass, WholeTableIsOne) {
  const RankFrequency rf = rank(counts_of({{"a", 7}, {"b", 3}, {"c", 3}, {"d", 1}}));
  EXPECT_NEAR(range_mass(rf, 1, rf.size()), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(range_mass(rf, 2, 3), 6.0 / 14.0);
  EXPECT_THROW(range_mass(rf, 0, 2), DomainError);
  EXPECT_THROW(range_mass(rf, 3, 2), DomainError);
  EXPECT_THROW(range_mass(rf, 1, 5), DomainError);
}

TEST(Mix, SelfMixLeavesFrequenciesBitExact) {
  const TokenCounts tc = tokenize("道可道，非常道。名可名，非常名。無名天地之始", Mode::character,
                                  Filter::han);
  const RankFrequency once = rank(tc);
  const RankFrequency twice = rank(mix(tc, tc));
  ASSERT_EQ(once.size(), twice.size());
  for (std::size_t r = 1; r <= once.size(); ++r) {
    EXPECT_EQ(once.freq(r), twice.freq(r)) << "rank " << r;
    EXPECT_EQ(once.tokens()[r - 1], twice.tokens()[r - 1]);
  }
}

TEST(Mix, DisjointCorporaAddUp) {
  const TokenCounts a = counts_of({{"x", 3}, {"y", 1}});
  const TokenCounts b = counts_of({{"p", 2}, {"q", 2}, {"r", 1}});
  const TokenCounts m = mix(a, b);
  EXPECT_EQ(m.total(), a.total() + b.total());
  EXPECT_EQ(m.distinct(), a.distinct() + b.distinct());
  EXPECT_EQ(mix(a, b), mix(b, a));
}

TEST(Mix, ModeMismatchThrows) {
  EXPECT_THROW(mix(TokenCounts(Mode::word), TokenCounts(Mode::character)),
               ModeMismatchError);
}

TEST(TokenCountsJson, RoundTrip) {
  const TokenCounts tc = counts_of({{"b", 2}, {"a", 9}, {"c", 1}}, Mode::character);
  const auto j = to_json(tc);
  EXPECT_EQ(j.at("N").get<std::uint64_t>(), 12u);
  EXPECT_EQ(j.at("entries")[0].at("token").get<std::string>(), "a");
  EXPECT_EQ(token_counts_from_json(j), tc);

  auto broken = j;
  broken["N"] = 13;
  EXPECT_THROW(token_counts_from_json(broken), DomainError);
}

TEST(Parse, ModesAndFilters) {
  EXPECT_EQ(parse_mode("char"), Mode::character);
  EXPECT_EQ(parse_mode("word"), Mode::word);
  EXPECT_EQ(parse_filter("han"), Filter::han);
  EXPECT_THROW(parse_mode("byte"), DomainError);
  EXPECT_THROW(parse_filter("latin"), DomainError);
}
