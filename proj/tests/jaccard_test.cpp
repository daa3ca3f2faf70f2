#include "simfuse/jaccard.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "simfuse/error.hpp"

namespace simfuse {
namespace {

TEST(CoOccurrence, SetIntersection) {
  CoOccurrence c = co_occurrence(tokenize("a b c"), tokenize("a b d"));
  EXPECT_EQ(c.words, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(co_occurrence(tokenize("a b"), tokenize("c d")).size(), 0u);
  EXPECT_EQ(co_occurrence(tokenize("a a b"), tokenize("a")).words, (std::vector<std::string>{"a"}));
}

TEST(CoOccurrence, RolesFromFirstOccurrence) {
  CoOccurrence c = co_occurrence(parse_annotated("x|_|SUBJ x|_|OBJ"), parse_annotated("y|_|_ x|_|ADV x|_|SUBJ"));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.roles[0].first, Role::Subj);
  EXPECT_EQ(c.roles[0].second, Role::Adv);
}

TEST(ComponentWeight, GateAndFormula) {
  CoOccurrence two = co_occurrence(parse_annotated("a|_|SUBJ b|_|PRED"), parse_annotated("a|_|SUBJ b|_|PRED"));
  EXPECT_EQ(component_weight(two), 1.0);

  CoOccurrence three_none = co_occurrence(parse_annotated("a|_|SUBJ b|_|PRED c|_|NONE"),
                                          parse_annotated("a|_|OBJ b|_|_ c|_|NONE"));
  EXPECT_EQ(component_weight(three_none), 1.0);

  CoOccurrence four_two = co_occurrence(parse_annotated("a|_|SUBJ b|_|PRED c|_|OBJ d|_|ATTR"),
                                        parse_annotated("a|_|SUBJ b|_|PRED c|_|ADV d|_|_"));
  EXPECT_EQ(component_weight(four_two), 1.5);
}

TEST(JaccardScore, HandValues) {
  EXPECT_DOUBLE_EQ(jaccard_score(tokenize("a b c"), tokenize("a b d")), 0.5);
  EXPECT_EQ(jaccard_score(tokenize("a b"), tokenize("c d")), 0.0);

  Sentence s = parse_annotated("a|_|SUBJ b|_|PRED c|_|OBJ");
  JaccardScore j = jaccard_detail(s, s);
  EXPECT_DOUBLE_EQ(j.alpha, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(j.raw, 4.0 / 3.0);
  EXPECT_EQ(j.clamped, 1.0);
}

TEST(JaccardScore, EmptySentenceThrows) {
  EXPECT_THROW(jaccard_score(Sentence{}, tokenize("a")), EmptySentence);
}

Sentence random_sentence(std::mt19937_64& rng) {
  static const char* alphabet[] = {"a", "b", "c", "d", "e"};
  Sentence s;
  for (std::size_t i = 0, n = 1 + rng() % 6; i < n; ++i) {
    Token t{alphabet[rng() % 5], std::nullopt, std::nullopt};
    std::size_t r = rng() % 8;
    if (r < 7) t.role = static_cast<Role>(r);
    s.tokens.push_back(t);
  }
  return s;
}

TEST(JaccardScore, MatchesLiteralTranscriptionAndInvariants) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    Sentence a = random_sentence(rng);
    Sentence b = random_sentence(rng);
    JaccardScore j = jaccard_detail(a, b);
    EXPECT_EQ(j.clamped, oracle::jaccard_literal(a, b));
    EXPECT_EQ(j.clamped, jaccard_score(b, a));
    EXPECT_GE(j.raw, 0.0);
    EXPECT_LE(j.raw, 2.0);
    if (co_occurrence(a, b).size() < 3) {
      EXPECT_EQ(j.alpha, 1.0);
    }
  }
}

}  // namespace
}  // namespace simfuse
