#include "simfuse/tfidf.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "simfuse/error.hpp"

namespace simfuse {
namespace {

LabeledPair pair_of(const std::string& a, const std::string& b) { return {"p", tokenize(a), tokenize(b), 1.0}; }

Dataset four_pairs() {
  Dataset d;
  d.pairs = {pair_of("x", "y"), pair_of("a b", "c"), pair_of("y q", "r"), pair_of("y s", "y t")};
  return d;
}

TEST(BuildStats, CountsPairsOncePerTerm) {
  CorpusStats s = build_stats(four_pairs());
  EXPECT_EQ(s.total_pairs, 4u);
  EXPECT_EQ(s.doc_freq("x"), 1u);
  EXPECT_EQ(s.doc_freq("y"), 3u);  // twice in the last pair, counted once
  EXPECT_EQ(s.doc_freq("absent"), 0u);
  for (const auto& [term, df] : s.pair_doc_freq) EXPECT_LE(df, s.total_pairs);
}

TEST(BuildStats, EmptyDatasetThrows) { EXPECT_THROW(build_stats(Dataset{}), EmptyCorpus); }

TEST(TermFrequency, CountOverUnionSize) {
  LabeledPair p = pair_of("a b c", "a b d");
  EXPECT_DOUBLE_EQ(term_frequency("a", p), 2.0 / 4.0);
  EXPECT_DOUBLE_EQ(term_frequency("zzz", p), 0.0);
  EXPECT_DOUBLE_EQ(term_frequency("x", pair_of("x", "x")), 2.0);
}

TEST(Idf, NaturalLogWithFloor) {
  CorpusStats s = build_stats(four_pairs());
  EXPECT_NEAR(idf("x", s), std::log(4.0 / 2.0), 1e-15);
  EXPECT_NEAR(idf("x", s), 0.6931, 1e-4);
  EXPECT_NEAR(idf("unseen", s), std::log(4.0), 1e-15);
  EXPECT_NEAR(idf("unseen", s), 1.3863, 1e-4);

  CorpusStats all;
  all.total_pairs = 4;
  all.pair_doc_freq["every"] = 4;
  EXPECT_EQ(idf("every", all), 0.0);
  EXPECT_THROW(idf("x", CorpusStats{}), EmptyCorpus);
}

TEST(Idf, MonotoneNonIncreasingInDocFreq) {
  CorpusStats s;
  s.total_pairs = 50;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t df = 0; df <= 50; ++df) {
    s.pair_doc_freq["t"] = df;
    double v = idf("t", s);
    EXPECT_LE(v, prev);
    EXPECT_GE(v, 0.0);
    prev = v;
  }
}

TEST(TfIdfVector, SingleTermProduct) {
  // tf(x) = 1 / |{x, y}| = 0.5 and idf(x) = ln 2 in the four-pair corpus.
  CorpusStats s = build_stats(four_pairs());
  LabeledPair p = pair_of("x", "y");
  TfIdfVector v = tfidf_vector(p.a, p, s);
  ASSERT_EQ(v.weights.size(), 1u);
  EXPECT_NEAR(v.weights.at("x"), 0.5 * std::log(2.0), 1e-15);
  EXPECT_NEAR(v.weights.at("x"), 0.3466, 1e-4);
}

TEST(TfIdfVector, FlooredTermsOmitted) {
  CorpusStats s;
  s.total_pairs = 2;
  s.pair_doc_freq = {{"a", 2}, {"b", 2}};
  LabeledPair p = pair_of("a b", "a");
  EXPECT_TRUE(tfidf_vector(p.a, p, s).weights.empty());
  EXPECT_EQ(tfidf_score(p, s), 0.0);
}

TEST(TfIdfVector, DisjointSentencesDisjointSupport) {
  CorpusStats s = build_stats(four_pairs());
  LabeledPair p = pair_of("m n", "o q");
  auto u = tfidf_vector(p.a, p, s);
  auto v = tfidf_vector(p.b, p, s);
  for (const auto& [t, w] : u.weights) EXPECT_FALSE(v.weights.contains(t));
  EXPECT_EQ(cosine_sim(u, v), 0.0);
}

TEST(Cosine, HandValues) {
  TfIdfVector u{{{"a", 1.0}, {"b", 1.0}}};
  TfIdfVector v{{{"a", 1.0}}};
  EXPECT_NEAR(cosine_sim(u, v), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(cosine_sim(u, u), 1.0);
  EXPECT_EQ(cosine_sim(u, TfIdfVector{}), 0.0);
}

TEST(Cosine, SymmetricAndBounded) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> w(0.01, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    TfIdfVector u, v;
    for (int t = 0; t < 6; ++t) {
      if (rng() % 2) u.weights["t" + std::to_string(t)] = w(rng);
      if (rng() % 2) v.weights["t" + std::to_string(t)] = w(rng);
    }
    double uv = cosine_sim(u, v);
    EXPECT_EQ(uv, cosine_sim(v, u));
    EXPECT_GE(uv, 0.0);
    EXPECT_LE(uv, 1.0);
  }
}

TEST(TfIdfScore, IdenticalSentencesScoreOne) {
  CorpusStats s = build_stats(four_pairs());
  EXPECT_EQ(tfidf_score(pair_of("ant credit pay", "ant credit pay"), s), 1.0);
}

TEST(StatsFile, RoundTripAndErrors) {
  CorpusStats s = build_stats(four_pairs());
  std::stringstream buf;
  write_stats(buf, s);
  EXPECT_EQ(buf.str().substr(0, 15), "#total_pairs=4\n");
  EXPECT_EQ(read_stats(buf), s);

  std::istringstream missing("a\t1\n");
  EXPECT_THROW(read_stats(missing), FormatError);
  std::istringstream too_big("#total_pairs=1\na\t3\n");
  EXPECT_THROW(read_stats(too_big), FormatError);
}

}  // namespace
}  // namespace simfuse
