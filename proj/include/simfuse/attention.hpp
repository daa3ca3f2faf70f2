#pragma once

// Multi-feature attention over a sentence pair: cross-sentence cosine grid,
// its row/column sums, an edit-distance position term at co-occurrence
// positions, and a softmax that reweights each sentence's token rows.

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "simfuse/corpus.hpp"
#include "simfuse/embedding.hpp"

namespace simfuse {

struct SimilarityGrid {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> values;  // n x m, row-major

  double at(std::size_t i, std::size_t j) const { return values[i * m + j]; }
};

struct AttentionVectors {
  std::vector<double> row_weights;
  std::vector<double> col_weights;
};

// Cosines between the true-token rows of A and B; a zero-norm row gives 0.
// Throws DimensionError on mismatched widths or an empty matrix.
SimilarityGrid cosine_matrix(const SentenceMatrix& a, const SentenceMatrix& b);

std::pair<std::vector<double>, std::vector<double>> marginal_sums(const SimilarityGrid& g);

// Unit-cost Levenshtein distance over Unicode code points (UTF-8 input;
// stray bytes count as one unit each).
std::size_t edit_distance(std::string_view u, std::string_view v);

// For each co-occurring word c with first index p in a (resp. q in b), when
// p < len(b): pos_row[p] = 2 * edit_distance(c, b[p]) / min(n, m); and
// symmetrically for pos_col. All other entries are 0.
std::pair<std::vector<double>, std::vector<double>> position_weights(const Sentence& a,
                                                                     const Sentence& b);

// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> x);

AttentionVectors attention_weights(std::span<const double> row_vec, std::span<const double> pos_row,
                                   std::span<const double> col_vec, std::span<const double> pos_col);

// Scales true-token row i by weights[i]; padding stays zero.
// Throws DimensionError if weights.size() != true_length.
SentenceMatrix apply_attention(const SentenceMatrix& m, std::span<const double> weights);

struct AttendedPair {
  SentenceMatrix a;
  SentenceMatrix b;
  AttentionVectors weights;
};

// Full chain for one pair. Sentences are truncated to n_max before any step so
// that the position term and the matrices agree on length.
AttendedPair attend(const EmbeddingTable& table, const Sentence& a, const Sentence& b,
                    std::size_t n_max = kDefaultMaxTokens);

}  // namespace simfuse
