#pragma once

// Word vectors in the word2vec text format and padded sentence matrices.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "simfuse/corpus.hpp"

namespace simfuse {

class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim, std::uint64_t oov_seed = 0);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  std::uint64_t oov_seed() const { return oov_seed_; }
  void set_oov_seed(std::uint64_t seed) { oov_seed_ = seed; }

  // Replaces any existing vector for the surface. Throws DimensionError.
  void insert(std::string surface, std::vector<double> vec);
  bool contains(std::string_view surface) const;

  // Stored vector, or a unit-norm vector derived from (surface, oov_seed).
  std::vector<double> lookup(std::string_view surface) const;

  // Surfaces in sorted order.
  std::vector<std::string> surfaces() const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::size_t dim_;
  std::uint64_t oov_seed_;
  std::unordered_map<std::string, std::vector<double>, Hash, std::equal_to<>> vectors_;
};

// Optional `count dim` header; then `surface v1 ... vd` per line. The header
// count is not enforced. Duplicate surfaces: last one wins.
EmbeddingTable load_text_embeddings(std::istream& in, std::uint64_t oov_seed = 0);

// Header plus one line per vector in sorted surface order, 17 significant digits.
void write_text_embeddings(std::ostream& out, const EmbeddingTable& table);

// n_max rows of width dim, row-major. Rows past true_length are zero.
struct SentenceMatrix {
  std::size_t dim = 0;
  std::size_t n_max = 0;
  std::size_t true_length = 0;
  std::vector<double> data;
  std::vector<bool> mask;

  SentenceMatrix() = default;
  SentenceMatrix(std::size_t dim, std::size_t n_max);

  std::span<double> row(std::size_t i) { return {data.data() + i * dim, dim}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * dim, dim}; }
};

inline constexpr std::size_t kDefaultMaxTokens = 32;

// Prefix-truncates to n_max tokens. Throws DimensionError if n_max == 0.
SentenceMatrix embed_sentence(const EmbeddingTable& table, const Sentence& s,
                              std::size_t n_max = kDefaultMaxTokens);

}  // namespace simfuse
