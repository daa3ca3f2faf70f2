#pragma once

// TF-IDF cosine scorer. The IDF "document" is a sentence pair; the TF of a
// term is its count across both sentences over the size of their union.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "simfuse/corpus.hpp"

namespace simfuse {

struct CorpusStats {
  std::size_t total_pairs = 0;
  // Ordered so that serialization is deterministic.
  std::map<std::string, std::size_t, std::less<>> pair_doc_freq;

  std::size_t doc_freq(std::string_view term) const;
  bool operator==(const CorpusStats&) const = default;
};

struct TfIdfVector {
  std::map<std::string, double, std::less<>> weights;
};

// Throws EmptyCorpus on an empty dataset.
CorpusStats build_stats(const Dataset& dataset);

double term_frequency(std::string_view term, const LabeledPair& pair);

// max(0, ln(total_pairs / (1 + doc_freq))). Throws EmptyCorpus if total_pairs == 0.
double idf(std::string_view term, const CorpusStats& stats);

TfIdfVector tfidf_vector(const Sentence& s, const LabeledPair& pair, const CorpusStats& stats);

// Cosine of two non-negative sparse vectors; 0 when either is empty.
double cosine_sim(const TfIdfVector& u, const TfIdfVector& v);

double tfidf_score(const LabeledPair& pair, const CorpusStats& stats);

// `#total_pairs=N` header, then `term<TAB>doc_freq` lines.
void write_stats(std::ostream& out, const CorpusStats& stats);
CorpusStats read_stats(std::istream& in);

}  // namespace simfuse
