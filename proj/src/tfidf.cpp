#include "simfuse/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "simfuse/error.hpp"
#include "simfuse/text_io.hpp"

namespace simfuse {

std::size_t CorpusStats::doc_freq(std::string_view term) const {
  auto it = pair_doc_freq.find(term);
  return it == pair_doc_freq.end() ? 0 : it->second;
}

CorpusStats build_stats(const Dataset& dataset) {
  if (dataset.empty()) throw EmptyCorpus();
  CorpusStats stats;
  stats.total_pairs = dataset.size();
  for (const LabeledPair& p : dataset.pairs) {
    std::set<std::string_view> seen;
    for (const Token& t : p.a.tokens) seen.insert(t.surface);
    for (const Token& t : p.b.tokens) seen.insert(t.surface);
    for (std::string_view term : seen) {
      auto it = stats.pair_doc_freq.find(term);
      if (it == stats.pair_doc_freq.end()) {
        stats.pair_doc_freq.emplace(std::string(term), 1);
      } else {
        ++it->second;
      }
    }
  }
  return stats;
}

double term_frequency(std::string_view term, const LabeledPair& pair) {
  std::set<std::string_view> uni;
  std::size_t count = 0;
  for (const Sentence* s : {&pair.a, &pair.b}) {
    for (const Token& t : s->tokens) {
      uni.insert(t.surface);
      if (t.surface == term) ++count;
    }
  }
  if (uni.empty()) return 0.0;
  return static_cast<double>(count) / static_cast<double>(uni.size());
}

double idf(std::string_view term, const CorpusStats& stats) {
  if (stats.total_pairs == 0) throw EmptyCorpus();
  double ratio = static_cast<double>(stats.total_pairs) /
                 (1.0 + static_cast<double>(stats.doc_freq(term)));
  return std::max(0.0, std::log(ratio));
}

TfIdfVector tfidf_vector(const Sentence& s, const LabeledPair& pair, const CorpusStats& stats) {
  TfIdfVector v;
  for (const Token& t : s.tokens) {
    if (v.weights.contains(t.surface)) continue;
    double w = term_frequency(t.surface, pair) * idf(t.surface, stats);
    if (w > 0.0) v.weights.emplace(t.surface, w);
  }
  return v;
}

double cosine_sim(const TfIdfVector& u, const TfIdfVector& v) {
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (const auto& [term, w] : u.weights) {
    nu += w * w;
    auto it = v.weights.find(term);
    if (it != v.weights.end()) dot += w * it->second;
  }
  for (const auto& [term, w] : v.weights) nv += w * w;
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(nu * nv), 0.0, 1.0);
}

double tfidf_score(const LabeledPair& pair, const CorpusStats& stats) {
  return cosine_sim(tfidf_vector(pair.a, pair, stats), tfidf_vector(pair.b, pair, stats));
}

void write_stats(std::ostream& out, const CorpusStats& stats) {
  out << "#total_pairs=" << stats.total_pairs << '\n';
  for (const auto& [term, df] : stats.pair_doc_freq) out << term << '\t' << df << '\n';
}

CorpusStats read_stats(std::istream& in) {
  CorpusStats stats;
  bool have_total = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = text::chomp(line);
    if (view.empty()) continue;
    constexpr std::string_view kHeader = "#total_pairs=";
    if (view.starts_with(kHeader)) {
      auto n = text::parse_int(view.substr(kHeader.size()));
      if (!n || *n < 0) throw FormatError("bad total_pairs header", lineno);
      stats.total_pairs = static_cast<std::size_t>(*n);
      have_total = true;
      continue;
    }
    if (view.front() == '#') continue;
    auto cols = text::split(view, '\t');
    if (cols.size() != 2) throw FormatError("expected term<TAB>doc_freq", lineno);
    auto df = text::parse_int(cols[1]);
    if (!df || *df < 0) throw FormatError("bad document frequency", lineno);
    stats.pair_doc_freq[std::string(cols[0])] = static_cast<std::size_t>(*df);
  }
  if (!have_total) throw FormatError("missing #total_pairs header");
  for (const auto& [term, df] : stats.pair_doc_freq) {
    if (df > stats.total_pairs) throw FormatError("doc_freq of '" + term + "' exceeds total_pairs");
  }
  return stats;
}

}  // namespace simfuse
