#include "simfuse/attention.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "simfuse/error.hpp"
#include "simfuse/jaccard.hpp"
#include "simfuse/kernels.hpp"

namespace simfuse {
namespace {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      ok = (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    }
    if (!ok) {
      out.push_back(0x110000u + c);  // outside Unicode, so never equal to a decoded code point
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? c : c & (0x7F >> len);
    for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += len;
  }
  return out;
}

Sentence prefix(const Sentence& s, std::size_t n) {
  if (s.length() <= n) return s;
  Sentence out;
  out.tokens.assign(s.tokens.begin(), s.tokens.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

}  // namespace

SimilarityGrid cosine_matrix(const SentenceMatrix& a, const SentenceMatrix& b) {
  if (a.dim != b.dim) throw DimensionError("cosine_matrix: dimension mismatch");
  if (a.true_length == 0 || b.true_length == 0) throw DimensionError("cosine_matrix: empty sentence");

  SimilarityGrid g;
  g.n = a.true_length;
  g.m = b.true_length;
  g.values.assign(g.n * g.m, 0.0);

  std::vector<double> norm_b(g.m);
  for (std::size_t j = 0; j < g.m; ++j) norm_b[j] = kernels::dot(b.row(j), b.row(j));
  for (std::size_t i = 0; i < g.n; ++i) {
    double norm_a = kernels::dot(a.row(i), a.row(i));
    for (std::size_t j = 0; j < g.m; ++j) {
      if (norm_a == 0.0 || norm_b[j] == 0.0) continue;
      double c = kernels::dot(a.row(i), b.row(j)) / std::sqrt(norm_a * norm_b[j]);
      g.values[i * g.m + j] = std::clamp(c, -1.0, 1.0);
    }
  }
  return g;
}

std::pair<std::vector<double>, std::vector<double>> marginal_sums(const SimilarityGrid& g) {
  std::vector<double> row(g.n, 0.0);
  std::vector<double> col(g.m, 0.0);
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = 0; j < g.m; ++j) {
      row[i] += g.at(i, j);
      col[j] += g.at(i, j);
    }
  }
  return {std::move(row), std::move(col)};
}

std::size_t edit_distance(std::string_view u, std::string_view v) {
  std::u32string a = decode_utf8(u);
  std::u32string b = decode_utf8(v);
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::pair<std::vector<double>, std::vector<double>> position_weights(const Sentence& a,
                                                                     const Sentence& b) {
  const std::size_t n = a.length();
  const std::size_t m = b.length();
  std::vector<double> pos_row(n, 0.0);
  std::vector<double> pos_col(m, 0.0);
  if (n == 0 || m == 0) return {std::move(pos_row), std::move(pos_col)};

  const double shorter = static_cast<double>(std::min(n, m));
  auto first_index = [](const Sentence& s, std::string_view w) {
    for (std::size_t i = 0; i < s.length(); ++i) {
      if (s.tokens[i].surface == w) return i;
    }
    return s.length();
  };
  for (const std::string& c : co_occurrence(a, b).words) {
    std::size_t p = first_index(a, c);
    if (p < m) pos_row[p] = 2.0 * static_cast<double>(edit_distance(c, b.tokens[p].surface)) / shorter;
    std::size_t q = first_index(b, c);
    if (q < n) pos_col[q] = 2.0 * static_cast<double>(edit_distance(c, a.tokens[q].surface)) / shorter;
  }
  return {std::move(pos_row), std::move(pos_col)};
}

std::vector<double> softmax(std::span<const double> x) {
  std::vector<double> out(x.size());
  if (x.empty()) return out;
  const double peak = *std::max_element(x.begin(), x.end());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::exp(x[i] - peak);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

AttentionVectors attention_weights(std::span<const double> row_vec, std::span<const double> pos_row,
                                   std::span<const double> col_vec, std::span<const double> pos_col) {
  if (row_vec.size() != pos_row.size() || col_vec.size() != pos_col.size()) {
    throw DimensionError("attention_weights: length mismatch");
  }
  std::vector<double> row(row_vec.begin(), row_vec.end());
  std::vector<double> col(col_vec.begin(), col_vec.end());
  for (std::size_t i = 0; i < row.size(); ++i) row[i] += pos_row[i];
  for (std::size_t j = 0; j < col.size(); ++j) col[j] += pos_col[j];
  return {softmax(row), softmax(col)};
}

SentenceMatrix apply_attention(const SentenceMatrix& m, std::span<const double> weights) {
  if (weights.size() != m.true_length) throw DimensionError("apply_attention: weight length mismatch");
  SentenceMatrix out(m.dim, m.n_max);
  out.true_length = m.true_length;
  out.mask = m.mask;
  for (std::size_t i = 0; i < m.true_length; ++i) kernels::scale(weights[i], m.row(i), out.row(i));
  return out;
}

AttendedPair attend(const EmbeddingTable& table, const Sentence& a, const Sentence& b,
                    std::size_t n_max) {
  const Sentence ta = prefix(a, n_max);
  const Sentence tb = prefix(b, n_max);
  SentenceMatrix ma = embed_sentence(table, ta, n_max);
  SentenceMatrix mb = embed_sentence(table, tb, n_max);
  auto [row_vec, col_vec] = marginal_sums(cosine_matrix(ma, mb));
  auto [pos_row, pos_col] = position_weights(ta, tb);
  AttentionVectors w = attention_weights(row_vec, pos_row, col_vec, pos_col);
  SentenceMatrix wa = apply_attention(ma, w.row_weights);
  SentenceMatrix wb = apply_attention(mb, w.col_weights);
  return {std::move(wa), std::move(wb), std::move(w)};
}

}  // namespace simfuse
