#include "simfuse/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>

#include "simfuse/error.hpp"
#include "simfuse/text_io.hpp"

namespace simfuse {
namespace {

// FNV-1a; fixed so OOV vectors do not depend on the standard library's hash.
std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ (seed * 0x9e3779b97f4a7c15ULL);
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim, std::uint64_t oov_seed)
    : dim_(dim), oov_seed_(oov_seed) {
  if (dim == 0) throw DimensionError("embedding dimension must be at least 1");
}

void EmbeddingTable::insert(std::string surface, std::vector<double> vec) {
  if (vec.size() != dim_) {
    throw DimensionError("vector for '" + surface + "' has " + std::to_string(vec.size()) +
                         " components, expected " + std::to_string(dim_));
  }
  vectors_.insert_or_assign(std::move(surface), std::move(vec));
}

bool EmbeddingTable::contains(std::string_view surface) const {
  return vectors_.find(surface) != vectors_.end();
}

std::vector<double> EmbeddingTable::lookup(std::string_view surface) const {
  if (auto it = vectors_.find(surface); it != vectors_.end()) return it->second;

  // mt19937_64 output is fixed by the standard; the mapping to [-1, 1) is ours.
  std::mt19937_64 rng(fnv1a(surface, oov_seed_));
  std::vector<double> v(dim_);
  double norm2 = 0.0;
  while (norm2 == 0.0) {
    for (double& x : v) {
      x = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
      norm2 += x * x;
    }
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : v) x *= inv;
  return v;
}

std::vector<std::string> EmbeddingTable::surfaces() const {
  std::vector<std::string> out;
  out.reserve(vectors_.size());
  for (const auto& [k, v] : vectors_) out.push_back(k);
  std::sort(out.begin(), out.end());
  return out;
}

EmbeddingTable load_text_embeddings(std::istream& in, std::uint64_t oov_seed) {
  std::size_t dim = 0;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = text::split_ws(line);
    if (fields.empty()) continue;
    if (lineno == 1 && fields.size() == 2) {
      auto count = text::parse_int(fields[0]);
      auto d = text::parse_int(fields[1]);
      if (count && d) {
        if (*count < 0 || *d < 1) throw FormatError("bad header", lineno);
        dim = static_cast<std::size_t>(*d);
        continue;
      }
    }
    if (fields.size() < 2) throw FormatError("vector line needs a surface and components", lineno);
    std::size_t d = fields.size() - 1;
    if (dim == 0) dim = d;
    if (d != dim) {
      throw FormatError("expected " + std::to_string(dim) + " components, got " + std::to_string(d),
                        lineno);
    }
    std::vector<double> vec(d);
    for (std::size_t i = 0; i < d; ++i) {
      auto v = text::parse_double(fields[i + 1]);
      if (!v || !std::isfinite(*v)) {
        throw FormatError("non-numeric component '" + std::string(fields[i + 1]) + "'", lineno);
      }
      vec[i] = *v;
    }
    rows.emplace_back(std::string(fields[0]), std::move(vec));
  }
  if (dim == 0) throw FormatError("embedding file has no vectors and no header");
  EmbeddingTable table(dim, oov_seed);
  for (auto& [surface, vec] : rows) table.insert(std::move(surface), std::move(vec));
  return table;
}

void write_text_embeddings(std::ostream& out, const EmbeddingTable& table) {
  out << table.size() << ' ' << table.dim() << '\n';
  for (const std::string& s : table.surfaces()) {
    out << s;
    for (double x : table.lookup(s)) out << ' ' << text::exact17(x);
    out << '\n';
  }
}

SentenceMatrix::SentenceMatrix(std::size_t dim_, std::size_t n_max_)
    : dim(dim_), n_max(n_max_), data(dim_ * n_max_, 0.0), mask(n_max_, false) {}

SentenceMatrix embed_sentence(const EmbeddingTable& table, const Sentence& s, std::size_t n_max) {
  if (n_max == 0) throw DimensionError("n_max must be at least 1");
  SentenceMatrix m(table.dim(), n_max);
  m.true_length = std::min(s.length(), n_max);
  for (std::size_t i = 0; i < m.true_length; ++i) {
    std::vector<double> v = table.lookup(s.tokens[i].surface);
    std::copy(v.begin(), v.end(), m.row(i).begin());
    m.mask[i] = true;
  }
  return m;
}

}  // namespace simfuse
