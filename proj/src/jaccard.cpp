#include "simfuse/jaccard.hpp"

#include <algorithm>
#include <set>
#include <string_view>
#include <unordered_map>

#include "simfuse/error.hpp"

namespace simfuse {
namespace {

std::unordered_map<std::string_view, std::optional<Role>> first_roles(const Sentence& s) {
  std::unordered_map<std::string_view, std::optional<Role>> out;
  for (const Token& t : s.tokens) out.try_emplace(t.surface, t.role);
  return out;
}

}  // namespace

CoOccurrence co_occurrence(const Sentence& a, const Sentence& b) {
  CoOccurrence c;
  auto roles_a = first_roles(a);
  auto roles_b = first_roles(b);
  std::set<std::string_view> emitted;
  for (const Token& t : a.tokens) {
    auto hit = roles_b.find(t.surface);
    if (hit == roles_b.end() || !emitted.insert(t.surface).second) continue;
    c.words.push_back(t.surface);
    c.roles.emplace_back(roles_a.at(t.surface), hit->second);
  }
  return c;
}

double component_weight(const CoOccurrence& c) {
  if (c.size() < 3) return 1.0;
  std::size_t count = 0;
  for (const auto& [ra, rb] : c.roles) {
    if (ra && rb && *ra == *rb && *ra != Role::None) ++count;
  }
  if (count == 0) return 1.0;
  return static_cast<double>(count + 1) / static_cast<double>(count);
}

JaccardScore jaccard_detail(const Sentence& a, const Sentence& b) {
  if (a.tokens.empty() || b.tokens.empty()) throw EmptySentence();
  std::set<std::string_view> uni;
  for (const Token& t : a.tokens) uni.insert(t.surface);
  for (const Token& t : b.tokens) uni.insert(t.surface);
  CoOccurrence c = co_occurrence(a, b);

  JaccardScore s;
  s.alpha = component_weight(c);
  s.raw = s.alpha * static_cast<double>(c.size()) / static_cast<double>(uni.size());
  s.clamped = std::clamp(s.raw, 0.0, 1.0);
  return s;
}

}  // namespace simfuse
