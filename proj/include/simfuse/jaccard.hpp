#pragma once

// Jaccard coefficient over distinct surfaces, scaled by a weight that rewards
// co-occurring words playing the same grammatical role in both sentences.

#include <optional>
#include <string>
#include <vector>

#include "simfuse/corpus.hpp"

namespace simfuse {

struct CoOccurrence {
  // Distinct shared surfaces, in order of first appearance in the first sentence.
  std::vector<std::string> words;
  // Role of each word at its first occurrence in (a, b).
  std::vector<std::pair<std::optional<Role>, std::optional<Role>>> roles;

  std::size_t size() const { return words.size(); }
};

CoOccurrence co_occurrence(const Sentence& a, const Sentence& b);

// 1 when fewer than three words co-occur or none share a role; otherwise
// (count + 1) / count where count is the number of shared-role words.
// NONE and absent roles never match.
double component_weight(const CoOccurrence& c);

struct JaccardScore {
  double alpha = 1.0;
  double raw = 0.0;      // alpha * |A ∩ B| / |A ∪ B|, may exceed 1
  double clamped = 0.0;  // raw clamped to [0, 1]
};

JaccardScore jaccard_detail(const Sentence& a, const Sentence& b);

inline double jaccard_score(const Sentence& a, const Sentence& b) {
  return jaccard_detail(a, b).clamped;
}

}  // namespace simfuse
