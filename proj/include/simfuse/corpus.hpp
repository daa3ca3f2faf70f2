#pragma once

// Sentence-pair datasets: tokens with optional part-of-speech and
// grammatical-role annotations, and the tab-separated pair file format.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace simfuse {

enum class Role { Subj, Pred, Obj, Attr, Adv, Comp, None };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view s);

struct Token {
  std::string surface;
  std::optional<std::string> pos;
  std::optional<Role> role;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t length() const { return tokens.size(); }
  bool annotated() const;
  bool operator==(const Sentence&) const = default;
};

enum class LabelKind { Binary, Graded };

// How a binary label column maps onto "similar". The pair-file readers
// normalize labels so that in memory 1.0 always means similar.
enum class LabelConvention { OneIsSimilar, ZeroIsSimilar };

std::optional<LabelConvention> parse_label_convention(std::string_view s);

struct LabeledPair {
  std::string id;
  Sentence a;
  Sentence b;
  // Binary: 1.0 similar, 0.0 different. Graded: gold score in [0, 5].
  double label = 0.0;

  // Meaningful for binary datasets only.
  bool similar() const { return label >= 0.5; }
  bool operator==(const LabeledPair&) const = default;
};

struct Dataset {
  LabelKind label_kind = LabelKind::Binary;
  std::vector<LabeledPair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  bool operator==(const Dataset&) const = default;
};

// Whitespace split, then leading/trailing punctuation runs (.,!?;:'"()) are
// peeled off as their own tokens. Surfaces are lowercased (ASCII).
// Throws EmptySentence on blank input.
Sentence tokenize(std::string_view raw);

// `surface|POS|ROLE` tokens, `_` for an absent field. Throws FormatError.
Sentence parse_annotated(std::string_view raw);

// Raw or annotated, detected by the presence of '|'.
Sentence parse_sentence(std::string_view raw);

// Fills missing roles: first NOUN (else first token) is SUBJ, first VERB is
// PRED, first NOUN after the PRED is OBJ, everything else NONE. Existing roles
// are kept and a role already present is never assigned a second time.
Sentence assign_roles_heuristic(Sentence s);

// Reads `id<TAB>sentence1<TAB>sentence2<TAB>label` lines; blank lines and
// lines starting with '#' are skipped. Throws FormatError with the line number.
Dataset parse_pair_file(std::istream& in, LabelKind kind,
                        LabelConvention convention = LabelConvention::OneIsSimilar);

void write_pair_file(std::ostream& out, const Dataset& dataset,
                     LabelConvention convention = LabelConvention::OneIsSimilar);

// Inverse of parse_sentence for sentences it produced.
std::string format_sentence(const Sentence& s);

}  // namespace simfuse
