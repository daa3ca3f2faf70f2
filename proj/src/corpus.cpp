#include "simfuse/corpus.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <ostream>

#include "simfuse/error.hpp"
#include "simfuse/text_io.hpp"

namespace simfuse {
namespace {

constexpr std::array<std::string_view, 7> kRoleNames{"SUBJ", "PRED", "OBJ", "ATTR",
                                                     "ADV",  "COMP", "NONE"};

bool is_punct(char c) {
  switch (c) {
    case '.': case ',': case '!': case '?': case ';': case ':':
    case '\'': case '"': case '(': case ')':
      return true;
    default:
      return false;
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool tag_is(const std::optional<std::string>& pos, std::string_view tag) {
  if (!pos || pos->size() != tag.size()) return false;
  return lower(*pos) == lower(tag);
}

}  // namespace

std::string_view to_string(Role role) { return kRoleNames[static_cast<std::size_t>(role)]; }

std::optional<Role> parse_role(std::string_view s) {
  for (std::size_t i = 0; i < kRoleNames.size(); ++i) {
    if (kRoleNames[i] == s) return static_cast<Role>(i);
  }
  return std::nullopt;
}

std::optional<LabelConvention> parse_label_convention(std::string_view s) {
  if (s == "one_is_similar") return LabelConvention::OneIsSimilar;
  if (s == "zero_is_similar") return LabelConvention::ZeroIsSimilar;
  return std::nullopt;
}

bool Sentence::annotated() const {
  for (const Token& t : tokens) {
    if (t.pos || t.role) return true;
  }
  return false;
}

Sentence tokenize(std::string_view raw) {
  Sentence s;
  for (std::string_view chunk : text::split_ws(raw)) {
    std::size_t lead = 0;
    while (lead < chunk.size() && is_punct(chunk[lead])) ++lead;
    if (lead == chunk.size()) {
      s.tokens.push_back({std::string(chunk), std::nullopt, std::nullopt});
      continue;
    }
    std::size_t tail = chunk.size();
    while (tail > lead && is_punct(chunk[tail - 1])) --tail;
    if (lead > 0) s.tokens.push_back({std::string(chunk.substr(0, lead)), std::nullopt, std::nullopt});
    s.tokens.push_back({lower(chunk.substr(lead, tail - lead)), std::nullopt, std::nullopt});
    if (tail < chunk.size()) s.tokens.push_back({std::string(chunk.substr(tail)), std::nullopt, std::nullopt});
  }
  if (s.tokens.empty()) throw EmptySentence();
  return s;
}

Sentence parse_annotated(std::string_view raw) {
  Sentence s;
  for (std::string_view chunk : text::split_ws(raw)) {
    auto fields = text::split(chunk, '|');
    if (fields.size() != 3) {
      throw FormatError("annotated token '" + std::string(chunk) + "' needs 3 '|' fields");
    }
    if (fields[0].empty()) throw FormatError("annotated token with empty surface");
    Token tok{std::string(fields[0]), std::nullopt, std::nullopt};
    if (fields[1] != "_" && !fields[1].empty()) tok.pos = std::string(fields[1]);
    if (fields[2] != "_" && !fields[2].empty()) {
      tok.role = parse_role(fields[2]);
      if (!tok.role) throw FormatError("unknown role '" + std::string(fields[2]) + "'");
    }
    s.tokens.push_back(std::move(tok));
  }
  if (s.tokens.empty()) throw EmptySentence();
  return s;
}

Sentence parse_sentence(std::string_view raw) {
  return raw.find('|') != std::string_view::npos ? parse_annotated(raw) : tokenize(raw);
}

Sentence assign_roles_heuristic(Sentence s) {
  const std::size_t n = s.tokens.size();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t pred = kNone;
  std::size_t subj = kNone;
  for (std::size_t i = 0; i < n && pred == kNone; ++i) {
    if (tag_is(s.tokens[i].pos, "VERB")) pred = i;
  }
  for (std::size_t i = 0; i < n && subj == kNone; ++i) {
    if (tag_is(s.tokens[i].pos, "NOUN")) subj = i;
  }
  if (subj == kNone) {
    for (std::size_t i = 0; i < n && subj == kNone; ++i) {
      if (i != pred) subj = i;
    }
  }
  std::size_t obj = kNone;
  if (pred != kNone) {
    for (std::size_t i = pred + 1; i < n && obj == kNone; ++i) {
      if (i != subj && tag_is(s.tokens[i].pos, "NOUN")) obj = i;
    }
  }

  auto present = [&](Role r) {
    for (const Token& t : s.tokens) {
      if (t.role == r) return true;
    }
    return false;
  };
  auto place = [&](Role r, std::size_t idx) {
    if (idx == kNone || s.tokens[idx].role || present(r)) return;
    s.tokens[idx].role = r;
  };
  place(Role::Subj, subj);
  place(Role::Pred, pred);
  place(Role::Obj, obj);
  for (Token& t : s.tokens) {
    if (!t.role) t.role = Role::None;
  }
  return s;
}

std::string format_sentence(const Sentence& s) {
  std::string joined;
  bool plain = !s.annotated();
  for (const Token& t : s.tokens) {
    if (!joined.empty()) joined += ' ';
    joined += t.surface;
    if (t.surface.find('|') != std::string::npos) plain = false;
  }
  if (plain) {
    try {
      if (tokenize(joined) == s) return joined;
    } catch (const EmptySentence&) {
    }
  }
  std::string out;
  for (const Token& t : s.tokens) {
    if (!out.empty()) out += ' ';
    out += t.surface;
    out += '|';
    out += t.pos ? *t.pos : "_";
    out += '|';
    out += t.role ? to_string(*t.role) : "_";
  }
  return out;
}

Dataset parse_pair_file(std::istream& in, LabelKind kind, LabelConvention convention) {
  Dataset d;
  d.label_kind = kind;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = text::chomp(line);
    if (text::trim(view).empty() || view.front() == '#') continue;

    auto cols = text::split(view, '\t');
    if (cols.size() != 4) {
      throw FormatError("expected 4 tab-separated columns, got " + std::to_string(cols.size()),
                        lineno);
    }
    LabeledPair pair;
    pair.id = std::string(cols[0]);
    try {
      pair.a = parse_sentence(cols[1]);
      pair.b = parse_sentence(cols[2]);
    } catch (const FormatError& e) {
      throw FormatError(e.what(), lineno);
    } catch (const EmptySentence& e) {
      throw FormatError(e.what(), lineno);
    }

    auto value = text::parse_double(text::trim(cols[3]));
    if (!value || !std::isfinite(*value)) {
      throw FormatError("unparseable label '" + std::string(cols[3]) + "'", lineno);
    }
    if (kind == LabelKind::Binary) {
      if (*value != 0.0 && *value != 1.0) {
        throw FormatError("binary label must be 0 or 1", lineno);
      }
      bool one = *value == 1.0;
      bool similar = convention == LabelConvention::OneIsSimilar ? one : !one;
      pair.label = similar ? 1.0 : 0.0;
    } else {
      if (*value < 0.0 || *value > 5.0) {
        throw FormatError("graded label outside [0,5]", lineno);
      }
      pair.label = *value;
    }
    d.pairs.push_back(std::move(pair));
  }
  return d;
}

void write_pair_file(std::ostream& out, const Dataset& dataset, LabelConvention convention) {
  for (const LabeledPair& p : dataset.pairs) {
    out << p.id << '\t' << format_sentence(p.a) << '\t' << format_sentence(p.b) << '\t';
    if (dataset.label_kind == LabelKind::Binary) {
      bool one = convention == LabelConvention::OneIsSimilar ? p.similar() : !p.similar();
      out << (one ? '1' : '0');
    } else {
      out << text::shortest(p.label);
    }
    out << '\n';
  }
}

}  // namespace simfuse
