#include "onto/verbalize.hpp"

#include <cctype>

namespace onto {

namespace {

bool isUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool isLower(char c) { return c >= 'a' && c <= 'z'; }
bool isDigit(char c) { return c >= '0' && c <= '9'; }
bool isLetter(char c) { return isUpper(c) || isLower(c); }

std::string toLower(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (isUpper(c)) c = static_cast<char>(c - 'A' + 'a');
  return out;
}

// All-caps tokens of length >= 2 are treated as acronyms (UK, LCAC) and
// survive lowercasing.
bool isAcronym(const std::string& seg) {
  if (seg.size() < 2) return false;
  size_t uppers = 0;
  for (char c : seg) {
    if (isLower(c)) return false;
    if (isUpper(c)) ++uppers;
  }
  return uppers >= 2;
}

std::string renderSegment(const std::string& seg, CaseStyle style) {
  if (style == CaseStyle::Description)
    return isAcronym(seg) ? seg : toLower(seg);
  // Statement style keeps the name's own casing. Lone letters read as
  // schematic variables, not proper nouns, so they are folded.
  if (seg.size() == 1 && isLetter(seg[0])) return toLower(seg);
  return seg;
}

std::string joinSegments(const std::vector<std::string>& segments,
                         CaseStyle style) {
  std::string out;
  for (const std::string& seg : segments) {
    if (!out.empty()) out += ' ';
    out += renderSegment(seg, style);
  }
  return out;
}

// Role phrase such as "has color" or "located in". Verb-like role heads
// ("has", "lives", "owns", ...) get a "that" in front when attached to a
// noun; participles ("located", "made") attach bare.
std::string rolePhrase(const std::string& role, bool* wantsThat) {
  std::vector<std::string> segments = split_name(role);
  std::string first = segments.empty() ? "" : toLower(segments.front());
  *wantsThat = first == "has" || (!first.empty() && first.back() == 's');
  return joinSegments(segments, CaseStyle::Description);
}

std::string verbalizeConcept(const ConceptPtr& c,
                             const VerbalizerOptions& opt);

// "that has color red" / "located in Sauterne Region"; prefixed to a head
// noun or to "something".
std::string attachedExistential(const ConceptPtr& c,
                                const VerbalizerOptions& opt) {
  bool wantsThat = false;
  std::string phrase = rolePhrase(c->name(), &wantsThat);
  std::string out = wantsThat ? "that " + phrase : phrase;
  return out + " " + verbalizeConcept(c->filler(), opt);
}

std::string verbalizeConcept(const ConceptPtr& c,
                             const VerbalizerOptions& opt) {
  switch (c->kind()) {
    case Concept::Kind::Atomic:
      return verbalize_name(c->name(), opt.style);
    case Concept::Kind::Bottom:
      return opt.lowercaseContradiction ? "contradiction" : "Contradiction";
    case Concept::Kind::Existential:
      return "something " + attachedExistential(c, opt);
    case Concept::Kind::Conjunction: {
      std::string out;
      bool first = true;
      for (const auto& part : c->displayParts()) {
        if (first) {
          out = part->is(Concept::Kind::Existential)
                    ? "something " + attachedExistential(part, opt)
                    : verbalizeConcept(part, opt);
          first = false;
        } else if (part->is(Concept::Kind::Existential)) {
          out += " " + attachedExistential(part, opt);
        } else {
          out += " and " + verbalizeConcept(part, opt);
        }
      }
      return out;
    }
    case Concept::Kind::Placeholder:
      return "?" + c->name();
  }
  return "";
}

}  // namespace

std::vector<std::string> split_name(const std::string& name) {
  std::vector<std::string> segments;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      segments.push_back(current);
      current.clear();
    }
  };
  for (size_t i = 0; i < name.size(); ++i) {
    char c = name[i];
    if (c == '_') {
      flush();
      continue;
    }
    if (!current.empty()) {
      char prev = current.back();
      bool boundary =
          (isLower(prev) && isUpper(c)) || (isLetter(prev) && isDigit(c)) ||
          (isDigit(prev) && isLetter(c)) ||
          // acronym followed by a word: "UKScientist" splits before "S"
          (isUpper(prev) && isUpper(c) && i + 1 < name.size() &&
           isLower(name[i + 1]));
      if (boundary) flush();
    }
    current += c;
  }
  flush();
  return segments;
}

std::string verbalize_name(const std::string& name, CaseStyle style) {
  return joinSegments(split_name(name), style);
}

std::string verbalize_concept(const ConceptPtr& c,
                              const VerbalizerOptions& options) {
  return verbalizeConcept(c, options);
}

Verbalization verbalize_rule(const Rule& rule,
                             const VerbalizerOptions& options) {
  Verbalization v;
  v.bodyText = verbalizeConcept(rule.body(), options);
  v.headText = verbalizeConcept(rule.head(), options);
  v.statement = v.bodyText + " implies " + v.headText;
  return v;
}

}  // namespace onto
