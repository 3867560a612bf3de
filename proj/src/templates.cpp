#include "onto/templates.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "onto/parser.hpp"

namespace onto {

namespace {

size_t countAtomicOccurrences(const ConceptPtr& c) {
  switch (c->kind()) {
    case Concept::Kind::Atomic:
      return 1;
    case Concept::Kind::Conjunction: {
      size_t n = 0;
      for (const auto& p : c->parts()) n += countAtomicOccurrences(p);
      return n;
    }
    case Concept::Kind::Existential:
      return countAtomicOccurrences(c->filler());
    default:
      return 0;
  }
}

// Replaces occurrence positions posA/posB (rule-wide DFS indices) by the
// given placeholder concepts. posB < 0 means unary replacement.
Rule replaceOccurrences(const Rule& rule, long posA, const ConceptPtr& slotA,
                        long posB, const ConceptPtr& slotB,
                        std::string* nameA, std::string* nameB) {
  size_t counter = 0;
  auto replaceBoth = [&](const ConceptPtr& side) {
    // Both replacements happen in one walk so the DFS counter stays in sync.
    std::function<ConceptPtr(const ConceptPtr&)> walk =
        [&](const ConceptPtr& c) -> ConceptPtr {
      switch (c->kind()) {
        case Concept::Kind::Atomic: {
          size_t pos = counter++;
          if (static_cast<long>(pos) == posA) {
            *nameA = c->name();
            return slotA;
          }
          if (posB >= 0 && static_cast<long>(pos) == posB) {
            *nameB = c->name();
            return slotB;
          }
          return c;
        }
        case Concept::Kind::Conjunction: {
          std::vector<ConceptPtr> parts;
          parts.reserve(c->parts().size());
          for (const auto& p : c->parts()) parts.push_back(walk(p));
          return Concept::conjunction(std::move(parts));
        }
        case Concept::Kind::Existential:
          return Concept::existential(c->name(), walk(c->filler()));
        default:
          return c;
      }
    };
    return walk(side);
  };
  ConceptPtr body = replaceBoth(rule.body());
  ConceptPtr head = replaceBoth(rule.head());
  return Rule(std::move(body), std::move(head));
}

// True when ?X is encountered before ?Y in the canonical traversal of the
// pattern (body first, then head).
bool placeholderOrderOk(const Rule& pattern) {
  std::vector<std::string> labels;
  pattern.body()->collectPlaceholders(labels);
  pattern.head()->collectPlaceholders(labels);
  return !labels.empty() && labels.front() == "X";
}

const std::string kTrivialBinaryId = "?X SubClassOf ?Y";

}  // namespace

std::vector<UnaryExtraction> extract_unary(const Rule& rule) {
  size_t total =
      countAtomicOccurrences(rule.body()) + countAtomicOccurrences(rule.head());
  std::vector<UnaryExtraction> out;
  ConceptPtr slot = Concept::placeholder("X");
  for (size_t pos = 0; pos < total; ++pos) {
    std::string name, unusedB;
    Rule pattern = replaceOccurrences(rule, static_cast<long>(pos), slot, -1,
                                      nullptr, &name, &unusedB);
    out.push_back({std::move(pattern), std::move(name)});
  }
  return out;
}

std::vector<BinaryExtraction> extract_binary(
    const Rule& rule,
    const std::map<std::string, std::set<std::string>>& directParents) {
  std::vector<BinaryExtraction> out;
  if (rule.isAtomicSubsumption()) {
    // The only occurrence pair here is the trivial ?X SubClassOf ?Y; typed
    // templates over the direct parents replace it.
    const std::string& a = rule.body()->name();
    const std::string& b = rule.head()->name();
    auto ap = directParents.find(a);
    auto bp = directParents.find(b);
    if (ap == directParents.end() || bp == directParents.end()) return out;
    for (const std::string& aParent : ap->second)
      for (const std::string& bParent : bp->second) {
        Rule pattern(
            Concept::conjunction(
                {Concept::placeholder("X"), Concept::atomic(aParent)}),
            Concept::conjunction(
                {Concept::placeholder("Y"), Concept::atomic(bParent)}));
        TemplatePattern tmpl{pattern, TemplateKind::Binary, true, aParent,
                             bParent};
        out.push_back({std::move(tmpl), a, b});
      }
    return out;
  }

  size_t total =
      countAtomicOccurrences(rule.body()) + countAtomicOccurrences(rule.head());
  ConceptPtr slotX = Concept::placeholder("X");
  ConceptPtr slotY = Concept::placeholder("Y");
  std::set<std::pair<std::string, std::pair<std::string, std::string>>> seen;
  for (size_t i = 0; i < total; ++i) {
    for (size_t j = i + 1; j < total; ++j) {
      // Slot labels are fixed by canonical traversal order of the result,
      // so try both labelings and keep the ones that put ?X first.
      for (int flip = 0; flip < 2; ++flip) {
        std::string nameA, nameB;
        Rule pattern = replaceOccurrences(
            rule, static_cast<long>(i), flip ? slotY : slotX,
            static_cast<long>(j), flip ? slotX : slotY, &nameA, &nameB);
        if (pattern.id() == kTrivialBinaryId) continue;
        if (!placeholderOrderOk(pattern)) continue;
        std::string x = flip ? nameB : nameA;
        std::string y = flip ? nameA : nameB;
        if (!seen.insert({pattern.id(), {x, y}}).second) continue;
        TemplatePattern tmpl{pattern, TemplateKind::Binary, false, "", ""};
        out.push_back({std::move(tmpl), std::move(x), std::move(y)});
      }
    }
  }
  return out;
}

Rule instantiate_unary(const Rule& pattern, const std::string& x) {
  return pattern.substitute({{"X", Concept::atomic(x)}});
}

Rule instantiate_binary(const Rule& pattern, const std::string& x,
                        const std::string& y) {
  return pattern.substitute(
      {{"X", Concept::atomic(x)}, {"Y", Concept::atomic(y)}});
}

TemplateIndex TemplateIndex::build(const Ontology& training) {
  TemplateIndex index;
  index.parents_ = training.directParents();
  for (const auto& [id, rule] : training.rules()) {
    for (const UnaryExtraction& e : extract_unary(rule)) {
      auto [it, fresh] = index.unary_.try_emplace(
          e.pattern.id(),
          IndexedTemplate{{e.pattern, TemplateKind::Unary, false, "", ""}, 0});
      it->second.witnesses++;
      index.perConcept_[e.filler].insert({e.pattern.id(), 'X'});
    }
    if (rule.isAtomicSubsumption()) {
      auto extracted = extract_binary(rule, index.parents_);
      if (extracted.empty()) index.atomicRulesWithoutParents_++;
      for (const BinaryExtraction& e : extracted) {
        auto [it, fresh] =
            index.binary_.try_emplace(e.tmpl.id(), IndexedTemplate{e.tmpl, 0});
        it->second.witnesses++;
        if (e.tmpl.typed && !it->second.tmpl.typed) {
          it->second.tmpl.typed = true;
          it->second.tmpl.guardBody = e.tmpl.guardBody;
          it->second.tmpl.guardHead = e.tmpl.guardHead;
        }
        index.perConcept_[e.fillerX].insert({e.tmpl.id(), 'X'});
        index.perConcept_[e.fillerY].insert({e.tmpl.id(), 'Y'});
      }
    } else {
      for (const BinaryExtraction& e : extract_binary(rule, index.parents_)) {
        auto [it, fresh] =
            index.binary_.try_emplace(e.tmpl.id(), IndexedTemplate{e.tmpl, 0});
        it->second.witnesses++;
        index.perConcept_[e.fillerX].insert({e.tmpl.id(), 'X'});
        index.perConcept_[e.fillerY].insert({e.tmpl.id(), 'Y'});
      }
    }
  }
  return index;
}

std::vector<MatchedInstance> TemplateIndex::match(const Rule& candidate) const {
  std::set<MatchedInstance> out;
  std::set<std::string> atomSet = candidate.atoms();
  std::vector<std::string> atoms(atomSet.begin(), atomSet.end());

  // Substituted fillers always survive canonicalization, so any filler of a
  // matching instantiation must be an atom of the candidate itself.
  for (const auto& [id, entry] : unary_) {
    for (const std::string& x : atoms) {
      if (instantiate_unary(entry.tmpl.pattern, x) == candidate)
        out.insert({TemplateKind::Unary, id, {x}});
    }
  }
  for (const auto& [id, entry] : binary_) {
    for (const std::string& x : atoms)
      for (const std::string& y : atoms) {
        if (instantiate_binary(entry.tmpl.pattern, x, y) == candidate)
          out.insert({TemplateKind::Binary, id, {x, y}});
      }
  }
  if (candidate.isAtomicSubsumption()) {
    const std::string& c = candidate.body()->name();
    const std::string& d = candidate.head()->name();
    auto cp = parents_.find(c);
    auto dp = parents_.find(d);
    if (cp != parents_.end() && dp != parents_.end()) {
      for (const auto& [id, entry] : binary_) {
        if (!entry.tmpl.typed) continue;
        if (cp->second.count(entry.tmpl.guardBody) &&
            dp->second.count(entry.tmpl.guardHead))
          out.insert({TemplateKind::Binary, id, {c, d}});
      }
    }
  }
  return std::vector<MatchedInstance>(out.begin(), out.end());
}

void TemplateIndex::saveTsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write template file: " + path);
  out << "kind\tid\twitnesses\n";
  for (const auto& [id, entry] : unary_)
    out << "unary\t" << id << "\t" << entry.witnesses << "\n";
  for (const auto& [id, entry] : binary_)
    out << (entry.tmpl.typed ? "typed" : "binary") << "\t" << id << "\t"
        << entry.witnesses << "\n";
}

TemplateIndex TemplateIndex::loadTsv(const std::string& path,
                                     const Ontology& training) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open template file: " + path);
  TemplateIndex index;
  index.parents_ = training.directParents();
  std::string line;
  size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty() || line.rfind("kind\t", 0) == 0) continue;
    std::istringstream row(line);
    std::string kind, id, witnessText;
    if (!std::getline(row, kind, '\t') || !std::getline(row, id, '\t') ||
        !std::getline(row, witnessText, '\t'))
      throw std::runtime_error(path + ":" + std::to_string(lineNo) +
                               ": expected kind\\tid\\twitnesses");
    Rule pattern = parse_rule(id, /*allowPlaceholders=*/true);
    size_t witnesses = std::stoull(witnessText);
    if (kind == "unary") {
      index.unary_.insert_or_assign(
          id, IndexedTemplate{{pattern, TemplateKind::Unary, false, "", ""},
                              witnesses});
    } else if (kind == "binary" || kind == "typed") {
      TemplatePattern tmpl{pattern, TemplateKind::Binary, kind == "typed", "",
                           ""};
      if (tmpl.typed) {
        // Typed ids have the fixed shape ?X and A' SubClassOf ?Y and B'.
        auto guardOf = [&](const ConceptPtr& side) {
          if (!side->is(Concept::Kind::Conjunction) ||
              side->parts().size() != 2)
            throw std::runtime_error(path + ":" + std::to_string(lineNo) +
                                     ": malformed typed template " + id);
          for (const auto& part : side->parts())
            if (part->is(Concept::Kind::Atomic)) return part->name();
          throw std::runtime_error(path + ":" + std::to_string(lineNo) +
                                   ": malformed typed template " + id);
        };
        tmpl.guardBody = guardOf(pattern.body());
        tmpl.guardHead = guardOf(pattern.head());
      }
      index.binary_.insert_or_assign(id, IndexedTemplate{tmpl, witnesses});
    } else {
      throw std::runtime_error(path + ":" + std::to_string(lineNo) +
                               ": unknown template kind " + kind);
    }
  }
  return index;
}

}  // namespace onto
