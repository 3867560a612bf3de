#include "onto/concept.hpp"

#include <algorithm>

namespace onto {

namespace {

// A part of a conjunction is rendered as a term: existentials need
// parentheses there ("Biologist and (livesIn some UK)").
std::string termText(const ConceptPtr& c) {
  if (c->is(Concept::Kind::Existential)) return "(" + c->text() + ")";
  return c->text();
}

void requireUsableName(const std::string& name, const char* what) {
  if (name.empty()) throw std::invalid_argument(std::string(what) + " is empty");
  for (char ch : name) {
    bool ok = (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') ||
              (ch >= '0' && ch <= '9') || ch == '_' || ch == '-';
    if (!ok)
      throw std::invalid_argument(std::string(what) + " has illegal character: " +
                                  name);
  }
}

}  // namespace

ConceptPtr Concept::atomic(std::string name) {
  requireUsableName(name, "atomic concept name");
  std::string text = name;
  return ConceptPtr(
      new Concept(Kind::Atomic, std::move(name), {}, std::move(text)));
}

ConceptPtr Concept::bottom() {
  static const ConceptPtr instance(
      new Concept(Kind::Bottom, "", {}, "Nothing"));
  return instance;
}

ConceptPtr Concept::placeholder(std::string label) {
  requireUsableName(label, "placeholder label");
  std::string text = "?" + label;
  return ConceptPtr(
      new Concept(Kind::Placeholder, std::move(label), {}, std::move(text)));
}

ConceptPtr Concept::existential(std::string role, ConceptPtr filler) {
  requireUsableName(role, "role name");
  if (!filler) throw std::invalid_argument("existential filler is null");
  if (filler->is(Kind::Bottom))
    throw std::invalid_argument("Nothing cannot fill an existential");
  std::string text = role + " some " +
                     (filler->is(Kind::Conjunction) ? "(" + filler->text() + ")"
                                                    : filler->text());
  return ConceptPtr(new Concept(Kind::Existential, std::move(role),
                                {std::move(filler)}, std::move(text)));
}

ConceptPtr Concept::conjunction(std::vector<ConceptPtr> parts) {
  // Flatten, then dedup by serialization keeping first-appearance order;
  // nested conjunctions contribute their display order.
  std::vector<ConceptPtr> ordered;
  std::set<std::string> seen;
  for (auto& p : parts) {
    if (!p) throw std::invalid_argument("conjunction part is null");
    if (p->is(Kind::Bottom))
      throw std::invalid_argument("Nothing cannot be a conjunct");
    if (p->is(Kind::Conjunction)) {
      for (const auto& inner : p->displayParts())
        if (seen.insert(inner->text()).second) ordered.push_back(inner);
    } else if (seen.insert(p->text()).second) {
      ordered.push_back(p);
    }
  }
  if (ordered.empty()) throw std::invalid_argument("empty conjunction");
  if (ordered.size() == 1) return ordered.front();

  std::vector<ConceptPtr> sorted = ordered;
  std::sort(sorted.begin(), sorted.end(),
            [](const ConceptPtr& a, const ConceptPtr& b) {
              return a->text() < b->text();
            });
  std::string text = termText(sorted.front());
  for (size_t i = 1; i < sorted.size(); ++i)
    text += " and " + termText(sorted[i]);
  auto* node =
      new Concept(Kind::Conjunction, "", std::move(sorted), std::move(text));
  node->displayParts_ = std::move(ordered);
  return ConceptPtr(node);
}

void Concept::collectAtoms(std::set<std::string>& out) const {
  switch (kind_) {
    case Kind::Atomic:
      out.insert(name_);
      break;
    case Kind::Conjunction:
      for (const auto& p : parts_) p->collectAtoms(out);
      break;
    case Kind::Existential:
      filler()->collectAtoms(out);
      break;
    default:
      break;
  }
}

void Concept::collectPlaceholders(std::vector<std::string>& out) const {
  switch (kind_) {
    case Kind::Placeholder:
      out.push_back(name_);
      break;
    case Kind::Conjunction:
      for (const auto& p : parts_) p->collectPlaceholders(out);
      break;
    case Kind::Existential:
      filler()->collectPlaceholders(out);
      break;
    default:
      break;
  }
}

bool Concept::containsPlaceholder() const {
  std::vector<std::string> labels;
  collectPlaceholders(labels);
  return !labels.empty();
}

ConceptPtr Concept::substitute(
    const std::map<std::string, ConceptPtr>& binding) const {
  switch (kind_) {
    case Kind::Placeholder: {
      auto it = binding.find(name_);
      if (it == binding.end())
        throw std::invalid_argument("unbound placeholder ?" + name_);
      return it->second;
    }
    case Kind::Conjunction: {
      std::vector<ConceptPtr> parts;
      parts.reserve(parts_.size());
      for (const auto& p : parts_) parts.push_back(p->substitute(binding));
      return conjunction(std::move(parts));
    }
    case Kind::Existential:
      return existential(name_, filler()->substitute(binding));
    default:
      // Atomic and Bottom are already canonical leaves; sharing is fine.
      return kind_ == Kind::Atomic ? atomic(name_) : bottom();
  }
}

Rule::Rule(ConceptPtr body, ConceptPtr head)
    : body_(std::move(body)), head_(std::move(head)) {
  if (!body_ || !head_) throw std::invalid_argument("null rule side");
  if (body_->is(Concept::Kind::Bottom))
    throw std::invalid_argument("rule body cannot be Nothing");
  id_ = body_->text() + " SubClassOf " + head_->text();
}

std::set<std::string> Rule::atoms() const {
  std::set<std::string> out;
  body_->collectAtoms(out);
  head_->collectAtoms(out);
  return out;
}

bool Rule::isAtomicSubsumption() const {
  return body_->is(Concept::Kind::Atomic) && head_->is(Concept::Kind::Atomic);
}

bool Rule::containsPlaceholder() const {
  return body_->containsPlaceholder() || head_->containsPlaceholder();
}

Rule Rule::substitute(const std::map<std::string, ConceptPtr>& binding) const {
  return Rule(body_->substitute(binding), head_->substitute(binding));
}

bool Ontology::add(const Rule& rule) {
  return rules_.emplace(rule.id(), rule).second;
}

std::vector<Rule> Ontology::ruleList() const {
  std::vector<Rule> out;
  out.reserve(rules_.size());
  for (const auto& [id, r] : rules_) out.push_back(r);
  return out;
}

std::set<std::string> Ontology::atomicConcepts() const {
  std::set<std::string> out;
  for (const auto& [id, r] : rules_) {
    r.body()->collectAtoms(out);
    r.head()->collectAtoms(out);
  }
  return out;
}

std::map<std::string, std::set<std::string>> Ontology::directParents() const {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& [id, r] : rules_)
    if (r.isAtomicSubsumption())
      out[r.body()->name()].insert(r.head()->name());
  return out;
}

}  // namespace onto
