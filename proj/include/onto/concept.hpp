#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace onto {

class Concept;
using ConceptPtr = std::shared_ptr<const Concept>;

// Description-logic concept expression. Nodes are immutable and always
// canonical: conjunctions are flattened, deduplicated and sorted by their
// serialization, so structural identity reduces to comparing text().
// Placeholder leaves (?X, ?Y) only occur inside rule-template patterns.
class Concept {
 public:
  enum class Kind { Atomic, Conjunction, Existential, Bottom, Placeholder };

  static ConceptPtr atomic(std::string name);
  // Flattens nested conjunctions, drops duplicate parts, sorts by text.
  // A single surviving part is returned as-is (no 1-ary conjunctions).
  static ConceptPtr conjunction(std::vector<ConceptPtr> parts);
  static ConceptPtr existential(std::string role, ConceptPtr filler);
  static ConceptPtr bottom();
  static ConceptPtr placeholder(std::string label);

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }

  // Atomic: concept name; Existential: role name; Placeholder: slot label.
  const std::string& name() const { return name_; }
  const std::vector<ConceptPtr>& parts() const { return parts_; }
  // Conjunction parts in first-appearance order. Identity, serialization
  // and traversal all use the sorted parts(); only surface rendering cares
  // about the order a rule was written in.
  const std::vector<ConceptPtr>& displayParts() const {
    return displayParts_.empty() ? parts_ : displayParts_;
  }
  const ConceptPtr& filler() const { return parts_.front(); }

  // Canonical serialization in the line grammar.
  const std::string& text() const { return text_; }

  void collectAtoms(std::set<std::string>& out) const;
  // Placeholder labels in canonical traversal order (body-to-head order is
  // the caller's concern; this walks one concept).
  void collectPlaceholders(std::vector<std::string>& out) const;
  bool containsPlaceholder() const;

  // Replaces placeholder leaves by the bound concepts and re-canonicalizes.
  ConceptPtr substitute(const std::map<std::string, ConceptPtr>& binding) const;

 private:
  Concept(Kind kind, std::string name, std::vector<ConceptPtr> parts,
          std::string text)
      : kind_(kind),
        name_(std::move(name)),
        parts_(std::move(parts)),
        text_(std::move(text)) {}

  Kind kind_;
  std::string name_;
  std::vector<ConceptPtr> parts_;
  std::vector<ConceptPtr> displayParts_;
  std::string text_;
};

inline bool sameConcept(const ConceptPtr& a, const ConceptPtr& b) {
  return a->text() == b->text();
}

// A concept inclusion body SubClassOf head. The id is the canonical
// serialization, identical for semantically identical rules.
class Rule {
 public:
  Rule(ConceptPtr body, ConceptPtr head);

  const ConceptPtr& body() const { return body_; }
  const ConceptPtr& head() const { return head_; }
  const std::string& id() const { return id_; }

  std::set<std::string> atoms() const;
  bool isAtomicSubsumption() const;
  bool containsPlaceholder() const;
  Rule substitute(const std::map<std::string, ConceptPtr>& binding) const;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.id_ == b.id_;
  }
  friend bool operator<(const Rule& a, const Rule& b) { return a.id_ < b.id_; }

 private:
  ConceptPtr body_;
  ConceptPtr head_;
  std::string id_;
};

// Rule set keyed by canonical id, with the derived atomic-subsumption
// taxonomy (directParents) used for typed templates.
class Ontology {
 public:
  // Returns false if an identical rule was already present.
  bool add(const Rule& rule);
  size_t size() const { return rules_.size(); }
  bool contains(const std::string& id) const { return rules_.count(id) > 0; }
  const std::map<std::string, Rule>& rules() const { return rules_; }
  std::vector<Rule> ruleList() const;

  std::set<std::string> atomicConcepts() const;
  // name -> set of direct parents: entries exactly for rules A SubClassOf B
  // with both sides atomic.
  std::map<std::string, std::set<std::string>> directParents() const;

 private:
  std::map<std::string, Rule> rules_;
};

}  // namespace onto
