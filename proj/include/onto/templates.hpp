#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <set>
#include <string>
#include <vector>

#include "onto/concept.hpp"

namespace onto {

enum class TemplateKind { Unary, Binary };

// A rule pattern with ?X (and ?Y) slots. Binary patterns carry guards when
// they came from a typed extraction of an atomic subsumption.
struct TemplatePattern {
  Rule pattern;
  TemplateKind kind;
  bool typed = false;
  std::string guardBody;  // A' in ?X and A' SubClassOf ?Y and B'
  std::string guardHead;  // B'

  const std::string& id() const { return pattern.id(); }
};

struct UnaryExtraction {
  Rule pattern;
  std::string filler;  // the atomic concept the slot replaced
};

struct BinaryExtraction {
  TemplatePattern tmpl;
  std::string fillerX;
  std::string fillerY;
};

struct MatchedInstance {
  TemplateKind kind;
  std::string templateId;
  std::vector<std::string> fillers;  // {X} or {X, Y}

  friend bool operator<(const MatchedInstance& a, const MatchedInstance& b) {
    return std::tie(a.kind, a.templateId, a.fillers) <
           std::tie(b.kind, b.templateId, b.fillers);
  }
  friend bool operator==(const MatchedInstance& a, const MatchedInstance& b) {
    return a.kind == b.kind && a.templateId == b.templateId &&
           a.fillers == b.fillers;
  }
};

// One (template, concept) pair per atomic occurrence position; a concept
// appearing twice yields two entries.
std::vector<UnaryExtraction> extract_unary(const Rule& rule);

// All unordered occurrence pairs, skipping the degenerate ?X SubClassOf ?Y
// pattern. Bare atomic subsumptions instead yield typed templates
// ?X and A' SubClassOf ?Y and B' over the direct parents of both sides.
std::vector<BinaryExtraction> extract_binary(
    const Rule& rule,
    const std::map<std::string, std::set<std::string>>& directParents);

Rule instantiate_unary(const Rule& pattern, const std::string& x);
Rule instantiate_binary(const Rule& pattern, const std::string& x,
                        const std::string& y);

struct IndexedTemplate {
  TemplatePattern tmpl;
  size_t witnesses = 0;
};

class TemplateIndex {
 public:
  // Single-writer construction from the training rules; the index is
  // frozen and read-only afterwards.
  static TemplateIndex build(const Ontology& training);

  const std::map<std::string, IndexedTemplate>& unary() const {
    return unary_;
  }
  const std::map<std::string, IndexedTemplate>& binary() const {
    return binary_;
  }
  const std::map<std::string, std::set<std::pair<std::string, char>>>&
  perConcept() const {
    return perConcept_;
  }
  const std::map<std::string, std::set<std::string>>& parents() const {
    return parents_;
  }
  size_t atomicRulesWithoutParents() const {
    return atomicRulesWithoutParents_;
  }

  // Every (template, fillers) combination whose instantiation canonically
  // equals the candidate. Atomic candidates C SubClassOf D additionally
  // match typed templates whose guards are direct parents of C and D.
  // Sorted by kind, template id, then fillers; empty result is valid.
  std::vector<MatchedInstance> match(const Rule& candidate) const;

  void saveTsv(const std::string& path) const;
  // Rebuilds an index from a templates.tsv plus the training rules the
  // typed-guard lookup needs.
  static TemplateIndex loadTsv(const std::string& path,
                               const Ontology& training);

 private:
  std::map<std::string, IndexedTemplate> unary_;
  std::map<std::string, IndexedTemplate> binary_;
  std::map<std::string, std::set<std::pair<std::string, char>>> perConcept_;
  std::map<std::string, std::set<std::string>> parents_;
  size_t atomicRulesWithoutParents_ = 0;
};

}  // namespace onto
