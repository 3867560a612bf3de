#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "onto/concept.hpp"
#include "onto/embeddings.hpp"

namespace onto {

enum class Origin {
  Ontology,
  Inversion,
  HeadSwap,
  BodySwap,
  ConceptReplacement,
  Disjointness,
  HardNegative,
};
const char* origin_name(Origin o);
Origin origin_from_name(const std::string& name);

struct LabeledRule {
  Rule rule;
  int label = 0;  // 1 positive, 0 negative
  Origin origin = Origin::Ontology;
};

struct SplitSpec {
  double testFraction = 0.20;  // 0.05 for large ontologies
  double devFraction = 0.10;   // of the non-test rules
  uint64_t seed = 0;
};

struct SplitResult {
  std::vector<Rule> train, dev, test;
};

// Seeded uniform split without replacement; deterministic per seed.
// Requires at least 10 rules and throws if any part comes out empty.
SplitResult split_rules(const Ontology& ontology, const SplitSpec& spec);

// Corruption strategies over the training positives:
//   inversion       D SubClassOf C per atomic subsumption C SubClassOf D
//   head/body swap  one random partner rule per rule
//   replacement     one side of each atomic subsumption replaced by a
//                   random ontology concept (never the removed one, never
//                   reproducing the rule)
//   disjointness    C and D SubClassOf Nothing per atomic subsumption
// Deduplicated by id; candidates entailed by the positives or colliding
// with any id in excludeIds are dropped.
std::vector<LabeledRule> gen_training_negatives(
    const std::vector<Rule>& trainPositives, uint64_t seed,
    const std::set<std::string>& excludeIds = {});

struct HardNegativeCandidate {
  Rule rule;
  std::string sourceRuleId;
  std::string replaced;
  std::string replacement;
};

struct HardNegativeResult {
  std::vector<HardNegativeCandidate> candidates;
  std::vector<std::string> skippedUnresolvable;  // source rule ids
};

// Per test positive: one atomic occurrence picked uniformly, replaced by a
// uniform choice among its top-k cosine neighbors from the pool. Rules
// whose picked concept cannot be resolved are skipped and reported.
// Candidates whose id lands in forbiddenIds (e.g. existing positives) are
// re-drawn from the remaining neighbors, or skipped if none survive.
HardNegativeResult gen_hard_negatives(
    const std::vector<Rule>& testPositives, const EmbeddingStore& store,
    const std::set<std::string>& conceptPool, size_t k, size_t perPositive,
    uint64_t seed, const std::set<std::string>& forbiddenIds = {});

struct AnnotationRow {
  std::string ruleId;
  std::string statement;
  std::string judge1;  // "neg" or "pos"
  std::string judge2;
};

struct AnnotationOutcome {
  std::vector<std::string> keptRuleIds;  // both judges said neg
  double kappa = 0.0;
  size_t total = 0;
};

// Cohen's kappa over the two binary judgment columns; keeps only
// candidates both annotators marked neg. Throws on missing cells or
// unknown label tokens.
AnnotationOutcome finalize_annotations(const std::vector<AnnotationRow>& rows);

std::vector<AnnotationRow> read_annotation_tsv(const std::string& path);
void write_annotation_worksheet(const std::vector<HardNegativeCandidate>& rows,
                                const std::string& path);

// Labeled dataset TSV: rule_text \t label(1|0) \t origin.
void save_labeled_tsv(const std::vector<LabeledRule>& rows,
                      const std::string& path);
std::vector<LabeledRule> load_labeled_tsv(const std::string& path);

}  // namespace onto
