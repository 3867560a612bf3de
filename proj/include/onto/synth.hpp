#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onto/concept.hpp"

namespace onto {

// Planted-truth benchmark generator: parallel rule families with clustered
// embeddings. Family f contributes
//   Fam<f>Mem1..4 SubClassOf Fam<f>Head   (members share a feature cluster)
//   Fam<f>Mem1..4 SubClassOf Fam<f>Alt    (second membership; gives the
//                                          typed binary templates guards)
//   Fam<f>Head SubClassOf Dom<d>          (families 2d-1 and 2d share d)
//   odd f:  Fam<f>Exo SubClassOf hasTrait<f> some Fam<f>Trait
//   even f: Fam<f>Mem5 SubClassOf Fam<f>Head
// for 10 rules per family. Every other candidate rule is false by
// construction, so a mock NLI client loaded from truth.tsv answers the
// planted ground truth.
struct SynthSpec {
  size_t families = 20;
  size_t dim = 56;
  uint64_t seed = 7;
  double memberNoise = 0.05;
  double headIndividuality = 0.9;
  // Heads, alternates, domains and traits carry small-norm vectors so the
  // member clusters dominate what the graph propagation mixes together.
  double auxScale = 0.02;
};

struct SynthPaths {
  std::string rules;      // ontology.dlr
  std::string vectors;    // vectors.txt
  std::string truth;      // truth.tsv: statement \t 1
  std::string negatives;  // negatives.tsv: rule \t 0 \t origin \t source id
};

SynthPaths generate_synthetic(const SynthSpec& spec,
                              const std::string& outDir);

struct PlantedNegative {
  Rule rule;
  std::string sourceRuleId;
};

std::vector<PlantedNegative> load_planted_negatives(const std::string& path);

}  // namespace onto
