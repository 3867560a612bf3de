#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "onto/gnn.hpp"
#include "onto/negatives.hpp"
#include "onto/nli.hpp"
#include "onto/synth.hpp"

namespace onto {

struct F1Result {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
  size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// Positive-class precision/recall/F1 at the threshold (prediction is
// positive when probability >= threshold). Throws on a length mismatch.
F1Result f1_score(const std::vector<double>& probs,
                  const std::vector<int>& labels, double threshold = 0.5);

// Best-F1 threshold over {0.5} plus every observed probability; never
// worse than 0.5 on the given set by construction.
double best_threshold(const std::vector<double>& probs,
                      const std::vector<int>& labels);

struct SystemResult {
  F1Result metrics;
  std::map<std::string, size_t> provenance;  // unary/binary/fallback/no-template
  double threshold = 0.5;
};

struct EvalReport {
  std::map<std::string, SystemResult> systems;
  std::vector<std::pair<std::string, std::string>> configEcho;
  uint64_t seed = 0;

  std::string toTsv() const;
  std::string toText() const;
};

struct BenchConfig {
  uint64_t seed = 7;
  double testFraction = 0.20;
  bool largeOntology = false;  // switches the test fraction to 0.05
  double devFraction = 0.10;
  int layers = 2;
  int hidden = 16;
  double dropout = 0.5;
  Scorer scorer = Scorer::DistMult;
  int epochs = 200;
  double learningRate = 1e-2;
  double weightDecay = 5e-2;
  int promptVariant = 1;
  double threshold = 0.5;
  bool tuneThreshold = false;
  std::string fallbackMode = "none";  // none | mock | http
  std::string mockTruthFile;
  std::string testNegativesFile;  // planted/annotated; empty -> corruption
  size_t hardNegPerPositive = 1;

  // key = value lines, '#' comments; unknown keys are an error.
  static BenchConfig fromFile(const std::string& path);
  std::vector<std::pair<std::string, std::string>> echo() const;
  double effectiveTestFraction() const {
    return largeOntology ? 0.05 : testFraction;
  }
};

std::unique_ptr<NliClient> make_fallback_client(const BenchConfig& config);

// split -> negatives -> templates -> graph -> train UT and BT -> evaluate
// the hybrid chains on the test split. Reports GCN (UT), GCN (BT),
// GCN (UT+BT), and GCN (UT+BT) + NLI when a fallback client is given.
EvalReport run_benchmark(const std::string& ontologyFile,
                         const std::string& vectorsFile,
                         const BenchConfig& config,
                         NliClient* fallback = nullptr);

struct ScorerComparison {
  double distmultF1 = 0.0;
  double transeF1 = 0.0;
  EvalReport distmult;
  EvalReport transe;
};

// Same pipeline and seeds twice, differing only in the binary scoring
// function; pairs the GCN (BT) F1s.
ScorerComparison compare_scorers(const std::string& ontologyFile,
                                 const std::string& vectorsFile,
                                 const BenchConfig& config);

}  // namespace onto
