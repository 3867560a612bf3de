#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "onto/concept.hpp"
#include "onto/embeddings.hpp"

namespace onto {

// Concept co-occurrence graph: one node per atomic concept of the training
// rules (plus requested extras, which enter isolated), an unweighted edge
// whenever two concepts appear in the same rule, and per-node embedding
// features. Nodes are indexed in lexicographic name order. Immutable after
// build.
class ConceptGraph {
 public:
  static ConceptGraph build(const std::vector<Rule>& trainRules,
                            const EmbeddingStore& store,
                            const std::set<std::string>& extraConcepts = {});

  size_t nodeCount() const { return nodes_.size(); }
  size_t featureDim() const { return featureDim_; }
  const std::vector<std::string>& nodes() const { return nodes_; }
  std::optional<size_t> indexOf(const std::string& name) const;

  const std::vector<std::pair<size_t, size_t>>& edges() const {
    return edges_;
  }
  // Sorted adjacency; throws on an out-of-range index.
  std::vector<size_t> neighborhood(size_t node) const;

  // Row-major nodeCount x featureDim.
  const std::vector<double>& features() const { return features_; }

  // Y = Ahat X with Ahat = D^{-1/2} (A + I) D^{-1/2}; X and Y are row-major
  // nodeCount x cols and must not alias.
  void propagate(const double* x, double* y, size_t cols) const;
  // Dense Ahat, row-major nodeCount x nodeCount.
  std::vector<double> denseNormalizedAdjacency() const;

  // FNV-1a over the node names; ties checkpoints to the graph they were
  // trained on.
  uint64_t nodeHash() const;

  void saveJson(const std::string& path) const;
  static ConceptGraph loadJson(const std::string& path);

 private:
  std::vector<std::string> nodes_;
  std::vector<std::pair<size_t, size_t>> edges_;  // i < j, sorted
  std::vector<std::vector<size_t>> adjacency_;
  std::vector<double> features_;
  size_t featureDim_ = 0;
};

}  // namespace onto
