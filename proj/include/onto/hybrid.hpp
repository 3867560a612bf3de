#pragma once

#include <optional>
#include <string>
#include <vector>

#include "onto/gnn.hpp"
#include "onto/nli.hpp"

namespace onto {

// Routes each candidate unary-model -> binary-model -> NLI fallback,
// using the first configured stage that can score it. Short-circuit: the
// fallback is never consulted when a template matches. Any stage may be
// absent (nullptr); a rule no stage covers gets probability 0 with
// provenance no-template.
class HybridPredictor {
 public:
  HybridPredictor(const TemplateIndex& index, const ConceptGraph& graph,
                  const GnnModel* unaryModel, const GnnModel* binaryModel,
                  NliClient* fallback, int promptVariant = 1);

  Prediction predict(const Rule& rule) const;
  std::vector<Prediction> predictAll(const std::vector<Rule>& rules) const;

 private:
  const TemplateIndex& index_;
  const ConceptGraph& graph_;
  const GnnModel* unaryModel_;
  const GnnModel* binaryModel_;
  NliClient* fallback_;
  int promptVariant_;
  Matrix unaryEmbeddings_;
  Matrix binaryEmbeddings_;
};

}  // namespace onto
