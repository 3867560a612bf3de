#include "onto/hybrid.hpp"

namespace onto {

HybridPredictor::HybridPredictor(const TemplateIndex& index,
                                 const ConceptGraph& graph,
                                 const GnnModel* unaryModel,
                                 const GnnModel* binaryModel,
                                 NliClient* fallback, int promptVariant)
    : index_(index),
      graph_(graph),
      unaryModel_(unaryModel),
      binaryModel_(binaryModel),
      fallback_(fallback),
      promptVariant_(promptVariant) {
  if (unaryModel_) {
    if (unaryModel_->hyper.kind != ModelKind::Unary)
      throw std::invalid_argument("unary slot holds a non-unary model");
    if (unaryModel_->nodeHash != graph.nodeHash())
      throw std::invalid_argument("unary model was trained on another graph");
    unaryEmbeddings_ = gnn_forward(graph, *unaryModel_, false);
  }
  if (binaryModel_) {
    if (binaryModel_->hyper.kind != ModelKind::Binary)
      throw std::invalid_argument("binary slot holds a non-binary model");
    if (binaryModel_->nodeHash != graph.nodeHash())
      throw std::invalid_argument("binary model was trained on another graph");
    binaryEmbeddings_ = gnn_forward(graph, *binaryModel_, false);
  }
}

Prediction HybridPredictor::predict(const Rule& rule) const {
  std::vector<MatchedInstance> matches = index_.match(rule);
  bool hasUnary = false, hasBinary = false;
  for (const MatchedInstance& m : matches) {
    hasUnary |= m.kind == TemplateKind::Unary;
    hasBinary |= m.kind == TemplateKind::Binary;
  }
  if (unaryModel_ && hasUnary)
    return rule_probability(rule, matches, unaryEmbeddings_, *unaryModel_,
                            graph_);
  if (binaryModel_ && hasBinary)
    return rule_probability(rule, matches, binaryEmbeddings_, *binaryModel_,
                            graph_);
  if (fallback_) {
    NliRequest request;
    request.prompt = build_prompt(rule, promptVariant_);
    NliVerdict verdict;
    try {
      verdict = fallback_->classify(request);
    } catch (const NliTransportError& e) {
      throw NliTransportError("fallback failed for rule '" + rule.id() +
                              "': " + e.what());
    }
    Prediction pred;
    pred.ruleId = rule.id();
    pred.provenance = Provenance::Fallback;
    pred.probability = verdict.label == NliVerdict::Label::True ? 1.0 : 0.0;
    return pred;
  }
  Prediction pred;
  pred.ruleId = rule.id();
  pred.provenance = Provenance::NoTemplate;
  pred.probability = 0.0;
  return pred;
}

std::vector<Prediction> HybridPredictor::predictAll(
    const std::vector<Rule>& rules) const {
  std::vector<Prediction> out;
  out.reserve(rules.size());
  for (const Rule& r : rules) out.push_back(predict(r));
  return out;
}

}  // namespace onto
