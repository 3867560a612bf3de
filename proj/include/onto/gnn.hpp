#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "onto/graph.hpp"
#include "onto/templates.hpp"

namespace onto {

// Minimal row-major dense matrix; all engine math runs through it.
struct Matrix {
  size_t rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& at(size_t r, size_t c) { return a[r * cols + c]; }
  double at(size_t r, size_t c) const { return a[r * cols + c]; }
  const double* row(size_t r) const { return a.data() + r * cols; }
  double* row(size_t r) { return a.data() + r * cols; }
};

// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);

enum class Scorer { DistMult, TransE };
enum class ModelKind { Unary, Binary };

struct GnnHyper {
  ModelKind kind = ModelKind::Unary;
  int layerCount = 2;     // tuning grid {2,3,4,5}
  int hidden = 16;        // tuning grid {8,16,32,64}
  double dropout = 0.5;
  Scorer scorer = Scorer::DistMult;
};

struct UnaryHead {
  std::vector<double> a;
  double b = 0.0;
};

// DistMult uses v as the diagonal of M; TransE uses v as the translation
// and b as the bias.
struct BinaryHead {
  std::vector<double> v;
  double b = 0.0;
};

struct GnnModel {
  GnnHyper hyper;
  std::vector<Matrix> layers;  // W^0 .. W^{L-1}
  std::map<std::string, UnaryHead> unaryHeads;
  std::map<std::string, BinaryHead> binaryHeads;
  uint64_t nodeHash = 0;

  // Glorot-uniform layer weights, zero heads (every initial confidence is
  // exactly 0.5).
  static GnnModel init(const ConceptGraph& graph, const TemplateIndex& index,
                       const GnnHyper& hyper, uint64_t seed);

  void saveJson(const std::string& path) const;
  static GnnModel loadJson(const std::string& path);
};

enum class Provenance { Unary, Binary, Fallback, NoTemplate };
const char* provenance_name(Provenance p);

struct Prediction {
  std::string ruleId;
  double probability = 0.0;
  Provenance provenance = Provenance::NoTemplate;
  std::optional<std::string> matchedTemplateId;
};

// Node embeddings H^L. Dropout (rate hyper.dropout, inverted scaling) is
// applied to every layer input in training mode only, drawn from rngSeed;
// eval mode is deterministic. ReLU after every layer but the last.
Matrix gnn_forward(const ConceptGraph& graph, const GnnModel& model,
                   bool trainingMode, uint64_t rngSeed = 0);

// sigma(x . a_rho + b_rho) for the final-layer embedding of the concept.
double conf_unary(const GnnModel& model, const std::string& templateId,
                  size_t conceptIndex, const Matrix& embeddings);

// DistMult: sigma(sum_i x_i m_i y_i); TransE: sigma(|y - x - a|_2 - b).
double conf_binary(const GnnModel& model, const std::string& templateId,
                   size_t xIndex, size_t yIndex, const Matrix& embeddings);

// Max over the matched confidences of the model's template kind; no match
// means probability exactly 0 with provenance NoTemplate. Ties pick the
// lexicographically smallest template id.
Prediction rule_probability(const Rule& rule,
                            const std::vector<MatchedInstance>& matches,
                            const Matrix& embeddings, const GnnModel& model,
                            const ConceptGraph& graph);

// Mean-reduced binary cross-entropy with probabilities clamped to
// [1e-7, 1 - 1e-7].
double bce_loss(const std::vector<std::pair<double, int>>& probLabel);

struct TrainConfig {
  double learningRate = 1e-2;
  double weightDecay = 5e-2;
  int epochs = 200;
  uint64_t seed = 0;
  double devThreshold = 0.5;
};

struct TrainResult {
  GnnModel model;
  int bestEpoch = 0;
  double bestDevF1 = 0.0;
  size_t excludedPositives = 0;  // train positives with no template match
  std::vector<double> epochLoss;
};

struct TrainError : std::runtime_error {
  TrainError(int epoch, const std::string& ruleId, const std::string& what)
      : std::runtime_error("epoch " + std::to_string(epoch) + ", rule '" +
                           ruleId + "': " + what),
        epoch(epoch),
        ruleId(ruleId) {}
  int epoch;
  std::string ruleId;
};

// Full-batch AdamW training with analytic gradients; the gradient of the
// max-aggregation flows only through the argmax match. Returns the
// checkpoint with the best dev F1 (earliest epoch on ties).
TrainResult train(const ConceptGraph& graph, const TemplateIndex& index,
                  const std::vector<std::pair<Rule, int>>& trainSet,
                  const std::vector<std::pair<Rule, int>>& devSet,
                  const GnnHyper& hyper, const TrainConfig& config);

// --- gradient-check surface (used by tests) ------------------------------

// A labeled rule with its matches resolved to node indices.
struct ScorableRule {
  std::string ruleId;
  int label = 0;
  struct Match {
    std::string templateId;
    std::vector<size_t> nodeIndex;  // {x} or {x, y}
  };
  std::vector<Match> matches;
};

std::vector<ScorableRule> resolve_batch(
    const ConceptGraph& graph, const TemplateIndex& index,
    const std::vector<std::pair<Rule, int>>& rules, ModelKind kind,
    size_t* droppedPositives = nullptr);

struct Gradients {
  std::vector<Matrix> layers;
  std::map<std::string, UnaryHead> unaryHeads;
  std::map<std::string, BinaryHead> binaryHeads;
};

// Loss (and, when grads != nullptr, analytic gradients) of the batch under
// an optional fixed dropout plan. masks[l], when present, is the
// already-scaled multiplicative mask for layer input l.
double loss_and_gradients(const ConceptGraph& graph, const GnnModel& model,
                          const std::vector<ScorableRule>& batch,
                          const std::vector<Matrix>* masks, Gradients* grads,
                          std::vector<Prediction>* predictions = nullptr);

// Visits every trainable scalar with a stable group label ("layer0",
// "unary:<id>", "binary:<id>"). Gradients are visited in the same order.
void for_each_param(GnnModel& model,
                    const std::function<void(const std::string&, double&)>& fn);
void for_each_grad(Gradients& grads,
                   const std::function<void(const std::string&, double&)>& fn);

// Deterministic dropout masks for one epoch (inverted dropout: kept units
// scale by 1/keep).
std::vector<Matrix> dropout_masks(const ConceptGraph& graph,
                                  const GnnModel& model, uint64_t seed,
                                  int epoch);

}  // namespace onto
