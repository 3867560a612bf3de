#include "onto/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "onto/rng.hpp"

namespace onto {

namespace {

constexpr double kProbEps = 1e-7;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Matrix featureMatrix(const ConceptGraph& graph) {
  Matrix f(graph.nodeCount(), graph.featureDim());
  f.a = graph.features();
  return f;
}

struct ForwardCache {
  std::vector<Matrix> inputs;      // X^l after dropout
  std::vector<Matrix> propagated;  // Ahat X^l
  std::vector<Matrix> pre;         // Z^{l+1} = Ahat X^l W^l
  Matrix out;                      // H^L
};

Matrix applyMask(const Matrix& h, const Matrix* mask) {
  if (!mask) return h;
  if (mask->rows != h.rows || mask->cols != h.cols)
    throw std::runtime_error("dropout mask shape mismatch");
  Matrix out = h;
  for (size_t i = 0; i < out.a.size(); ++i) out.a[i] *= mask->a[i];
  return out;
}

ForwardCache forwardPass(const ConceptGraph& graph, const GnnModel& model,
                         const std::vector<Matrix>* masks) {
  size_t layerCount = model.layers.size();
  if (masks && masks->size() != layerCount)
    throw std::runtime_error("dropout plan layer count mismatch");
  ForwardCache cache;
  Matrix h = featureMatrix(graph);
  if (model.layers.empty())
    throw std::runtime_error("model has no layers");
  if (model.layers.front().rows != h.cols)
    throw std::runtime_error("feature dim " + std::to_string(h.cols) +
                             " does not match layer-0 input dim " +
                             std::to_string(model.layers.front().rows));
  for (size_t l = 0; l < layerCount; ++l) {
    Matrix x = applyMask(h, masks ? &(*masks)[l] : nullptr);
    Matrix p(x.rows, x.cols);
    graph.propagate(x.a.data(), p.a.data(), x.cols);
    Matrix z = matmul(p, model.layers[l]);
    cache.inputs.push_back(std::move(x));
    cache.propagated.push_back(std::move(p));
    if (l + 1 < layerCount) {
      h = z;
      for (double& v : h.a) v = v > 0.0 ? v : 0.0;
    } else {
      h = z;
    }
    cache.pre.push_back(std::move(z));
  }
  cache.out = std::move(h);
  return cache;
}

double unaryScore(const UnaryHead& head, const double* x, size_t n) {
  double s = head.b;
  for (size_t i = 0; i < n; ++i) s += x[i] * head.a[i];
  return s;
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::runtime_error("matmul shape mismatch");
  Matrix c(a.rows, b.cols);
  for (size_t i = 0; i < a.rows; ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (size_t k = 0; k < a.cols; ++k) {
      double v = arow[k];
      if (v == 0.0) continue;
      const double* brow = b.row(k);
      for (size_t j = 0; j < b.cols; ++j) crow[j] += v * brow[j];
    }
  }
  return c;
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Unary: return "unary";
    case Provenance::Binary: return "binary";
    case Provenance::Fallback: return "fallback";
    case Provenance::NoTemplate: return "no-template";
  }
  return "?";
}

GnnModel GnnModel::init(const ConceptGraph& graph, const TemplateIndex& index,
                        const GnnHyper& hyper, uint64_t seed) {
  if (hyper.layerCount < 1 || hyper.layerCount > 5)
    throw std::invalid_argument("layerCount out of range");
  if (hyper.hidden < 1) throw std::invalid_argument("hidden size must be >= 1");
  GnnModel model;
  model.hyper = hyper;
  model.nodeHash = graph.nodeHash();
  Rng rng(Rng::mix(seed, 0x6d6f64656cull));
  size_t inDim = graph.featureDim();
  for (int l = 0; l < hyper.layerCount; ++l) {
    size_t rows = l == 0 ? inDim : static_cast<size_t>(hyper.hidden);
    size_t cols = static_cast<size_t>(hyper.hidden);
    Matrix w(rows, cols);
    double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (double& v : w.a) v = rng.uniform(-bound, bound);
    model.layers.push_back(std::move(w));
  }
  // Small random head weights, zero bias: keeps every initial confidence
  // near 0.5 while breaking the exact ties that would freeze the
  // argmax-routed gradient onto one template per rule.
  size_t n = static_cast<size_t>(hyper.hidden);
  constexpr double headInit = 0.05;
  if (hyper.kind == ModelKind::Unary) {
    for (const auto& [id, entry] : index.unary()) {
      UnaryHead head{std::vector<double>(n, 0.0), 0.0};
      for (double& v : head.a) v = rng.uniform(-headInit, headInit);
      model.unaryHeads.emplace(id, std::move(head));
    }
  } else {
    for (const auto& [id, entry] : index.binary()) {
      BinaryHead head{std::vector<double>(n, 0.0), 0.0};
      for (double& v : head.v) v = rng.uniform(-headInit, headInit);
      model.binaryHeads.emplace(id, std::move(head));
    }
  }
  return model;
}

std::vector<Matrix> dropout_masks(const ConceptGraph& graph,
                                  const GnnModel& model, uint64_t seed,
                                  int epoch) {
  std::vector<Matrix> masks;
  double keep = 1.0 - model.hyper.dropout;
  if (keep <= 0.0) throw std::runtime_error("dropout rate must be < 1");
  Rng rng(Rng::mix(seed, 0x64726f70ull + static_cast<uint64_t>(epoch)));
  size_t n = graph.nodeCount();
  for (size_t l = 0; l < model.layers.size(); ++l) {
    size_t cols = model.layers[l].rows;
    Matrix mask(n, cols);
    for (double& v : mask.a)
      v = rng.uniform() < keep ? 1.0 / keep : 0.0;
    masks.push_back(std::move(mask));
  }
  return masks;
}

Matrix gnn_forward(const ConceptGraph& graph, const GnnModel& model,
                   bool trainingMode, uint64_t rngSeed) {
  if (!trainingMode || model.hyper.dropout == 0.0)
    return forwardPass(graph, model, nullptr).out;
  std::vector<Matrix> masks = dropout_masks(graph, model, rngSeed, 0);
  return forwardPass(graph, model, &masks).out;
}

double conf_unary(const GnnModel& model, const std::string& templateId,
                  size_t conceptIndex, const Matrix& embeddings) {
  auto it = model.unaryHeads.find(templateId);
  if (it == model.unaryHeads.end())
    throw std::runtime_error("unknown unary template id: " + templateId);
  if (conceptIndex >= embeddings.rows)
    throw std::out_of_range("concept index out of range");
  return sigmoid(unaryScore(it->second, embeddings.row(conceptIndex),
                            embeddings.cols));
}

double conf_binary(const GnnModel& model, const std::string& templateId,
                   size_t xIndex, size_t yIndex, const Matrix& embeddings) {
  auto it = model.binaryHeads.find(templateId);
  if (it == model.binaryHeads.end())
    throw std::runtime_error("unknown binary template id: " + templateId);
  if (xIndex >= embeddings.rows || yIndex >= embeddings.rows)
    throw std::out_of_range("concept index out of range");
  const double* x = embeddings.row(xIndex);
  const double* y = embeddings.row(yIndex);
  size_t n = embeddings.cols;
  const BinaryHead& head = it->second;
  if (model.hyper.scorer == Scorer::DistMult) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += x[i] * head.v[i] * y[i];
    return sigmoid(s);
  }
  double sq = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d = y[i] - x[i] - head.v[i];
    sq += d * d;
  }
  return sigmoid(std::sqrt(sq) - head.b);
}

Prediction rule_probability(const Rule& rule,
                            const std::vector<MatchedInstance>& matches,
                            const Matrix& embeddings, const GnnModel& model,
                            const ConceptGraph& graph) {
  Prediction pred;
  pred.ruleId = rule.id();
  TemplateKind wanted = model.hyper.kind == ModelKind::Unary
                            ? TemplateKind::Unary
                            : TemplateKind::Binary;
  for (const MatchedInstance& m : matches) {
    if (m.kind != wanted) continue;
    std::vector<size_t> nodes;
    for (const std::string& filler : m.fillers) {
      auto idx = graph.indexOf(filler);
      if (!idx)
        throw std::runtime_error("concept not in graph: " + filler);
      nodes.push_back(*idx);
    }
    double conf = wanted == TemplateKind::Unary
                      ? conf_unary(model, m.templateId, nodes[0], embeddings)
                      : conf_binary(model, m.templateId, nodes[0], nodes[1],
                                    embeddings);
    // Matches arrive sorted by template id, so strict > keeps the
    // lexicographically smallest id on ties.
    if (!pred.matchedTemplateId || conf > pred.probability) {
      pred.probability = conf;
      pred.matchedTemplateId = m.templateId;
      pred.provenance = wanted == TemplateKind::Unary ? Provenance::Unary
                                                      : Provenance::Binary;
    }
  }
  return pred;
}

double bce_loss(const std::vector<std::pair<double, int>>& probLabel) {
  if (probLabel.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [p, y] : probLabel) {
    double q = std::clamp(p, kProbEps, 1.0 - kProbEps);
    sum += y ? -std::log(q) : -std::log(1.0 - q);
  }
  return sum / static_cast<double>(probLabel.size());
}

std::vector<ScorableRule> resolve_batch(
    const ConceptGraph& graph, const TemplateIndex& index,
    const std::vector<std::pair<Rule, int>>& rules, ModelKind kind,
    size_t* droppedPositives) {
  TemplateKind wanted =
      kind == ModelKind::Unary ? TemplateKind::Unary : TemplateKind::Binary;
  std::vector<ScorableRule> out;
  size_t dropped = 0;
  for (const auto& [rule, label] : rules) {
    ScorableRule s;
    s.ruleId = rule.id();
    s.label = label;
    for (const MatchedInstance& m : index.match(rule)) {
      if (m.kind != wanted) continue;
      ScorableRule::Match rm;
      rm.templateId = m.templateId;
      bool ok = true;
      for (const std::string& filler : m.fillers) {
        auto idx = graph.indexOf(filler);
        if (!idx) {
          ok = false;
          break;
        }
        rm.nodeIndex.push_back(*idx);
      }
      if (ok) s.matches.push_back(std::move(rm));
    }
    if (label == 1 && s.matches.empty()) {
      // A positive the template model can never move off p = 0; keeping it
      // would add a huge constant -log(eps) term to every epoch.
      ++dropped;
      continue;
    }
    out.push_back(std::move(s));
  }
  if (droppedPositives) *droppedPositives = dropped;
  return out;
}

double loss_and_gradients(const ConceptGraph& graph, const GnnModel& model,
                          const std::vector<ScorableRule>& batch,
                          const std::vector<Matrix>* masks, Gradients* grads,
                          std::vector<Prediction>* predictions) {
  ForwardCache cache = forwardPass(graph, model, masks);
  const Matrix& hl = cache.out;
  size_t n = hl.cols;
  bool unary = model.hyper.kind == ModelKind::Unary;

  if (grads) {
    grads->layers.clear();
    for (const Matrix& w : model.layers)
      grads->layers.emplace_back(w.rows, w.cols);
    grads->unaryHeads.clear();
    for (const auto& [id, h] : model.unaryHeads)
      grads->unaryHeads.emplace(
          id, UnaryHead{std::vector<double>(h.a.size(), 0.0), 0.0});
    grads->binaryHeads.clear();
    for (const auto& [id, h] : model.binaryHeads)
      grads->binaryHeads.emplace(
          id, BinaryHead{std::vector<double>(h.v.size(), 0.0), 0.0});
  }
  Matrix dHL(hl.rows, hl.cols);

  double lossSum = 0.0;
  double invCount =
      batch.empty() ? 0.0 : 1.0 / static_cast<double>(batch.size());
  for (const ScorableRule& rule : batch) {
    double best = 0.0;
    const ScorableRule::Match* argmax = nullptr;
    for (const ScorableRule::Match& m : rule.matches) {
      double conf =
          unary ? conf_unary(model, m.templateId, m.nodeIndex[0], hl)
                : conf_binary(model, m.templateId, m.nodeIndex[0],
                              m.nodeIndex[1], hl);
      if (!argmax || conf > best) {
        best = conf;
        argmax = &m;
      }
    }
    double p = argmax ? best : 0.0;
    if (predictions) {
      Prediction pred;
      pred.ruleId = rule.ruleId;
      pred.probability = p;
      pred.provenance = !argmax ? Provenance::NoTemplate
                        : unary ? Provenance::Unary
                                : Provenance::Binary;
      if (argmax) pred.matchedTemplateId = argmax->templateId;
      predictions->push_back(std::move(pred));
    }
    double q = std::clamp(p, kProbEps, 1.0 - kProbEps);
    lossSum += rule.label ? -std::log(q) : -std::log(1.0 - q);
    if (!grads || !argmax) continue;
    if (p < kProbEps || p > 1.0 - kProbEps) continue;  // clamp is flat here

    // dLoss/dscore via dLoss/dp * p(1-p), already mean-reduced.
    double dLdP = rule.label ? -1.0 / q : 1.0 / (1.0 - q);
    double dLdS = invCount * dLdP * p * (1.0 - p);
    const auto& m = *argmax;
    if (unary) {
      UnaryHead& hg = grads->unaryHeads.at(m.templateId);
      const UnaryHead& h = model.unaryHeads.at(m.templateId);
      const double* x = hl.row(m.nodeIndex[0]);
      double* dx = dHL.row(m.nodeIndex[0]);
      for (size_t i = 0; i < n; ++i) {
        hg.a[i] += dLdS * x[i];
        dx[i] += dLdS * h.a[i];
      }
      hg.b += dLdS;
    } else {
      BinaryHead& hg = grads->binaryHeads.at(m.templateId);
      const BinaryHead& h = model.binaryHeads.at(m.templateId);
      const double* x = hl.row(m.nodeIndex[0]);
      const double* y = hl.row(m.nodeIndex[1]);
      double* dx = dHL.row(m.nodeIndex[0]);
      double* dy = dHL.row(m.nodeIndex[1]);
      if (model.hyper.scorer == Scorer::DistMult) {
        for (size_t i = 0; i < n; ++i) {
          hg.v[i] += dLdS * x[i] * y[i];
          dx[i] += dLdS * h.v[i] * y[i];
          dy[i] += dLdS * h.v[i] * x[i];
        }
      } else {
        double sq = 0.0;
        for (size_t i = 0; i < n; ++i) {
          double d = y[i] - x[i] - h.v[i];
          sq += d * d;
        }
        double dist = std::sqrt(sq);
        if (dist > 0.0) {
          for (size_t i = 0; i < n; ++i) {
            double d = (y[i] - x[i] - h.v[i]) / dist;
            dy[i] += dLdS * d;
            dx[i] -= dLdS * d;
            hg.v[i] -= dLdS * d;
          }
        }
        hg.b -= dLdS;
      }
    }
  }
  double loss = lossSum * invCount;
  if (!grads) return loss;

  // Back through the GCN stack; Ahat is symmetric so its transpose reuses
  // propagate().
  Matrix g = std::move(dHL);
  for (size_t l = model.layers.size(); l-- > 0;) {
    if (l + 1 < model.layers.size()) {
      const Matrix& z = cache.pre[l];
      for (size_t i = 0; i < g.a.size(); ++i)
        if (z.a[i] <= 0.0) g.a[i] = 0.0;
    }
    const Matrix& p = cache.propagated[l];
    Matrix& dW = grads->layers[l];
    // dW = P^T G
    for (size_t i = 0; i < p.rows; ++i) {
      const double* prow = p.row(i);
      const double* grow = g.row(i);
      for (size_t r = 0; r < p.cols; ++r) {
        double v = prow[r];
        if (v == 0.0) continue;
        double* drow = dW.row(r);
        for (size_t c = 0; c < g.cols; ++c) drow[c] += v * grow[c];
      }
    }
    if (l == 0) break;
    // dX = Ahat (G W^T), then through the dropout mask.
    const Matrix& w = model.layers[l];
    Matrix gw(g.rows, w.rows);
    for (size_t i = 0; i < g.rows; ++i) {
      const double* grow = g.row(i);
      double* orow = gw.row(i);
      for (size_t r = 0; r < w.rows; ++r) {
        const double* wrow = w.row(r);
        double s = 0.0;
        for (size_t c = 0; c < w.cols; ++c) s += grow[c] * wrow[c];
        orow[r] = s;
      }
    }
    Matrix dX(gw.rows, gw.cols);
    graph.propagate(gw.a.data(), dX.a.data(), gw.cols);
    if (masks) {
      const Matrix& mask = (*masks)[l];
      for (size_t i = 0; i < dX.a.size(); ++i) dX.a[i] *= mask.a[i];
    }
    g = std::move(dX);
  }
  return loss;
}

void for_each_param(
    GnnModel& model,
    const std::function<void(const std::string&, double&)>& fn) {
  for (size_t l = 0; l < model.layers.size(); ++l) {
    std::string group = "layer" + std::to_string(l);
    for (double& v : model.layers[l].a) fn(group, v);
  }
  for (auto& [id, head] : model.unaryHeads) {
    std::string group = "unary:" + id;
    for (double& v : head.a) fn(group, v);
    fn(group, head.b);
  }
  for (auto& [id, head] : model.binaryHeads) {
    std::string group = "binary:" + id;
    for (double& v : head.v) fn(group, v);
    fn(group, head.b);
  }
}

void for_each_grad(
    Gradients& grads,
    const std::function<void(const std::string&, double&)>& fn) {
  for (size_t l = 0; l < grads.layers.size(); ++l) {
    std::string group = "layer" + std::to_string(l);
    for (double& v : grads.layers[l].a) fn(group, v);
  }
  for (auto& [id, head] : grads.unaryHeads) {
    std::string group = "unary:" + id;
    for (double& v : head.a) fn(group, v);
    fn(group, head.b);
  }
  for (auto& [id, head] : grads.binaryHeads) {
    std::string group = "binary:" + id;
    for (double& v : head.v) fn(group, v);
    fn(group, head.b);
  }
}

namespace {

struct DevScore {
  double f1 = 0.0;
};

DevScore devF1(const std::vector<Prediction>& preds,
               const std::vector<int>& labels, double threshold) {
  size_t tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < preds.size(); ++i) {
    bool hat = preds[i].probability >= threshold;
    if (hat && labels[i]) ++tp;
    else if (hat) ++fp;
    else if (labels[i]) ++fn;
  }
  double precision = tp + fp ? static_cast<double>(tp) / (tp + fp) : 0.0;
  double recall = tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0;
  DevScore s;
  s.f1 = precision + recall > 0.0
             ? 2.0 * precision * recall / (precision + recall)
             : 0.0;
  return s;
}

}  // namespace

TrainResult train(const ConceptGraph& graph, const TemplateIndex& index,
                  const std::vector<std::pair<Rule, int>>& trainSet,
                  const std::vector<std::pair<Rule, int>>& devSet,
                  const GnnHyper& hyper, const TrainConfig& config) {
  if (devSet.empty()) throw std::invalid_argument("dev set is empty");
  if (config.epochs < 1) throw std::invalid_argument("epochs must be >= 1");

  TrainResult result;
  GnnModel model = GnnModel::init(graph, index, hyper, config.seed);
  size_t dropped = 0;
  std::vector<ScorableRule> trainBatch =
      resolve_batch(graph, index, trainSet, hyper.kind, &dropped);
  result.excludedPositives = dropped;
  std::vector<ScorableRule> devBatch =
      resolve_batch(graph, index, devSet, hyper.kind, nullptr);
  std::vector<int> devLabels;
  for (const ScorableRule& r : devBatch) devLabels.push_back(r.label);

  std::vector<double*> params;
  for_each_param(model, [&](const std::string&, double& v) {
    params.push_back(&v);
  });
  std::vector<double> m1(params.size(), 0.0), m2(params.size(), 0.0);
  constexpr double beta1 = 0.9, beta2 = 0.999, adamEps = 1e-8;

  result.bestDevF1 = -1.0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::vector<Matrix> masks;
    const std::vector<Matrix>* maskPtr = nullptr;
    if (hyper.dropout > 0.0) {
      masks = dropout_masks(graph, model, config.seed, epoch);
      maskPtr = &masks;
    }
    Gradients grads;
    std::vector<Prediction> trainPreds;
    double loss =
        loss_and_gradients(graph, model, trainBatch, maskPtr, &grads,
                           &trainPreds);
    if (!std::isfinite(loss)) {
      std::string culprit = "<unknown>";
      for (const Prediction& p : trainPreds)
        if (!std::isfinite(p.probability)) {
          culprit = p.ruleId;
          break;
        }
      throw TrainError(epoch, culprit, "non-finite loss");
    }
    result.epochLoss.push_back(loss);

    std::vector<double> g;
    g.reserve(params.size());
    for_each_grad(grads, [&](const std::string&, double& v) {
      g.push_back(v);
    });

    double bc1 = 1.0 - std::pow(beta1, epoch);
    double bc2 = 1.0 - std::pow(beta2, epoch);
    for (size_t i = 0; i < params.size(); ++i) {
      m1[i] = beta1 * m1[i] + (1.0 - beta1) * g[i];
      m2[i] = beta2 * m2[i] + (1.0 - beta2) * g[i] * g[i];
      double step = (m1[i] / bc1) / (std::sqrt(m2[i] / bc2) + adamEps);
      *params[i] -= config.learningRate * step +
                    config.learningRate * config.weightDecay * *params[i];
    }

    std::vector<Prediction> devPreds;
    loss_and_gradients(graph, model, devBatch, nullptr, nullptr, &devPreds);
    double f1 = devF1(devPreds, devLabels, config.devThreshold).f1;
    if (f1 > result.bestDevF1) {
      result.bestDevF1 = f1;
      result.bestEpoch = epoch;
      result.model = model;
    }
  }
  return result;
}

namespace {

const char* scorerName(Scorer s) {
  return s == Scorer::DistMult ? "distmult" : "transe";
}
const char* kindName(ModelKind k) {
  return k == ModelKind::Unary ? "unary" : "binary";
}

}  // namespace

void GnnModel::saveJson(const std::string& path) const {
  nlohmann::json j;
  j["hyper"] = {{"kind", kindName(hyper.kind)},
                {"layers", hyper.layerCount},
                {"hidden", hyper.hidden},
                {"dropout", hyper.dropout},
                {"scorer", scorerName(hyper.scorer)}};
  j["nodeHash"] = nodeHash;
  nlohmann::json layersJson = nlohmann::json::array();
  for (const Matrix& w : layers)
    layersJson.push_back(
        {{"rows", w.rows}, {"cols", w.cols}, {"data", w.a}});
  j["layers"] = std::move(layersJson);
  nlohmann::json uj = nlohmann::json::object();
  for (const auto& [id, head] : unaryHeads)
    uj[id] = {{"a", head.a}, {"b", head.b}};
  j["unaryHeads"] = std::move(uj);
  nlohmann::json bj = nlohmann::json::object();
  for (const auto& [id, head] : binaryHeads)
    bj[id] = {{"v", head.v}, {"b", head.b}};
  j["binaryHeads"] = std::move(bj);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << j.dump(1) << "\n";
}

GnnModel GnnModel::loadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  GnnModel model;
  const auto& h = j.at("hyper");
  model.hyper.kind = h.at("kind").get<std::string>() == "unary"
                         ? ModelKind::Unary
                         : ModelKind::Binary;
  model.hyper.layerCount = h.at("layers").get<int>();
  model.hyper.hidden = h.at("hidden").get<int>();
  model.hyper.dropout = h.at("dropout").get<double>();
  model.hyper.scorer = h.at("scorer").get<std::string>() == "distmult"
                           ? Scorer::DistMult
                           : Scorer::TransE;
  model.nodeHash = j.at("nodeHash").get<uint64_t>();
  for (const auto& wj : j.at("layers")) {
    Matrix w(wj.at("rows").get<size_t>(), wj.at("cols").get<size_t>());
    w.a = wj.at("data").get<std::vector<double>>();
    if (w.a.size() != w.rows * w.cols)
      throw std::runtime_error(path + ": layer shape mismatch");
    model.layers.push_back(std::move(w));
  }
  for (const auto& [id, hj] : j.at("unaryHeads").items())
    model.unaryHeads.emplace(
        id, UnaryHead{hj.at("a").get<std::vector<double>>(),
                      hj.at("b").get<double>()});
  for (const auto& [id, hj] : j.at("binaryHeads").items())
    model.binaryHeads.emplace(
        id, BinaryHead{hj.at("v").get<std::vector<double>>(),
                       hj.at("b").get<double>()});
  return model;
}

}  // namespace onto
