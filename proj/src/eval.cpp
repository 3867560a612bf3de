#include "onto/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "onto/entail.hpp"
#include "onto/hybrid.hpp"
#include "onto/parser.hpp"

namespace onto {

F1Result f1_score(const std::vector<double>& probs,
                  const std::vector<int>& labels, double threshold) {
  if (probs.size() != labels.size())
    throw std::invalid_argument("f1: probabilities and labels differ in length");
  F1Result r;
  for (size_t i = 0; i < probs.size(); ++i) {
    bool hat = probs[i] >= threshold;
    if (hat && labels[i]) ++r.tp;
    else if (hat && !labels[i]) ++r.fp;
    else if (!hat && labels[i]) ++r.fn;
    else ++r.tn;
  }
  r.precision = r.tp + r.fp ? static_cast<double>(r.tp) / (r.tp + r.fp) : 0.0;
  r.recall = r.tp + r.fn ? static_cast<double>(r.tp) / (r.tp + r.fn) : 0.0;
  r.f1 = r.precision + r.recall > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

double best_threshold(const std::vector<double>& probs,
                      const std::vector<int>& labels) {
  std::vector<double> candidates = probs;
  candidates.push_back(0.5);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  double best = 0.5;
  double bestF1 = f1_score(probs, labels, 0.5).f1;
  for (double t : candidates) {
    double f1 = f1_score(probs, labels, t).f1;
    if (f1 > bestF1) {
      bestF1 = f1;
      best = t;
    }
  }
  return best;
}

namespace {

std::string formatMetric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

const char* kProvenanceKeys[] = {"unary", "binary", "fallback", "no-template"};

}  // namespace

std::string EvalReport::toTsv() const {
  std::ostringstream out;
  out << "system\tprecision\trecall\tf1\ttp\tfp\tfn\ttn\tthreshold";
  for (const char* key : kProvenanceKeys) out << "\t" << key;
  out << "\n";
  for (const auto& [name, sys] : systems) {
    out << name << "\t" << formatMetric(sys.metrics.precision) << "\t"
        << formatMetric(sys.metrics.recall) << "\t"
        << formatMetric(sys.metrics.f1) << "\t" << sys.metrics.tp << "\t"
        << sys.metrics.fp << "\t" << sys.metrics.fn << "\t" << sys.metrics.tn
        << "\t" << formatMetric(sys.threshold);
    for (const char* key : kProvenanceKeys) {
      auto it = sys.provenance.find(key);
      out << "\t" << (it == sys.provenance.end() ? 0 : it->second);
    }
    out << "\n";
  }
  return out.str();
}

std::string EvalReport::toText() const {
  std::ostringstream out;
  out << "benchmark report (seed " << seed << ")\n";
  for (const auto& [key, value] : configEcho)
    out << "  " << key << " = " << value << "\n";
  for (const auto& [name, sys] : systems) {
    out << name << ": F1 " << formatMetric(sys.metrics.f1) << " (P "
        << formatMetric(sys.metrics.precision) << ", R "
        << formatMetric(sys.metrics.recall) << ") tp=" << sys.metrics.tp
        << " fp=" << sys.metrics.fp << " fn=" << sys.metrics.fn
        << " tn=" << sys.metrics.tn << " @" << formatMetric(sys.threshold)
        << "\n    handled:";
    for (const char* key : kProvenanceKeys) {
      auto it = sys.provenance.find(key);
      out << " " << key << "=" << (it == sys.provenance.end() ? 0 : it->second);
    }
    out << "\n";
  }
  return out.str();
}

BenchConfig BenchConfig::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  BenchConfig c;
  std::string line;
  size_t lineNo = 0;
  auto trim = [](std::string s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineNo;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineNo) +
                               ": expected key = value");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key == "seed") c.seed = std::stoull(value);
    else if (key == "test_fraction") c.testFraction = std::stod(value);
    else if (key == "large_ontology") c.largeOntology = value == "true" || value == "1";
    else if (key == "dev_fraction") c.devFraction = std::stod(value);
    else if (key == "layers") c.layers = std::stoi(value);
    else if (key == "hidden") c.hidden = std::stoi(value);
    else if (key == "dropout") c.dropout = std::stod(value);
    else if (key == "scorer") c.scorer = value == "transe" ? Scorer::TransE : Scorer::DistMult;
    else if (key == "epochs") c.epochs = std::stoi(value);
    else if (key == "learning_rate") c.learningRate = std::stod(value);
    else if (key == "weight_decay") c.weightDecay = std::stod(value);
    else if (key == "prompt_variant") c.promptVariant = std::stoi(value);
    else if (key == "threshold") c.threshold = std::stod(value);
    else if (key == "tune_threshold") c.tuneThreshold = value == "true" || value == "1";
    else if (key == "fallback") c.fallbackMode = value;
    else if (key == "mock_truth_file") c.mockTruthFile = value;
    else if (key == "test_negatives_file") c.testNegativesFile = value;
    else if (key == "hard_neg_per_positive") c.hardNegPerPositive = std::stoull(value);
    else
      throw std::runtime_error(path + ":" + std::to_string(lineNo) +
                               ": unknown key '" + key + "'");
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> BenchConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("seed", std::to_string(seed));
  out.emplace_back("test_fraction", formatMetric(effectiveTestFraction()));
  out.emplace_back("dev_fraction", formatMetric(devFraction));
  out.emplace_back("layers", std::to_string(layers));
  out.emplace_back("hidden", std::to_string(hidden));
  out.emplace_back("dropout", formatMetric(dropout));
  out.emplace_back("scorer",
                   scorer == Scorer::DistMult ? "distmult" : "transe");
  out.emplace_back("epochs", std::to_string(epochs));
  out.emplace_back("learning_rate", formatMetric(learningRate));
  out.emplace_back("weight_decay", formatMetric(weightDecay));
  out.emplace_back("prompt_variant", std::to_string(promptVariant));
  out.emplace_back("threshold", formatMetric(threshold));
  out.emplace_back("tune_threshold", tuneThreshold ? "true" : "false");
  out.emplace_back("fallback", fallbackMode);
  return out;
}

std::unique_ptr<NliClient> make_fallback_client(const BenchConfig& config) {
  if (config.fallbackMode == "none") return nullptr;
  if (config.fallbackMode == "mock") {
    if (config.mockTruthFile.empty())
      throw std::runtime_error("fallback 'mock' needs mock_truth_file");
    return std::make_unique<MockNliClient>(
        MockNliClient::fromTruthFile(config.mockTruthFile));
  }
  if (config.fallbackMode == "http")
    return std::make_unique<HttpNliClient>(HttpNliClient::fromEnv());
  throw std::runtime_error("unknown fallback mode: " + config.fallbackMode);
}

namespace {

struct BenchData {
  Ontology ontology;
  EmbeddingStore store;
  SplitResult split;
  std::vector<std::pair<Rule, int>> trainSet, devSet;
  std::vector<Rule> testRules;
  std::vector<int> testLabels;
  TemplateIndex index;
  ConceptGraph graph;
};

std::vector<LabeledRule> corruptionNegatives(const std::vector<Rule>& corrupt,
                                             const std::vector<Rule>& entailBase,
                                             uint64_t seed,
                                             const std::set<std::string>& exclude) {
  // Generate against the corruption targets, then re-filter against the
  // wider entailment base.
  std::vector<LabeledRule> raw = gen_training_negatives(corrupt, seed, exclude);
  EntailmentChecker checker(entailBase);
  std::vector<LabeledRule> out;
  for (LabeledRule& c : raw)
    if (!checker.entails(c.rule)) out.push_back(std::move(c));
  return out;
}

BenchData prepare(const std::string& ontologyFile,
                  const std::string& vectorsFile, const BenchConfig& config) {
  BenchData data;
  data.ontology = load_ontology(ontologyFile);
  data.store = EmbeddingStore::load(vectorsFile);

  SplitSpec splitSpec;
  splitSpec.testFraction = config.effectiveTestFraction();
  splitSpec.devFraction = config.devFraction;
  splitSpec.seed = config.seed;
  data.split = split_rules(data.ontology, splitSpec);

  std::set<std::string> allPositiveIds;
  for (const auto& [id, r] : data.ontology.rules()) allPositiveIds.insert(id);

  std::vector<LabeledRule> trainNegs = gen_training_negatives(
      data.split.train, config.seed, allPositiveIds);
  std::vector<Rule> trainDev = data.split.train;
  trainDev.insert(trainDev.end(), data.split.dev.begin(),
                  data.split.dev.end());
  std::vector<LabeledRule> devNegs = corruptionNegatives(
      data.split.dev, trainDev, config.seed + 1, allPositiveIds);

  for (const Rule& r : data.split.train) data.trainSet.emplace_back(r, 1);
  for (const LabeledRule& n : trainNegs) data.trainSet.emplace_back(n.rule, 0);
  for (const Rule& r : data.split.dev) data.devSet.emplace_back(r, 1);
  for (const LabeledRule& n : devNegs) data.devSet.emplace_back(n.rule, 0);

  std::set<std::string> testIds;
  for (const Rule& r : data.split.test) {
    data.testRules.push_back(r);
    data.testLabels.push_back(1);
    testIds.insert(r.id());
  }
  if (!config.testNegativesFile.empty()) {
    std::set<std::string> devIds;
    for (const Rule& r : data.split.dev) devIds.insert(r.id());
    for (const PlantedNegative& p :
         load_planted_negatives(config.testNegativesFile)) {
      if (p.sourceRuleId.empty() || testIds.count(p.sourceRuleId)) {
        data.testRules.push_back(p.rule);
        data.testLabels.push_back(0);
      } else if (devIds.count(p.sourceRuleId)) {
        // Dev checkpointing tracks the test distribution best when the dev
        // negatives are drawn from the same annotated pool.
        data.devSet.emplace_back(p.rule, 0);
      }
    }
  } else {
    std::vector<Rule> allPositives = data.ontology.ruleList();
    for (const LabeledRule& n :
         corruptionNegatives(data.split.test, allPositives, config.seed + 2,
                             allPositiveIds)) {
      data.testRules.push_back(n.rule);
      data.testLabels.push_back(0);
    }
  }

  Ontology trainOntology;
  for (const Rule& r : data.split.train) trainOntology.add(r);
  data.index = TemplateIndex::build(trainOntology);

  std::set<std::string> extras;
  for (const auto& [r, label] : data.trainSet)
    for (const std::string& a : r.atoms()) extras.insert(a);
  for (const auto& [r, label] : data.devSet)
    for (const std::string& a : r.atoms()) extras.insert(a);
  for (const Rule& r : data.testRules)
    for (const std::string& a : r.atoms()) extras.insert(a);
  data.graph = ConceptGraph::build(data.split.train, data.store, extras);
  return data;
}

GnnHyper hyperOf(const BenchConfig& config, ModelKind kind) {
  GnnHyper h;
  h.kind = kind;
  h.layerCount = config.layers;
  h.hidden = config.hidden;
  h.dropout = config.dropout;
  h.scorer = config.scorer;
  return h;
}

TrainConfig trainConfigOf(const BenchConfig& config) {
  TrainConfig t;
  t.learningRate = config.learningRate;
  t.weightDecay = config.weightDecay;
  t.epochs = config.epochs;
  t.seed = config.seed;
  return t;
}

SystemResult evaluateSystem(const BenchData& data,
                            const HybridPredictor& predictor,
                            const BenchConfig& config,
                            const std::vector<std::pair<Rule, int>>& devSet) {
  SystemResult out;
  std::vector<Prediction> preds = predictor.predictAll(data.testRules);
  std::vector<double> probs;
  probs.reserve(preds.size());
  for (const Prediction& p : preds) {
    probs.push_back(p.probability);
    out.provenance[provenance_name(p.provenance)]++;
  }
  for (const char* key : kProvenanceKeys) out.provenance.emplace(key, 0);
  double threshold = config.threshold;
  if (config.tuneThreshold) {
    std::vector<Rule> devRules;
    std::vector<int> devLabels;
    for (const auto& [r, label] : devSet) {
      devRules.push_back(r);
      devLabels.push_back(label);
    }
    std::vector<double> devProbs;
    for (const Prediction& p : predictor.predictAll(devRules))
      devProbs.push_back(p.probability);
    threshold = best_threshold(devProbs, devLabels);
  }
  out.threshold = threshold;
  out.metrics = f1_score(probs, data.testLabels, threshold);
  return out;
}

}  // namespace

EvalReport run_benchmark(const std::string& ontologyFile,
                         const std::string& vectorsFile,
                         const BenchConfig& config, NliClient* fallback) {
  BenchData data = prepare(ontologyFile, vectorsFile, config);

  TrainResult ut = train(data.graph, data.index, data.trainSet, data.devSet,
                         hyperOf(config, ModelKind::Unary),
                         trainConfigOf(config));
  TrainResult bt = train(data.graph, data.index, data.trainSet, data.devSet,
                         hyperOf(config, ModelKind::Binary),
                         trainConfigOf(config));

  EvalReport report;
  report.seed = config.seed;
  report.configEcho = config.echo();
  report.configEcho.emplace_back("ontology", ontologyFile);
  report.configEcho.emplace_back("vectors", vectorsFile);
  report.configEcho.emplace_back(
      "excluded_unmatched_train_positives_ut",
      std::to_string(ut.excludedPositives));
  report.configEcho.emplace_back(
      "excluded_unmatched_train_positives_bt",
      std::to_string(bt.excludedPositives));

  report.systems.emplace(
      "GCN (UT)",
      evaluateSystem(data,
                     HybridPredictor(data.index, data.graph, &ut.model,
                                     nullptr, nullptr, config.promptVariant),
                     config, data.devSet));
  report.systems.emplace(
      "GCN (BT)",
      evaluateSystem(data,
                     HybridPredictor(data.index, data.graph, nullptr,
                                     &bt.model, nullptr, config.promptVariant),
                     config, data.devSet));
  report.systems.emplace(
      "GCN (UT+BT)",
      evaluateSystem(data,
                     HybridPredictor(data.index, data.graph, &ut.model,
                                     &bt.model, nullptr, config.promptVariant),
                     config, data.devSet));
  if (fallback) {
    report.systems.emplace(
        "GCN (UT+BT) + NLI",
        evaluateSystem(
            data,
            HybridPredictor(data.index, data.graph, &ut.model, &bt.model,
                            fallback, config.promptVariant),
            config, data.devSet));
  }
  return report;
}

ScorerComparison compare_scorers(const std::string& ontologyFile,
                                 const std::string& vectorsFile,
                                 const BenchConfig& config) {
  ScorerComparison cmp;
  BenchConfig c = config;
  c.scorer = Scorer::DistMult;
  cmp.distmult = run_benchmark(ontologyFile, vectorsFile, c, nullptr);
  c.scorer = Scorer::TransE;
  cmp.transe = run_benchmark(ontologyFile, vectorsFile, c, nullptr);
  cmp.distmultF1 = cmp.distmult.systems.at("GCN (BT)").metrics.f1;
  cmp.transeF1 = cmp.transe.systems.at("GCN (BT)").metrics.f1;
  return cmp;
}

}  // namespace onto
