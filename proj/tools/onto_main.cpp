// Command-line front end tying the pipeline together: split a rule file,
// generate negatives, extract templates, build the concept graph, train
// and run the template GNN, and score benchmarks.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "onto/entail.hpp"
#include "onto/eval.hpp"
#include "onto/hybrid.hpp"
#include "onto/parser.hpp"
#include "onto/synth.hpp"
#include "onto/verbalize.hpp"

namespace {

using namespace onto;

std::vector<std::pair<Rule, int>> asLabeledPairs(
    const std::vector<LabeledRule>& rows) {
  std::vector<std::pair<Rule, int>> out;
  out.reserve(rows.size());
  for (const LabeledRule& r : rows) out.emplace_back(r.rule, r.label);
  return out;
}

Ontology ontologyOfPositives(const std::vector<LabeledRule>& rows) {
  Ontology onto;
  for (const LabeledRule& r : rows)
    if (r.label == 1) onto.add(r.rule);
  return onto;
}

void writeText(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ontology completion toolkit"};
  app.require_subcommand(1);

  // --- split ---------------------------------------------------------
  std::string inFile, outDir, vectorsFile, outFile;
  uint64_t seed = 7;
  double testFraction = 0.20, devFraction = 0.10;
  bool largeOntology = false;
  auto* split = app.add_subcommand("split", "split a .dlr file into train/dev/test");
  split->add_option("--in", inFile, "ontology .dlr")->required();
  split->add_option("--out-dir", outDir, "output directory")->required();
  split->add_option("--seed", seed);
  split->add_option("--test-fraction", testFraction);
  split->add_option("--dev-fraction", devFraction);
  split->add_flag("--large", largeOntology, "use the 5% test fraction");

  // --- verbalize -----------------------------------------------------
  auto* verbalize = app.add_subcommand("verbalize", "emit rule_id\\tstatement");
  std::string verbIn, verbOut;
  bool lowerContradiction = false;
  verbalize->add_option("--in", verbIn)->required();
  verbalize->add_option("--out", verbOut)->required();
  verbalize->add_flag("--lowercase-contradiction", lowerContradiction);

  // --- extract-templates ----------------------------------------------
  auto* extract = app.add_subcommand("extract-templates",
                                     "emit kind\\tid\\twitnesses");
  std::string trainFile, templatesFile;
  extract->add_option("--train", trainFile)->required();
  extract->add_option("--out", templatesFile)->required();

  // --- build-graph ----------------------------------------------------
  auto* buildGraph = app.add_subcommand("build-graph",
                                        "concept co-occurrence graph JSON");
  std::string graphFile, extraFile;
  buildGraph->add_option("--train", trainFile)->required();
  buildGraph->add_option("--vectors", vectorsFile)->required();
  buildGraph->add_option("--out", graphFile)->required();
  buildGraph->add_option("--extra", extraFile,
                         "file of extra concept names, one per line");

  // --- embeddings -----------------------------------------------------
  auto* embeddings = app.add_subcommand("embeddings", "embedding store tools");
  auto* embInfo = embeddings->add_subcommand("info", "describe a vector file");
  embInfo->add_option("--file", vectorsFile)->required();

  // --- gen-negatives --------------------------------------------------
  auto* genNeg = app.add_subcommand("gen-negatives",
                                    "corruption negatives for a train split");
  std::string excludeA, excludeB;
  genNeg->add_option("--train", trainFile)->required();
  genNeg->add_option("--out", outFile)->required();
  genNeg->add_option("--seed", seed);
  genNeg->add_option("--exclude", excludeA, "positives to avoid (dev .dlr)");
  genNeg->add_option("--exclude2", excludeB, "positives to avoid (test .dlr)");

  // --- gen-hard-negatives ----------------------------------------------
  auto* genHard = app.add_subcommand(
      "gen-hard-negatives", "similarity-corrupted annotation worksheet");
  std::string testFile, poolFile;
  size_t topK = 5, perPositive = 1;
  genHard->add_option("--test", testFile)->required();
  genHard->add_option("--vectors", vectorsFile)->required();
  genHard->add_option("--pool", poolFile, ".dlr supplying the concept pool")
      ->required();
  genHard->add_option("--out", outFile)->required();
  genHard->add_option("--k", topK);
  genHard->add_option("--per-positive", perPositive);
  genHard->add_option("--seed", seed);

  // --- finalize-annotations ---------------------------------------------
  auto* finalize = app.add_subcommand("finalize-annotations",
                                      "keep both-neg candidates, report kappa");
  std::string worksheetFile;
  finalize->add_option("--in", worksheetFile)->required();
  finalize->add_option("--out", outFile)->required();

  // --- train ------------------------------------------------------------
  auto* trainCmd = app.add_subcommand("train", "train a template GNN");
  std::string devFile, modelFile, mode = "ut", scorerName = "distmult";
  int layers = 2, hidden = 16, epochs = 200;
  double dropout = 0.5, learningRate = 1e-2, weightDecay = 5e-2;
  trainCmd->add_option("--graph", graphFile)->required();
  trainCmd->add_option("--templates", templatesFile)->required();
  trainCmd->add_option("--train", trainFile, "labeled tsv")->required();
  trainCmd->add_option("--dev", devFile, "labeled tsv")->required();
  trainCmd->add_option("--mode", mode, "ut|bt");
  trainCmd->add_option("--scorer", scorerName, "distmult|transe");
  trainCmd->add_option("--seed", seed);
  trainCmd->add_option("--layers", layers);
  trainCmd->add_option("--hidden", hidden);
  trainCmd->add_option("--dropout", dropout);
  trainCmd->add_option("--epochs", epochs);
  trainCmd->add_option("--learning-rate", learningRate);
  trainCmd->add_option("--weight-decay", weightDecay);
  trainCmd->add_option("--out", modelFile)->required();

  // --- predict -----------------------------------------------------------
  auto* predictCmd = app.add_subcommand("predict", "score candidate rules");
  std::string candidatesFile, utFile, btFile, fallbackMode = "none",
              truthFile;
  int promptVariant = 1;
  predictCmd->add_option("--candidates", candidatesFile)->required();
  predictCmd->add_option("--graph", graphFile)->required();
  predictCmd->add_option("--templates", templatesFile)->required();
  predictCmd->add_option("--train", trainFile, "labeled tsv or .dlr of train positives")
      ->required();
  predictCmd->add_option("--ut", utFile, "unary model json");
  predictCmd->add_option("--bt", btFile, "binary model json");
  predictCmd->add_option("--fallback", fallbackMode, "none|mock|http");
  predictCmd->add_option("--mock-truth", truthFile);
  predictCmd->add_option("--prompt-variant", promptVariant);
  predictCmd->add_option("--out", outFile)->required();

  // --- evaluate ------------------------------------------------------------
  auto* evaluateCmd = app.add_subcommand("evaluate", "F1 of predictions vs labels");
  std::string predsFile, labelsFile;
  double threshold = 0.5;
  evaluateCmd->add_option("--preds", predsFile)->required();
  evaluateCmd->add_option("--labels", labelsFile, "labeled tsv")->required();
  evaluateCmd->add_option("--threshold", threshold);

  // --- bench / compare-scorers / synth --------------------------------------
  auto* bench = app.add_subcommand("bench", "end-to-end benchmark");
  std::string configFile, reportPrefix;
  bench->add_option("--ontology", inFile)->required();
  bench->add_option("--vectors", vectorsFile)->required();
  bench->add_option("--config", configFile);
  bench->add_option("--out", reportPrefix, "report prefix (.tsv/.txt)");

  auto* compare = app.add_subcommand("compare-scorers",
                                     "distmult vs transe on the BT model");
  compare->add_option("--ontology", inFile)->required();
  compare->add_option("--vectors", vectorsFile)->required();
  compare->add_option("--config", configFile);

  auto* synth = app.add_subcommand("synth", "generate the planted benchmark");
  size_t families = 20, dim = 24;
  synth->add_option("--out-dir", outDir)->required();
  synth->add_option("--seed", seed);
  synth->add_option("--families", families);
  synth->add_option("--dim", dim);

  CLI11_PARSE(app, argc, argv);

  try {
    if (split->parsed()) {
      Ontology onto = load_ontology(inFile);
      SplitSpec spec;
      spec.testFraction = largeOntology ? 0.05 : testFraction;
      spec.devFraction = devFraction;
      spec.seed = seed;
      SplitResult result = split_rules(onto, spec);
      save_rules(result.train, outDir + "/train.dlr");
      save_rules(result.dev, outDir + "/dev.dlr");
      save_rules(result.test, outDir + "/test.dlr");
      std::cout << "train " << result.train.size() << ", dev "
                << result.dev.size() << ", test " << result.test.size()
                << "\n";
    } else if (verbalize->parsed()) {
      Ontology onto = load_ontology(verbIn);
      std::ofstream out(verbOut);
      if (!out) throw std::runtime_error("cannot write " + verbOut);
      VerbalizerOptions options;
      options.lowercaseContradiction = lowerContradiction;
      for (const auto& [id, rule] : onto.rules())
        out << id << "\t" << verbalize_rule(rule, options).statement << "\n";
    } else if (extract->parsed()) {
      Ontology onto = load_ontology(trainFile);
      TemplateIndex index = TemplateIndex::build(onto);
      index.saveTsv(templatesFile);
      std::cout << index.unary().size() << " unary, " << index.binary().size()
                << " binary templates ("
                << index.atomicRulesWithoutParents()
                << " atomic rules without parents)\n";
    } else if (buildGraph->parsed()) {
      Ontology onto = load_ontology(trainFile);
      EmbeddingStore store = EmbeddingStore::load(vectorsFile, &std::cerr);
      std::set<std::string> extras;
      if (!extraFile.empty()) {
        std::ifstream in(extraFile);
        if (!in) throw std::runtime_error("cannot open " + extraFile);
        std::string name;
        while (std::getline(in, name))
          if (!name.empty()) extras.insert(name);
      }
      ConceptGraph graph = ConceptGraph::build(onto.ruleList(), store, extras);
      graph.saveJson(graphFile);
      std::cout << graph.nodeCount() << " nodes, " << graph.edges().size()
                << " edges\n";
    } else if (embInfo->parsed()) {
      EmbeddingStore store = EmbeddingStore::load(vectorsFile, &std::cerr);
      std::cout << store.size() << " vectors, dim " << store.dim() << "\n";
    } else if (genNeg->parsed()) {
      Ontology onto = load_ontology(trainFile);
      std::set<std::string> exclude;
      for (const std::string& path : {excludeA, excludeB}) {
        if (path.empty()) continue;
        for (const auto& [id, r] : load_ontology(path).rules())
          exclude.insert(id);
      }
      for (const auto& [id, r] : onto.rules()) exclude.insert(id);
      std::vector<LabeledRule> rows;
      for (const Rule& r : onto.ruleList())
        rows.push_back({r, 1, Origin::Ontology});
      for (const LabeledRule& n :
           gen_training_negatives(onto.ruleList(), seed, exclude))
        rows.push_back(n);
      save_labeled_tsv(rows, outFile);
      std::cout << onto.size() << " positives, " << rows.size() - onto.size()
                << " negatives\n";
    } else if (genHard->parsed()) {
      Ontology test = load_ontology(testFile);
      Ontology poolOnto = load_ontology(poolFile);
      EmbeddingStore store = EmbeddingStore::load(vectorsFile, &std::cerr);
      std::set<std::string> forbidden;
      for (const auto& [id, r] : poolOnto.rules()) forbidden.insert(id);
      for (const auto& [id, r] : test.rules()) forbidden.insert(id);
      HardNegativeResult result = gen_hard_negatives(
          test.ruleList(), store, poolOnto.atomicConcepts(), topK, perPositive,
          seed, forbidden);
      write_annotation_worksheet(result.candidates, outFile);
      std::cout << result.candidates.size() << " candidates, "
                << result.skippedUnresolvable.size() << " skipped\n";
    } else if (finalize->parsed()) {
      AnnotationOutcome outcome =
          finalize_annotations(read_annotation_tsv(worksheetFile));
      std::ofstream out(outFile);
      if (!out) throw std::runtime_error("cannot write " + outFile);
      for (const std::string& id : outcome.keptRuleIds)
        out << id << "\t0\thard-negative\n";
      std::cout << "kept " << outcome.keptRuleIds.size() << "/"
                << outcome.total << ", kappa " << outcome.kappa << "\n";
    } else if (trainCmd->parsed()) {
      ConceptGraph graph = ConceptGraph::loadJson(graphFile);
      std::vector<LabeledRule> trainRows = load_labeled_tsv(trainFile);
      std::vector<LabeledRule> devRows = load_labeled_tsv(devFile);
      Ontology trainOnto = ontologyOfPositives(trainRows);
      TemplateIndex index = TemplateIndex::loadTsv(templatesFile, trainOnto);
      GnnHyper hyper;
      hyper.kind = mode == "bt" ? ModelKind::Binary : ModelKind::Unary;
      hyper.layerCount = layers;
      hyper.hidden = hidden;
      hyper.dropout = dropout;
      hyper.scorer = scorerName == "transe" ? Scorer::TransE : Scorer::DistMult;
      TrainConfig config;
      config.learningRate = learningRate;
      config.weightDecay = weightDecay;
      config.epochs = epochs;
      config.seed = seed;
      TrainResult result = train(graph, index, asLabeledPairs(trainRows),
                                 asLabeledPairs(devRows), hyper, config);
      result.model.saveJson(modelFile);
      std::cout << "best dev F1 " << result.bestDevF1 << " at epoch "
                << result.bestEpoch << " (" << result.excludedPositives
                << " unmatched train positives excluded)\n";
    } else if (predictCmd->parsed()) {
      ConceptGraph graph = ConceptGraph::loadJson(graphFile);
      std::vector<LabeledRule> trainRows = load_labeled_tsv(trainFile);
      Ontology trainOnto = ontologyOfPositives(trainRows);
      TemplateIndex index = TemplateIndex::loadTsv(templatesFile, trainOnto);
      std::optional<GnnModel> ut, bt;
      if (!utFile.empty()) ut = GnnModel::loadJson(utFile);
      if (!btFile.empty()) bt = GnnModel::loadJson(btFile);
      std::unique_ptr<NliClient> client;
      if (fallbackMode == "mock")
        client = std::make_unique<MockNliClient>(
            MockNliClient::fromTruthFile(truthFile));
      else if (fallbackMode == "http")
        client = std::make_unique<HttpNliClient>(HttpNliClient::fromEnv());
      HybridPredictor predictor(index, graph, ut ? &*ut : nullptr,
                                bt ? &*bt : nullptr, client.get(),
                                promptVariant);
      Ontology candidates = load_ontology(candidatesFile);
      std::ofstream out(outFile);
      if (!out) throw std::runtime_error("cannot write " + outFile);
      char buf[32];
      for (const auto& [id, rule] : candidates.rules()) {
        Prediction p = predictor.predict(rule);
        std::snprintf(buf, sizeof buf, "%.6f", p.probability);
        out << id << "\t" << buf << "\t" << provenance_name(p.provenance)
            << "\t" << (p.matchedTemplateId ? *p.matchedTemplateId : "-")
            << "\n";
      }
    } else if (evaluateCmd->parsed()) {
      std::map<std::string, double> probs;
      std::ifstream in(predsFile);
      if (!in) throw std::runtime_error("cannot open " + predsFile);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string id, prob;
        std::getline(ss, id, '\t');
        std::getline(ss, prob, '\t');
        probs[id] = std::stod(prob);
      }
      std::vector<double> p;
      std::vector<int> y;
      for (const LabeledRule& row : load_labeled_tsv(labelsFile)) {
        auto it = probs.find(row.rule.id());
        if (it == probs.end())
          throw std::runtime_error("no prediction for " + row.rule.id());
        p.push_back(it->second);
        y.push_back(row.label);
      }
      F1Result r = f1_score(p, y, threshold);
      std::cout << "precision " << r.precision << ", recall " << r.recall
                << ", f1 " << r.f1 << " (tp " << r.tp << ", fp " << r.fp
                << ", fn " << r.fn << ", tn " << r.tn << ")\n";
    } else if (bench->parsed()) {
      BenchConfig config = configFile.empty() ? BenchConfig{}
                                              : BenchConfig::fromFile(configFile);
      std::unique_ptr<NliClient> client = make_fallback_client(config);
      EvalReport report =
          run_benchmark(inFile, vectorsFile, config, client.get());
      std::cout << report.toText();
      if (!reportPrefix.empty()) {
        writeText(reportPrefix + ".tsv", report.toTsv());
        writeText(reportPrefix + ".txt", report.toText());
      }
    } else if (compare->parsed()) {
      BenchConfig config = configFile.empty() ? BenchConfig{}
                                              : BenchConfig::fromFile(configFile);
      ScorerComparison cmp = compare_scorers(inFile, vectorsFile, config);
      std::cout << "distmult BT F1: " << cmp.distmultF1 << "\n"
                << "transe   BT F1: " << cmp.transeF1 << "\n";
    } else if (synth->parsed()) {
      SynthSpec spec;
      spec.families = families;
      spec.dim = dim;
      spec.seed = seed;
      SynthPaths paths = generate_synthetic(spec, outDir);
      std::cout << "wrote " << paths.rules << ", " << paths.vectors << ", "
                << paths.truth << ", " << paths.negatives << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
