#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "onto/hybrid.hpp"
#include "onto/parser.hpp"
#include "onto/rng.hpp"
#include "onto/verbalize.hpp"

using namespace onto;

namespace {

struct Fixture {
  Ontology training;
  EmbeddingStore store;
  TemplateIndex index;
  ConceptGraph graph;
  GnnModel ut;
  GnnModel bt;

  Fixture()
      : training(makeTraining()),
        store(makeStore()),
        index(TemplateIndex::build(training)),
        graph(ConceptGraph::build(training.ruleList(), store,
                                  {"Physicist", "Cc", "Dd", "Px", "Qx"})),
        ut(makeModel(ModelKind::Unary)),
        bt(makeModel(ModelKind::Binary)) {}

  static Ontology makeTraining() {
    Ontology onto;
    onto.add(parse_rule(
        "Biologist and (livesIn some UK) SubClassOf UKScientist"));
    onto.add(parse_rule(
        "Geologist and (livesIn some UK) SubClassOf UKScientist"));
    // Typed-template scaffolding: A SubClassOf B with parents on each side.
    onto.add(parse_rule("A SubClassOf B"));
    onto.add(parse_rule("A SubClassOf Aprime"));
    onto.add(parse_rule("B SubClassOf Bprime"));
    onto.add(parse_rule("Cc SubClassOf Aprime"));
    onto.add(parse_rule("Dd SubClassOf Bprime"));
    // Conjunction rule whose binary template is reachable without any
    // unary template covering the same candidates.
    onto.add(parse_rule("Ta and Tb SubClassOf Tc"));
    return onto;
  }

  static EmbeddingStore makeStore() {
    Rng rng(8);
    std::map<std::string, std::vector<double>> vectors;
    for (const std::string& token :
         {"biologist", "geologist", "physicist", "uk", "ukscientist",
          "lives_in", "a", "b", "aprime", "bprime", "cc", "dd"}) {
      std::vector<double> v(4);
      for (double& x : v) x = rng.uniform(-1.0, 1.0);
      vectors[token] = v;
    }
    return EmbeddingStore::fromVectors(vectors);
  }

  GnnModel makeModel(ModelKind kind) {
    GnnHyper hyper;
    hyper.kind = kind;
    hyper.layerCount = 2;
    hyper.hidden = 4;
    GnnModel model = GnnModel::init(graph, index, hyper, 5);
    Rng rng(kind == ModelKind::Unary ? 101 : 202);
    for_each_param(model, [&](const std::string&, double& v) {
      if (v == 0.0) v = rng.uniform(-0.5, 0.5);
    });
    return model;
  }
};

class FailingClient : public NliClient {
 public:
  NliVerdict classify(const NliRequest&) override {
    ++calls;
    throw NliTransportError("wire unplugged");
  }
  int calls = 0;
};

class CountingMock : public MockNliClient {
 public:
  using MockNliClient::MockNliClient;
};

}  // namespace

TEST_CASE("prompt variant 1 matches the running example") {
  Rule r = parse_rule("CheninBlanc SubClassOf hasFlavor some Moderate");
  CHECK(build_prompt(r, 1) ==
        "Classify the text into True or False. Reply with only one word: "
        "True or False. Determine if the following statement is valid: "
        "Chenin Blanc implies something that has flavor Moderate.");
}

TEST_CASE("prompt variant prefixes") {
  CHECK(prompt_prefix(2).rfind("Assess the validity of the following "
                               "statement.", 0) == 0);
  CHECK(prompt_prefix(3).rfind("Assess the validity of the following rule.",
                               0) == 0);
  CHECK(prompt_prefix(3).find("Determine if the following rule is valid:") !=
        std::string::npos);
  CHECK(prompt_prefix(4).find("Determine if the following is a valid rule:") !=
        std::string::npos);
  CHECK(prompt_prefix(5).find("Determine if the following is valid statement:") !=
        std::string::npos);
  CHECK_THROWS_AS(prompt_prefix(0), std::invalid_argument);
  CHECK_THROWS_AS(prompt_prefix(6), std::invalid_argument);
}

TEST_CASE("prompts are byte-deterministic") {
  Rule r = parse_rule("A SubClassOf B");
  for (int variant = 1; variant <= 5; ++variant)
    CHECK(build_prompt(r, variant) == build_prompt(r, variant));
}

TEST_CASE("verdict parsing") {
  CHECK(parse_verdict("True").label == NliVerdict::Label::True);
  CHECK(parse_verdict("  false.").label == NliVerdict::Label::False);
  CHECK(parse_verdict("FALSE!").label == NliVerdict::Label::False);
  CHECK(parse_verdict("\"True\"").label == NliVerdict::Label::True);
  CHECK(parse_verdict("It depends").label == NliVerdict::Label::Unparseable);
  CHECK(parse_verdict("").label == NliVerdict::Label::Unparseable);
  CHECK(parse_verdict("42").label == NliVerdict::Label::Unparseable);
  CHECK(parse_verdict("123 true").label == NliVerdict::Label::True);
  CHECK(parse_verdict("truthful").label == NliVerdict::Label::Unparseable);
}

TEST_CASE("routing: unary match never touches the fallback") {
  Fixture fx;
  MockNliClient mock;
  HybridPredictor predictor(fx.index, fx.graph, &fx.ut, &fx.bt, &mock);
  Prediction p = predictor.predict(
      parse_rule("Physicist and (livesIn some UK) SubClassOf UKScientist"));
  CHECK(p.provenance == Provenance::Unary);
  CHECK(mock.callCount() == 0);
}

TEST_CASE("routing: binary-only match goes to the binary model") {
  Fixture fx;
  MockNliClient mock;
  HybridPredictor predictor(fx.index, fx.graph, &fx.ut, &fx.bt, &mock);
  // Px and Qx are unseen, so no unary template instantiates to this rule;
  // the untyped pair template ?X and ?Y SubClassOf Tc does.
  Rule rule = parse_rule("Px and Qx SubClassOf Tc");
  bool unaryMatch = false;
  for (const auto& m : fx.index.match(rule))
    unaryMatch |= m.kind == TemplateKind::Unary;
  REQUIRE_FALSE(unaryMatch);
  Prediction p = predictor.predict(rule);
  CHECK(p.provenance == Provenance::Binary);
  CHECK(mock.callCount() == 0);

  // Typed-matched atomic candidates are unary-covered too and route to the
  // unary model first.
  Prediction q = predictor.predict(parse_rule("Cc SubClassOf Dd"));
  CHECK(q.provenance == Provenance::Unary);
}

TEST_CASE("routing: fallback answers template-free rules") {
  Fixture fx;
  Rule unmatched = parse_rule("Qq SubClassOf zz some Ww");
  MockNliClient mock({{verbalize_rule(unmatched).statement, true}});
  HybridPredictor predictor(fx.index, fx.graph, &fx.ut, &fx.bt, &mock);
  Prediction p = predictor.predict(unmatched);
  CHECK(p.provenance == Provenance::Fallback);
  CHECK(p.probability == 1.0);
  CHECK(mock.callCount() == 1);

  // Mock default and unparseable map to 0.
  Prediction q = predictor.predict(parse_rule("Qq SubClassOf zz some Vv"));
  CHECK(q.probability == 0.0);
  CHECK(q.provenance == Provenance::Fallback);
}

TEST_CASE("routing: no stage configured leaves no-template") {
  Fixture fx;
  HybridPredictor predictor(fx.index, fx.graph, &fx.ut, nullptr, nullptr);
  Prediction p = predictor.predict(parse_rule("Qq SubClassOf zz some Ww"));
  CHECK(p.provenance == Provenance::NoTemplate);
  CHECK(p.probability == 0.0);
}

TEST_CASE("routing exclusivity across a rule mix") {
  Fixture fx;
  MockNliClient mock;
  HybridPredictor predictor(fx.index, fx.graph, &fx.ut, &fx.bt, &mock);
  std::vector<Rule> candidates{
      parse_rule("Physicist and (livesIn some UK) SubClassOf UKScientist"),
      parse_rule("Cc SubClassOf Dd"),
      parse_rule("Qq SubClassOf zz some Ww"),
      parse_rule("A SubClassOf B"),
  };
  for (const Rule& r : candidates) {
    Prediction p = predictor.predict(r);
    bool unaryMatch = false, binaryMatch = false;
    for (const auto& m : fx.index.match(r)) {
      unaryMatch |= m.kind == TemplateKind::Unary;
      binaryMatch |= m.kind == TemplateKind::Binary;
    }
    if (unaryMatch) CHECK(p.provenance == Provenance::Unary);
    else if (binaryMatch) CHECK(p.provenance == Provenance::Binary);
    else CHECK(p.provenance == Provenance::Fallback);
  }
}

TEST_CASE("offline property: erroring client never blocks matched rules") {
  Fixture fx;
  FailingClient failing;
  HybridPredictor predictor(fx.index, fx.graph, &fx.ut, &fx.bt, &failing);
  for (const auto& [id, rule] : fx.training.rules()) {
    Prediction p = predictor.predict(rule);
    CHECK(p.provenance != Provenance::Fallback);
  }
  CHECK(failing.calls == 0);

  // And a transport failure on an unmatched rule names the rule.
  CHECK_THROWS_WITH_AS(
      predictor.predict(parse_rule("Qq SubClassOf zz some Ww")),
      doctest::Contains("Qq SubClassOf zz some Ww"), NliTransportError);
}

TEST_CASE("http client round trip against a local server") {
  httplib::Server server;
  std::string lastBody;
  server.Post("/v1/complete", [&](const httplib::Request& req,
                                  httplib::Response& res) {
    lastBody = req.body;
    nlohmann::json body = nlohmann::json::parse(req.body);
    bool aboutUk =
        body["prompt"].get<std::string>().find("Physicist") !=
        std::string::npos;
    nlohmann::json out = {
        {"choices", {{{"text", aboutUk ? " True" : "False"}}}}};
    res.set_content(out.dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread serverThread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  HttpNliClient client("http://127.0.0.1:" + std::to_string(port) +
                           "/v1/complete",
                       "secret-token", 5000, "choices.0.text");
  NliRequest request;
  request.prompt = build_prompt(
      parse_rule("Physicist and (livesIn some UK) SubClassOf UKScientist"), 1);
  NliVerdict verdict = client.classify(request);
  CHECK(verdict.label == NliVerdict::Label::True);

  nlohmann::json sent = nlohmann::json::parse(lastBody);
  CHECK(sent["prompt"] == request.prompt);
  CHECK(sent["max_tokens"] == 4);
  CHECK(sent["temperature"] == 0.0);

  request.prompt = build_prompt(parse_rule("A SubClassOf B"), 1);
  CHECK(client.classify(request).label == NliVerdict::Label::False);

  server.stop();
  serverThread.join();

  // Server gone: transport error, not a silent default.
  CHECK_THROWS_AS(client.classify(request), NliTransportError);
}

TEST_CASE("statement extraction from prompts for the mock") {
  Rule r = parse_rule("CheninBlanc SubClassOf hasFlavor some Moderate");
  for (int variant = 1; variant <= 5; ++variant) {
    CHECK(MockNliClient::statementOfPrompt(build_prompt(r, variant)) ==
          "Chenin Blanc implies something that has flavor Moderate");
  }
}
