#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "onto/graph.hpp"
#include "onto/parser.hpp"
#include "onto/rng.hpp"
#include "oracles.hpp"

using namespace onto;

namespace {

EmbeddingStore unitStore(const std::vector<std::string>& names, size_t dim) {
  std::map<std::string, std::vector<double>> vectors;
  Rng rng(41);
  for (const std::string& name : names) {
    std::vector<double> v(dim);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    std::string token;
    for (char c : name)
      token += c >= 'A' && c <= 'Z' ? char(c - 'A' + 'a') : c;
    vectors[token] = v;
  }
  return EmbeddingStore::fromVectors(vectors);
}

std::vector<Rule> rules(const std::vector<std::string>& texts) {
  std::vector<Rule> out;
  for (const std::string& t : texts) out.push_back(parse_rule(t));
  return out;
}

}  // namespace

TEST_CASE("running-example graph has the hand-derived edge set") {
  std::vector<Rule> train = rules({
      "Biologist and (livesIn some UK) SubClassOf UKScientist",
      "Geologist and (livesIn some UK) SubClassOf UKScientist",
      "Chemist and (livesIn some UK) SubClassOf UKScientist",
  });
  EmbeddingStore store = unitStore(
      {"biologist", "geologist", "chemist", "uk", "ukscientist"}, 3);
  ConceptGraph g = ConceptGraph::build(train, store);

  CHECK(g.nodes() == std::vector<std::string>{"Biologist", "Chemist",
                                              "Geologist", "UK",
                                              "UKScientist"});
  std::set<std::pair<std::string, std::string>> edges;
  for (auto [u, v] : g.edges())
    edges.insert({g.nodes()[u], g.nodes()[v]});
  std::set<std::pair<std::string, std::string>> expected{
      {"Biologist", "UK"},      {"Biologist", "UKScientist"},
      {"Chemist", "UK"},        {"Chemist", "UKScientist"},
      {"Geologist", "UK"},      {"Geologist", "UKScientist"},
      {"UK", "UKScientist"},
  };
  CHECK(edges == expected);
  CHECK(edges.count({"Biologist", "Chemist"}) == 0);

  // UK's neighborhood: the three scientists plus UKScientist.
  std::vector<std::string> ukNeighbors;
  for (size_t i : g.neighborhood(*g.indexOf("UK")))
    ukNeighbors.push_back(g.nodes()[i]);
  CHECK(ukNeighbors == std::vector<std::string>{"Biologist", "Chemist",
                                                "Geologist", "UKScientist"});
}

TEST_CASE("single rule gives two nodes and one edge") {
  ConceptGraph g = ConceptGraph::build(rules({"A SubClassOf B"}),
                                       unitStore({"a", "b"}, 2));
  CHECK(g.nodeCount() == 2);
  CHECK(g.edges().size() == 1);
}

TEST_CASE("normalized adjacency of the single-edge graph is all 0.5") {
  ConceptGraph g = ConceptGraph::build(rules({"A SubClassOf B"}),
                                       unitStore({"a", "b"}, 2));
  std::vector<double> ahat = g.denseNormalizedAdjacency();
  for (double v : ahat) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));

  // propagate() agrees with the dense form.
  std::vector<double> x{1.0, 2.0, 3.0, 4.0};  // 2x2 features
  std::vector<double> y(4, 0.0);
  g.propagate(x.data(), y.data(), 2);
  CHECK(y[0] == doctest::Approx(2.0));  // 0.5*1 + 0.5*3
  CHECK(y[1] == doctest::Approx(3.0));
  CHECK(y[2] == doctest::Approx(2.0));
  CHECK(y[3] == doctest::Approx(3.0));
}

TEST_CASE("extra concepts enter as isolated nodes") {
  ConceptGraph g = ConceptGraph::build(rules({"A SubClassOf B"}),
                                       unitStore({"a", "b", "c"}, 2), {"C"});
  CHECK(g.nodeCount() == 3);
  CHECK(g.neighborhood(*g.indexOf("C")).empty());
  CHECK_THROWS_AS(g.neighborhood(99), std::out_of_range);
}

TEST_CASE("empty build is an error") {
  EmbeddingStore store = unitStore({"a"}, 2);
  CHECK_THROWS_WITH_AS(ConceptGraph::build({}, store, {}),
                       doctest::Contains("empty graph"), std::runtime_error);
}

TEST_CASE("neighborhood symmetry on a random graph") {
  Rng rng(23);
  std::vector<std::string> names;
  std::vector<std::string> tokens;
  for (int i = 0; i < 30; ++i) {
    names.push_back("n" + std::to_string(i));
    tokens.push_back(names.back());
  }
  std::vector<Rule> train;
  for (int e = 0; e < 45; ++e) {
    std::string a = names[rng.index(names.size())];
    std::string b = names[rng.index(names.size())];
    if (a == b) continue;
    train.push_back(parse_rule(a + " SubClassOf " + b));
  }
  ConceptGraph g = ConceptGraph::build(train, unitStore(tokens, 2));

  // Adjacency-transpose oracle.
  size_t n = g.nodeCount();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (size_t u = 0; u < n; ++u)
    for (size_t v : g.neighborhood(u)) adj[u][v] = true;
  for (size_t u = 0; u < n; ++u)
    for (size_t v = 0; v < n; ++v) CHECK(adj[u][v] == adj[v][u]);
}

TEST_CASE("normalized adjacency is symmetric with spectrum in [-1, 1]") {
  std::vector<Rule> train = rules({
      "A SubClassOf B",
      "B SubClassOf C",
      "C and D SubClassOf E",
      "E SubClassOf r some F",
      "G SubClassOf H",
  });
  ConceptGraph g = ConceptGraph::build(
      train, unitStore({"a", "b", "c", "d", "e", "f", "g", "h"}, 2));
  size_t n = g.nodeCount();
  REQUIRE(n <= 10);
  std::vector<double> ahat = g.denseNormalizedAdjacency();

  oracle::Mat m(n, n);
  m.a = ahat;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      CHECK(m.at(i, j) == doctest::Approx(m.at(j, i)).epsilon(1e-15));
  for (double eig : oracle::symmetricEigenvalues(m)) {
    CHECK(eig >= -1.0 - 1e-9);
    CHECK(eig <= 1.0 + 1e-9);
  }
}

TEST_CASE("build is deterministic and monotone under rule addition") {
  std::vector<Rule> base = rules({"A SubClassOf B", "B SubClassOf C"});
  EmbeddingStore store = unitStore({"a", "b", "c", "d"}, 2);
  ConceptGraph g1 = ConceptGraph::build(base, store);
  ConceptGraph g2 = ConceptGraph::build(base, store);
  CHECK(g1.nodes() == g2.nodes());
  CHECK(g1.edges() == g2.edges());
  CHECK(g1.nodeHash() == g2.nodeHash());

  std::vector<Rule> more = base;
  more.push_back(parse_rule("C SubClassOf D"));
  ConceptGraph g3 = ConceptGraph::build(more, store);
  for (const std::string& name : g1.nodes())
    CHECK(g3.indexOf(name).has_value());
  std::set<std::pair<std::string, std::string>> before, after;
  for (auto [u, v] : g1.edges()) before.insert({g1.nodes()[u], g1.nodes()[v]});
  for (auto [u, v] : g3.edges()) after.insert({g3.nodes()[u], g3.nodes()[v]});
  for (const auto& e : before) CHECK(after.count(e) == 1);
}

TEST_CASE("graph json round trip") {
  std::vector<Rule> train = rules({"A SubClassOf B", "B SubClassOf C"});
  ConceptGraph g = ConceptGraph::build(train, unitStore({"a", "b", "c"}, 3));
  g.saveJson("graph_roundtrip.json");
  ConceptGraph loaded = ConceptGraph::loadJson("graph_roundtrip.json");
  CHECK(loaded.nodes() == g.nodes());
  CHECK(loaded.edges() == g.edges());
  CHECK(loaded.features() == g.features());
  CHECK(loaded.nodeHash() == g.nodeHash());
}

TEST_CASE("features come from the resolver") {
  EmbeddingStore store =
      EmbeddingStore::fromVectors({{"red", {1, 0}}, {"wine", {0, 1}}});
  ConceptGraph g =
      ConceptGraph::build(rules({"RedWine SubClassOf Wine"}), store);
  size_t redWine = *g.indexOf("RedWine");
  CHECK(g.features()[redWine * 2 + 0] == doctest::Approx(0.5));
  CHECK(g.features()[redWine * 2 + 1] == doctest::Approx(0.5));
}
