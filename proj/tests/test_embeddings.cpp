#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "onto/embeddings.hpp"
#include "onto/rng.hpp"
#include "oracles.hpp"

using namespace onto;

namespace {

std::string writeTemp(const std::string& name, const std::string& content) {
  std::ofstream out(name);
  out << content;
  return name;
}

}  // namespace

TEST_CASE("load a small fixture") {
  std::string path = writeTemp("vecs_small.txt",
                               "3 2\n"
                               "red 1 0\n"
                               "wine 0 1\n"
                               "dry 0.5 0.5\n");
  EmbeddingStore store = EmbeddingStore::load(path);
  CHECK(store.dim() == 2);
  CHECK(store.size() == 3);
  CHECK((*store.find("red"))[0] == 1.0);
}

TEST_CASE("duplicate tokens keep the first occurrence and warn") {
  std::string path = writeTemp("vecs_dup.txt",
                               "3 2\n"
                               "red 1 0\n"
                               "red 9 9\n"
                               "wine 0 1\n");
  std::ostringstream warnings;
  EmbeddingStore store = EmbeddingStore::load(path, &warnings);
  CHECK(store.size() == 2);
  CHECK((*store.find("red"))[1] == 0.0);
  CHECK(warnings.str().find("duplicate token 'red'") != std::string::npos);
}

TEST_CASE("malformed header and ragged rows are named errors") {
  CHECK_THROWS_WITH_AS(
      EmbeddingStore::load(writeTemp("vecs_bad1.txt", "banana\nred 1 0\n")),
      doctest::Contains("malformed header"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      EmbeddingStore::load(writeTemp("vecs_bad2.txt", "2 3\nred 1 0\n")),
      doctest::Contains(":2:"), std::runtime_error);
}

TEST_CASE("save/load round trip preserves parsed content") {
  Rng rng(5);
  std::map<std::string, std::vector<double>> vectors;
  for (int i = 0; i < 12; ++i) {
    std::vector<double> v(4);
    for (double& x : v) x = rng.uniform(-2.0, 2.0);
    vectors["tok" + std::to_string(i)] = v;
  }
  EmbeddingStore store = EmbeddingStore::fromVectors(vectors);
  store.save("vecs_roundtrip.txt");
  EmbeddingStore loaded = EmbeddingStore::load("vecs_roundtrip.txt");
  REQUIRE(loaded.size() == store.size());
  for (const auto& [token, vec] : vectors) {
    const std::vector<double>* got = loaded.find(token);
    REQUIRE(got != nullptr);
    for (size_t i = 0; i < vec.size(); ++i) CHECK(vec[i] == (*got)[i]);
  }
}

TEST_CASE("resolve: phrase, token mean, oov") {
  EmbeddingStore phraseStore = EmbeddingStore::fromVectors(
      {{"red_wine", {3, 4}}, {"red", {1, 0}}, {"wine", {0, 1}}});
  ResolvedFeature phrase = phraseStore.resolve("RedWine");
  CHECK(phrase.resolution == ResolvedFeature::Resolution::ExactPhrase);
  CHECK(phrase.vec == std::vector<double>{3, 4});

  EmbeddingStore tokenStore =
      EmbeddingStore::fromVectors({{"red", {1, 0}}, {"wine", {0, 1}}});
  ResolvedFeature mean = tokenStore.resolve("RedWine");
  CHECK(mean.resolution == ResolvedFeature::Resolution::TokenMean);
  CHECK(mean.vec == std::vector<double>{0.5, 0.5});

  ResolvedFeature oov = tokenStore.resolve("Zxqv");
  CHECK(oov.resolution == ResolvedFeature::Resolution::ZeroOov);
  CHECK(oov.vec == std::vector<double>{0, 0});
}

TEST_CASE("resolve skips missing tokens in the mean") {
  EmbeddingStore store = EmbeddingStore::fromVectors({{"red", {2, 4}}});
  ResolvedFeature f = store.resolve("RedZxqv");
  CHECK(f.resolution == ResolvedFeature::Resolution::TokenMean);
  CHECK(f.vec == std::vector<double>{2, 4});
}

TEST_CASE("top-k basics") {
  EmbeddingStore store = EmbeddingStore::fromVectors(
      {{"q", {1, 0}}, {"colinear", {2, 0}}, {"orthogonal", {0, 1}}});
  auto top1 = store.topKSimilar("q", 1, {"colinear", "orthogonal"});
  REQUIRE(top1.size() == 1);
  CHECK(top1[0].first == "colinear");
  CHECK(top1[0].second == doctest::Approx(1.0));

  auto all = store.topKSimilar("q", 2, {"colinear", "orthogonal"});
  CHECK(all.size() == 2);
  CHECK(all[0].first == "colinear");
  CHECK(all[1].first == "orthogonal");

  CHECK_THROWS_WITH_AS(store.topKSimilar("zxqv", 1, {"colinear"}),
                       doctest::Contains("unresolvable query concept"),
                       std::runtime_error);
}

TEST_CASE("top-5 matches the exhaustive oracle on a random fixture") {
  Rng rng(99);
  std::map<std::string, std::vector<double>> vectors;
  std::set<std::string> pool;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> v(6);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    std::string name = "c" + std::string(1 + i / 10, char('a' + i % 10));
    vectors[name] = v;
    if (i > 0) pool.insert(name);
  }
  EmbeddingStore store = EmbeddingStore::fromVectors(vectors);
  auto got = store.topKSimilar("ca", 5, pool);

  std::vector<std::pair<double, std::string>> scored;
  for (const std::string& name : pool)
    scored.emplace_back(oracle::cosineSim(vectors["ca"], vectors[name]), name);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  REQUIRE(got.size() == 5);
  for (size_t i = 0; i < 5; ++i) {
    CHECK(got[i].first == scored[i].second);
    CHECK(got[i].second == doctest::Approx(scored[i].first).epsilon(1e-12));
  }
}

TEST_CASE("cosine identities") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> u(5), v(5);
    for (double& x : u) x = rng.uniform(-1.0, 1.0);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    CHECK(cosine(u, u) == doctest::Approx(1.0).epsilon(1e-12));
    double c = cosine(u, v);
    CHECK(c == doctest::Approx(cosine(v, u)).epsilon(1e-12));
    CHECK(c >= -1.0 - 1e-12);
    CHECK(c <= 1.0 + 1e-12);
  }
}

TEST_CASE("top-k ranking is invariant under positive rescaling") {
  Rng rng(17);
  std::map<std::string, std::vector<double>> vectors, scaled;
  std::set<std::string> pool;
  for (int i = 0; i < 10; ++i) {
    std::vector<double> v(4);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    std::string name = "t" + std::string(1, char('a' + i));
    vectors[name] = v;
    for (double& x : v) x *= 7.25;
    scaled[name] = v;
    if (i > 0) pool.insert(name);
  }
  EmbeddingStore a = EmbeddingStore::fromVectors(vectors);
  EmbeddingStore b = EmbeddingStore::fromVectors(scaled);
  auto ra = a.topKSimilar("ta", 4, pool);
  auto rb = b.topKSimilar("ta", 4, pool);
  REQUIRE(ra.size() == rb.size());
  for (size_t i = 0; i < ra.size(); ++i) CHECK(ra[i].first == rb[i].first);
}
