#include "onto/synth.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "onto/embeddings.hpp"
#include "onto/parser.hpp"
#include "onto/rng.hpp"
#include "onto/verbalize.hpp"

namespace onto {

namespace {

std::string pad2(size_t n) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02zu", n);
  return buf;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> randomUnit(Rng& rng, size_t dim) {
  std::vector<double> v(dim);
  double norm = 0.0;
  // Box-Muller over the deterministic stream.
  for (size_t i = 0; i < dim; i += 2) {
    double u1 = rng.uniform();
    double u2 = rng.uniform();
    double r = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
    v[i] = r * std::cos(kTwoPi * u2);
    if (i + 1 < dim) v[i + 1] = r * std::sin(kTwoPi * u2);
  }
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::vector<double> perturb(Rng& rng, const std::vector<double>& center,
                            double scale) {
  std::vector<double> noise = randomUnit(rng, center.size());
  std::vector<double> v(center.size());
  double norm = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    v[i] = center[i] + scale * noise[i];
    norm += v[i] * v[i];
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

// Mutually orthogonal cluster centers keep wrong-family projections at
// exactly zero, so the planted structure stays linearly separable after
// graph mixing.
std::vector<std::vector<double>> orthonormalCenters(Rng& rng, size_t count,
                                                    size_t dim) {
  if (count > dim)
    throw std::invalid_argument("need dim >= center count for orthogonality");
  std::vector<std::vector<double>> basis;
  while (basis.size() < count) {
    std::vector<double> v = randomUnit(rng, dim);
    for (const auto& b : basis) {
      double dot = 0.0;
      for (size_t i = 0; i < dim; ++i) dot += v[i] * b[i];
      for (size_t i = 0; i < dim; ++i) v[i] -= dot * b[i];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-6) continue;
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::string phraseToken(const std::string& name) {
  std::string out;
  for (const std::string& seg : split_name(name)) {
    if (!out.empty()) out += '_';
    for (char c : seg)
      out += c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c;
  }
  return out;
}

}  // namespace

SynthPaths generate_synthetic(const SynthSpec& spec,
                              const std::string& outDir) {
  if (spec.families < 2 || spec.families % 2 != 0)
    throw std::invalid_argument("family count must be even and >= 2");
  std::filesystem::create_directories(outDir);
  Rng rng(Rng::mix(spec.seed, 0x73796e7468ull));

  std::vector<Rule> rules;
  std::vector<PlantedNegative> negatives;
  std::map<std::string, std::vector<double>> vectors;

  // Orthogonal member-cluster directions.
  std::vector<std::vector<double>> centers =
      orthonormalCenters(rng, spec.families, spec.dim);
  auto memberCenter = [&](size_t f) { return centers[f - 1]; };

  auto put = [&](const std::string& name, std::vector<double> vec) {
    vectors.emplace(phraseToken(name), std::move(vec));
  };
  auto putAux = [&](const std::string& name, std::vector<double> vec) {
    for (double& x : vec) x *= spec.auxScale;
    vectors.emplace(phraseToken(name), std::move(vec));
  };

  size_t cats = 4;
  // Family f is a member of every category except skip(f); corruptions
  // into its own categories are entailed and filtered, so the surviving
  // training negatives concentrate on exactly the missing-category
  // boundary the benchmark probes.
  auto skipCat = [&](size_t f) { return (f - 1) % 4 + 1; };
  for (size_t c = 1; c <= cats; ++c) {
    putAux("Cat" + pad2(c), randomUnit(rng, spec.dim));
    putAux("Super" + pad2(c), randomUnit(rng, spec.dim));
  }

  // Distractors: fresh concepts carrying a family's cluster features but no
  // rules of their own, so negatives built from them probe the category
  // classifiers directly (no body-position template can match). The family
  // is drawn among those that skip the probed category.
  auto distractor = [&](size_t targetCat) {
    size_t g = targetCat + 4 * rng.index(spec.families / 4);
    std::string name =
        "Fam" + pad2(g) + "Dis" + std::to_string(1 + rng.index(2));
    if (!vectors.count(phraseToken(name)))
      put(name, perturb(rng, memberCenter(g), spec.memberNoise));
    return name;
  };

  for (size_t f = 1; f <= spec.families; ++f) {
    for (size_t m = 1; m <= 3; ++m) {
      std::string member = "Fam" + pad2(f) + "Mem" + std::to_string(m);
      put(member, perturb(rng, memberCenter(f), spec.memberNoise));
      for (size_t c = 1; c <= cats; ++c) {
        if (c == skipCat(f)) continue;
        std::string cat = "Cat" + pad2(c);
        Rule rule(Concept::atomic(member), Concept::atomic(cat));
        rules.push_back(rule);
        negatives.push_back(
            {Rule(Concept::atomic(distractor(c)), Concept::atomic(cat)),
             rule.id()});
      }
    }

    if (f <= 16) {
      std::string exo = "Fam" + pad2(f) + "Exo";
      std::string trait = "Fam" + pad2(f) + "Trait";
      std::string traitB = "Fam" + pad2(f) + "TraitB";
      std::string role = "hasTrait" + pad2(f);
      putAux(exo, randomUnit(rng, spec.dim));
      putAux(trait, randomUnit(rng, spec.dim));
      putAux(traitB, randomUnit(rng, spec.dim));
      Rule exoRule(Concept::atomic(exo),
                   Concept::existential(role, Concept::atomic(trait)));
      rules.push_back(exoRule);
      negatives.push_back(
          {Rule(Concept::atomic(exo),
                Concept::existential(role, Concept::atomic(traitB))),
           exoRule.id()});
    } else {
      // The second taxonomy level behind the typed binary templates.
      std::string cat = "Cat" + pad2(f - 16);
      std::string super = "Super" + pad2(f - 16);
      Rule superRule(Concept::atomic(cat), Concept::atomic(super));
      rules.push_back(superRule);
      negatives.push_back(
          {Rule(Concept::atomic(super), Concept::atomic(cat)),
           superRule.id()});
    }
  }

  SynthPaths paths;
  paths.rules = outDir + "/ontology.dlr";
  paths.vectors = outDir + "/vectors.txt";
  paths.truth = outDir + "/truth.tsv";
  paths.negatives = outDir + "/negatives.tsv";

  save_rules(rules, paths.rules);
  EmbeddingStore::fromVectors(std::move(vectors)).save(paths.vectors);

  std::ofstream truth(paths.truth);
  if (!truth) throw std::runtime_error("cannot write " + paths.truth);
  for (const Rule& r : rules)
    truth << verbalize_rule(r).statement << "\t1\n";

  std::ofstream neg(paths.negatives);
  if (!neg) throw std::runtime_error("cannot write " + paths.negatives);
  for (const PlantedNegative& p : negatives)
    neg << p.rule.id() << "\t0\thard-negative\t" << p.sourceRuleId << "\n";
  return paths;
}

std::vector<PlantedNegative> load_planted_negatives(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open negatives file: " + path);
  std::vector<PlantedNegative> out;
  std::string line;
  size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string text, label, origin, source;
    if (!std::getline(ss, text, '\t') || !std::getline(ss, label, '\t') ||
        !std::getline(ss, origin, '\t'))
      throw std::runtime_error(path + ":" + std::to_string(lineNo) +
                               ": expected rule\\t0\\torigin[\\tsource]");
    std::getline(ss, source, '\t');
    out.push_back({parse_rule(text), source});
  }
  return out;
}

}  // namespace onto
