#include "onto/negatives.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "onto/entail.hpp"
#include "onto/parser.hpp"
#include "onto/rng.hpp"
#include "onto/verbalize.hpp"

namespace onto {

const char* origin_name(Origin o) {
  switch (o) {
    case Origin::Ontology: return "ontology";
    case Origin::Inversion: return "inversion";
    case Origin::HeadSwap: return "head-swap";
    case Origin::BodySwap: return "body-swap";
    case Origin::ConceptReplacement: return "concept-replacement";
    case Origin::Disjointness: return "disjointness";
    case Origin::HardNegative: return "hard-negative";
  }
  return "?";
}

Origin origin_from_name(const std::string& name) {
  for (Origin o :
       {Origin::Ontology, Origin::Inversion, Origin::HeadSwap,
        Origin::BodySwap, Origin::ConceptReplacement, Origin::Disjointness,
        Origin::HardNegative})
    if (name == origin_name(o)) return o;
  throw std::runtime_error("unknown origin: " + name);
}

SplitResult split_rules(const Ontology& ontology, const SplitSpec& spec) {
  if (ontology.size() < 10)
    throw std::runtime_error("need at least 10 rules to split, have " +
                             std::to_string(ontology.size()));
  if (spec.testFraction <= 0.0 || spec.testFraction >= 1.0 ||
      spec.devFraction <= 0.0 || spec.devFraction >= 1.0)
    throw std::runtime_error("split fractions must lie in (0,1)");

  std::vector<Rule> rules = ontology.ruleList();  // sorted by id
  Rng rng(Rng::mix(spec.seed, 0x73706c6974ull));
  rng.shuffle(rules);

  size_t n = rules.size();
  size_t testCount = static_cast<size_t>(
      std::llround(spec.testFraction * static_cast<double>(n)));
  size_t devCount = static_cast<size_t>(std::llround(
      spec.devFraction * static_cast<double>(n - testCount)));
  if (testCount == 0 || devCount == 0 || testCount + devCount >= n)
    throw std::runtime_error("split fractions yield an empty part");

  SplitResult out;
  out.test.assign(rules.begin(), rules.begin() + testCount);
  out.dev.assign(rules.begin() + testCount,
                 rules.begin() + testCount + devCount);
  out.train.assign(rules.begin() + testCount + devCount, rules.end());
  auto byId = [](const Rule& a, const Rule& b) { return a.id() < b.id(); };
  std::sort(out.test.begin(), out.test.end(), byId);
  std::sort(out.dev.begin(), out.dev.end(), byId);
  std::sort(out.train.begin(), out.train.end(), byId);
  return out;
}

std::vector<LabeledRule> gen_training_negatives(
    const std::vector<Rule>& trainPositives, uint64_t seed,
    const std::set<std::string>& excludeIds) {
  if (trainPositives.empty())
    throw std::runtime_error("cannot corrupt an empty rule set");

  std::vector<Rule> positives = trainPositives;
  std::sort(positives.begin(), positives.end());
  std::vector<std::string> atoms;
  {
    std::set<std::string> atomSet;
    for (const Rule& r : positives)
      for (const std::string& a : r.atoms()) atomSet.insert(a);
    atoms.assign(atomSet.begin(), atomSet.end());
  }

  Rng rng(Rng::mix(seed, 0x6e656773ull));
  std::vector<LabeledRule> candidates;

  for (const Rule& r : positives) {
    // (i) inversion and (iv) disjointness apply to atomic subsumptions.
    if (r.isAtomicSubsumption()) {
      candidates.push_back({Rule(r.head(), r.body()), 0, Origin::Inversion});
      candidates.push_back(
          {Rule(Concept::conjunction({r.body(), r.head()}), Concept::bottom()),
           0, Origin::Disjointness});
    }
    // (ii) swap head/body with one random partner rule.
    if (positives.size() > 1) {
      size_t self = static_cast<size_t>(
          std::lower_bound(positives.begin(), positives.end(), r) -
          positives.begin());
      size_t partner = rng.index(positives.size() - 1);
      if (partner >= self) ++partner;
      const Rule& other = positives[partner];
      candidates.push_back({Rule(r.body(), other.head()), 0, Origin::HeadSwap});
      candidates.push_back({Rule(other.body(), r.head()), 0, Origin::BodySwap});
    }
    // (iii) replace one side of an atomic subsumption by a random concept.
    if (r.isAtomicSubsumption() && atoms.size() > 2) {
      bool replaceBody = rng.uniform() < 0.5;
      const std::string& keepName =
          replaceBody ? r.head()->name() : r.body()->name();
      const std::string& dropName =
          replaceBody ? r.body()->name() : r.head()->name();
      // Re-draw until the replacement differs from both sides; bounded by
      // the pool size via rejection over a shrinking window is not needed
      // at these scales.
      std::string replacement;
      for (int attempt = 0; attempt < 64; ++attempt) {
        const std::string& pick = atoms[rng.index(atoms.size())];
        if (pick != keepName && pick != dropName) {
          replacement = pick;
          break;
        }
      }
      if (!replacement.empty()) {
        Rule corrupted =
            replaceBody
                ? Rule(Concept::atomic(replacement), r.head())
                : Rule(r.body(), Concept::atomic(replacement));
        candidates.push_back({corrupted, 0, Origin::ConceptReplacement});
      }
    }
  }

  EntailmentChecker checker(positives);
  std::set<std::string> seen;
  std::vector<LabeledRule> out;
  for (LabeledRule& c : candidates) {
    const std::string& id = c.rule.id();
    if (excludeIds.count(id)) continue;
    if (!seen.insert(id).second) continue;
    if (checker.entails(c.rule)) continue;
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

std::vector<std::string> atomicOccurrences(const Rule& r) {
  std::vector<std::string> out;
  std::function<void(const ConceptPtr&)> walk = [&](const ConceptPtr& c) {
    switch (c->kind()) {
      case Concept::Kind::Atomic:
        out.push_back(c->name());
        break;
      case Concept::Kind::Conjunction:
        for (const auto& p : c->displayParts()) walk(p);
        break;
      case Concept::Kind::Existential:
        walk(c->filler());
        break;
      default:
        break;
    }
  };
  walk(r.body());
  walk(r.head());
  return out;
}

Rule replaceOccurrence(const Rule& r, size_t target,
                       const std::string& replacement) {
  size_t counter = 0;
  std::function<ConceptPtr(const ConceptPtr&)> walk =
      [&](const ConceptPtr& c) -> ConceptPtr {
    switch (c->kind()) {
      case Concept::Kind::Atomic:
        return counter++ == target ? Concept::atomic(replacement) : c;
      case Concept::Kind::Conjunction: {
        std::vector<ConceptPtr> parts;
        for (const auto& p : c->displayParts()) parts.push_back(walk(p));
        return Concept::conjunction(std::move(parts));
      }
      case Concept::Kind::Existential:
        return Concept::existential(c->name(), walk(c->filler()));
      default:
        return c;
    }
  };
  ConceptPtr body = walk(r.body());
  ConceptPtr head = walk(r.head());
  return Rule(std::move(body), std::move(head));
}

}  // namespace

HardNegativeResult gen_hard_negatives(
    const std::vector<Rule>& testPositives, const EmbeddingStore& store,
    const std::set<std::string>& conceptPool, size_t k, size_t perPositive,
    uint64_t seed, const std::set<std::string>& forbiddenIds) {
  HardNegativeResult result;
  Rng rng(Rng::mix(seed, 0x68617264ull));
  std::vector<Rule> positives = testPositives;
  std::sort(positives.begin(), positives.end());

  for (const Rule& r : positives) {
    for (size_t round = 0; round < perPositive; ++round) {
      std::vector<std::string> occurrences = atomicOccurrences(r);
      size_t pick = rng.index(occurrences.size());
      const std::string& victim = occurrences[pick];

      std::set<std::string> pool = conceptPool;
      pool.erase(victim);
      std::vector<std::pair<std::string, double>> neighbors;
      try {
        neighbors = store.topKSimilar(victim, k, pool);
      } catch (const std::runtime_error&) {
        result.skippedUnresolvable.push_back(r.id());
        continue;
      }
      if (neighbors.empty()) {
        result.skippedUnresolvable.push_back(r.id());
        continue;
      }

      // Draw a neighbor; fall back over the remaining ones when the
      // corruption collides with a known positive.
      std::vector<size_t> order(neighbors.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      size_t first = rng.index(order.size());
      std::swap(order[0], order[first]);
      bool emitted = false;
      for (size_t i = 0; i < order.size() && !emitted; ++i) {
        const std::string& replacement = neighbors[order[i]].first;
        Rule corrupted = replaceOccurrence(r, pick, replacement);
        if (corrupted.id() == r.id()) continue;
        if (forbiddenIds.count(corrupted.id())) continue;
        result.candidates.push_back(
            {corrupted, r.id(), victim, replacement});
        emitted = true;
      }
      if (!emitted) result.skippedUnresolvable.push_back(r.id());
    }
  }
  return result;
}

AnnotationOutcome finalize_annotations(const std::vector<AnnotationRow>& rows) {
  if (rows.empty()) throw std::runtime_error("no annotation rows");
  auto judge = [](const std::string& cell, const std::string& ruleId) {
    if (cell == "neg") return true;
    if (cell == "pos") return false;
    if (cell.empty())
      throw std::runtime_error("missing judgment for rule " + ruleId);
    throw std::runtime_error("unknown label token '" + cell + "' for rule " +
                             ruleId);
  };
  size_t n = rows.size();
  size_t agree = 0, neg1 = 0, neg2 = 0;
  AnnotationOutcome out;
  out.total = n;
  for (const AnnotationRow& row : rows) {
    bool j1 = judge(row.judge1, row.ruleId);
    bool j2 = judge(row.judge2, row.ruleId);
    if (j1 == j2) ++agree;
    if (j1) ++neg1;
    if (j2) ++neg2;
    if (j1 && j2) out.keptRuleIds.push_back(row.ruleId);
  }
  double po = static_cast<double>(agree) / static_cast<double>(n);
  double p1 = static_cast<double>(neg1) / static_cast<double>(n);
  double p2 = static_cast<double>(neg2) / static_cast<double>(n);
  double pe = p1 * p2 + (1.0 - p1) * (1.0 - p2);
  // Degenerate marginals (both raters constant) leave kappa undefined;
  // report 1 on perfect agreement and 0 otherwise.
  if (pe >= 1.0)
    out.kappa = po >= 1.0 ? 1.0 : 0.0;
  else
    out.kappa = (po - pe) / (1.0 - pe);
  return out;
}

std::vector<AnnotationRow> read_annotation_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open annotation file: " + path);
  std::vector<AnnotationRow> rows;
  std::string line;
  size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty() || line.rfind("rule_id\t", 0) == 0) continue;
    std::istringstream ss(line);
    AnnotationRow row;
    std::getline(ss, row.ruleId, '\t');
    std::getline(ss, row.statement, '\t');
    std::getline(ss, row.judge1, '\t');
    std::getline(ss, row.judge2, '\t');
    if (row.ruleId.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineNo) +
                               ": missing rule id");
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_annotation_worksheet(const std::vector<HardNegativeCandidate>& rows,
                                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write worksheet: " + path);
  out << "rule_id\tstatement\tannotator1\tannotator2\n";
  for (const HardNegativeCandidate& c : rows)
    out << c.rule.id() << "\t" << verbalize_rule(c.rule).statement << "\t\t\n";
}

void save_labeled_tsv(const std::vector<LabeledRule>& rows,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  for (const LabeledRule& row : rows)
    out << row.rule.id() << "\t" << row.label << "\t"
        << origin_name(row.origin) << "\n";
}

std::vector<LabeledRule> load_labeled_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::vector<LabeledRule> rows;
  std::string line;
  size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string text, label, origin;
    if (!std::getline(ss, text, '\t') || !std::getline(ss, label, '\t') ||
        !std::getline(ss, origin, '\t'))
      throw std::runtime_error(path + ":" + std::to_string(lineNo) +
                               ": expected rule\\tlabel\\torigin");
    rows.push_back({parse_rule(text), label == "1" ? 1 : 0,
                    origin_from_name(origin)});
  }
  return rows;
}

}  // namespace onto
