#include "onto/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace onto {

ConceptGraph ConceptGraph::build(const std::vector<Rule>& trainRules,
                                 const EmbeddingStore& store,
                                 const std::set<std::string>& extraConcepts) {
  std::set<std::string> names(extraConcepts);
  for (const Rule& r : trainRules)
    for (const std::string& a : r.atoms()) names.insert(a);
  if (names.empty()) throw std::runtime_error("empty graph");

  ConceptGraph g;
  g.nodes_.assign(names.begin(), names.end());
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < g.nodes_.size(); ++i) index[g.nodes_[i]] = i;

  std::set<std::pair<size_t, size_t>> edges;
  for (const Rule& r : trainRules) {
    std::set<std::string> atoms = r.atoms();
    std::vector<size_t> ids;
    ids.reserve(atoms.size());
    for (const std::string& a : atoms) ids.push_back(index.at(a));
    for (size_t i = 0; i < ids.size(); ++i)
      for (size_t j = i + 1; j < ids.size(); ++j)
        edges.insert({std::min(ids[i], ids[j]), std::max(ids[i], ids[j])});
  }
  g.edges_.assign(edges.begin(), edges.end());

  g.adjacency_.resize(g.nodes_.size());
  for (const auto& [u, v] : g.edges_) {
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  for (auto& neighbors : g.adjacency_)
    std::sort(neighbors.begin(), neighbors.end());

  g.featureDim_ = store.dim();
  g.features_.resize(g.nodes_.size() * g.featureDim_);
  for (size_t i = 0; i < g.nodes_.size(); ++i) {
    ResolvedFeature f = store.resolve(g.nodes_[i]);
    std::copy(f.vec.begin(), f.vec.end(),
              g.features_.begin() + static_cast<long>(i * g.featureDim_));
  }
  return g;
}

std::optional<size_t> ConceptGraph::indexOf(const std::string& name) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end() || *it != name) return std::nullopt;
  return static_cast<size_t>(it - nodes_.begin());
}

std::vector<size_t> ConceptGraph::neighborhood(size_t node) const {
  if (node >= nodes_.size())
    throw std::out_of_range("node index " + std::to_string(node) +
                            " out of range");
  return adjacency_[node];
}

void ConceptGraph::propagate(const double* x, double* y, size_t cols) const {
  size_t n = nodes_.size();
  std::vector<double> invSqrtDeg(n);
  for (size_t i = 0; i < n; ++i)
    invSqrtDeg[i] = 1.0 / std::sqrt(static_cast<double>(adjacency_[i].size() + 1));
  for (size_t i = 0; i < n; ++i) {
    double selfW = invSqrtDeg[i] * invSqrtDeg[i];
    for (size_t c = 0; c < cols; ++c) y[i * cols + c] = selfW * x[i * cols + c];
    for (size_t j : adjacency_[i]) {
      double w = invSqrtDeg[i] * invSqrtDeg[j];
      const double* row = x + j * cols;
      double* out = y + i * cols;
      for (size_t c = 0; c < cols; ++c) out[c] += w * row[c];
    }
  }
}

std::vector<double> ConceptGraph::denseNormalizedAdjacency() const {
  size_t n = nodes_.size();
  std::vector<double> ahat(n * n, 0.0);
  std::vector<double> invSqrtDeg(n);
  for (size_t i = 0; i < n; ++i)
    invSqrtDeg[i] = 1.0 / std::sqrt(static_cast<double>(adjacency_[i].size() + 1));
  for (size_t i = 0; i < n; ++i) {
    ahat[i * n + i] = invSqrtDeg[i] * invSqrtDeg[i];
    for (size_t j : adjacency_[i]) ahat[i * n + j] = invSqrtDeg[i] * invSqrtDeg[j];
  }
  return ahat;
}

uint64_t ConceptGraph::nodeHash() const {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](char c) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  };
  for (const std::string& name : nodes_) {
    for (char c : name) mix(c);
    mix('\n');
  }
  return h;
}

void ConceptGraph::saveJson(const std::string& path) const {
  nlohmann::json j;
  j["nodes"] = nodes_;
  j["dim"] = featureDim_;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, v] : edges_) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  nlohmann::json features = nlohmann::json::array();
  for (size_t i = 0; i < nodes_.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (size_t c = 0; c < featureDim_; ++c)
      row.push_back(features_[i * featureDim_ + c]);
    features.push_back(std::move(row));
  }
  j["features"] = std::move(features);
  j["nodeHash"] = nodeHash();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  out << j.dump(1) << "\n";
}

ConceptGraph ConceptGraph::loadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  nlohmann::json j;
  in >> j;
  ConceptGraph g;
  g.nodes_ = j.at("nodes").get<std::vector<std::string>>();
  g.featureDim_ = j.at("dim").get<size_t>();
  for (const auto& e : j.at("edges"))
    g.edges_.emplace_back(e.at(0).get<size_t>(), e.at(1).get<size_t>());
  g.adjacency_.resize(g.nodes_.size());
  for (const auto& [u, v] : g.edges_) {
    if (u >= g.nodes_.size() || v >= g.nodes_.size())
      throw std::runtime_error(path + ": edge index out of range");
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  for (auto& neighbors : g.adjacency_)
    std::sort(neighbors.begin(), neighbors.end());
  g.features_.reserve(g.nodes_.size() * g.featureDim_);
  for (const auto& row : j.at("features"))
    for (const auto& x : row) g.features_.push_back(x.get<double>());
  if (g.features_.size() != g.nodes_.size() * g.featureDim_)
    throw std::runtime_error(path + ": feature matrix shape mismatch");
  return g;
}

}  // namespace onto
