#include "onto/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "onto/verbalize.hpp"

namespace onto {

namespace {

std::string lowercaseToken(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cosine: dimension mismatch");
  double dot = 0.0;
  for (size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  double na = norm2(a), nb = norm2(b);
  if (na == 0.0 || nb == 0.0)
    throw std::invalid_argument("cosine: zero vector");
  return dot / (na * nb);
}

EmbeddingStore EmbeddingStore::load(const std::string& path,
                                    std::ostream* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file: " + path);
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error(path + ": empty vector file");
  std::istringstream hs(header);
  long long count = -1, dim = -1;
  std::string extra;
  if (!(hs >> count >> dim) || count < 0 || dim <= 0 || (hs >> extra))
    throw std::runtime_error(path +
                             ":1: malformed header, expected 'count dim'");

  EmbeddingStore store;
  store.dim_ = static_cast<size_t>(dim);
  std::string line;
  size_t lineNo = 1;
  size_t seen = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string token;
    row >> token;
    std::vector<double> vec;
    vec.reserve(store.dim_);
    double x;
    while (row >> x) vec.push_back(x);
    if (vec.size() != store.dim_)
      throw std::runtime_error(path + ":" + std::to_string(lineNo) +
                               ": expected " + std::to_string(store.dim_) +
                               " values for token '" + token + "', got " +
                               std::to_string(vec.size()));
    ++seen;
    if (!store.vectors_.emplace(token, vec).second) {
      if (warnings)
        *warnings << path << ":" << lineNo << ": duplicate token '" << token
                  << "' ignored (first occurrence kept)\n";
      continue;
    }
    store.norms_[token] = norm2(vec);
  }
  if (seen != static_cast<size_t>(count) && warnings)
    *warnings << path << ": header count " << count << " but " << seen
              << " rows\n";
  return store;
}

void EmbeddingStore::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vector file: " + path);
  out << vectors_.size() << " " << dim_ << "\n";
  char buf[64];
  for (const auto& [token, vec] : vectors_) {
    out << token;
    for (double x : vec) {
      std::snprintf(buf, sizeof buf, " %.17g", x);
      out << buf;
    }
    out << "\n";
  }
}

EmbeddingStore EmbeddingStore::fromVectors(
    std::map<std::string, std::vector<double>> vectors) {
  EmbeddingStore store;
  if (vectors.empty()) throw std::invalid_argument("empty vector map");
  store.dim_ = vectors.begin()->second.size();
  for (const auto& [token, vec] : vectors) {
    if (vec.size() != store.dim_)
      throw std::invalid_argument("inconsistent vector dimensions");
    store.norms_[token] = norm2(vec);
  }
  store.vectors_ = std::move(vectors);
  return store;
}

const std::vector<double>* EmbeddingStore::find(
    const std::string& token) const {
  auto it = vectors_.find(token);
  return it == vectors_.end() ? nullptr : &it->second;
}

ResolvedFeature EmbeddingStore::resolve(const std::string& conceptName) const {
  ResolvedFeature out;
  out.concept_ = conceptName;

  std::vector<std::string> segments = split_name(conceptName);
  std::string phrase;
  for (const std::string& seg : segments) {
    if (!phrase.empty()) phrase += '_';
    phrase += lowercaseToken(seg);
  }
  if (const std::vector<double>* v = find(phrase)) {
    out.vec = *v;
    out.resolution = ResolvedFeature::Resolution::ExactPhrase;
    return out;
  }

  std::vector<double> sum(dim_, 0.0);
  size_t hits = 0;
  for (const std::string& seg : segments) {
    if (const std::vector<double>* v = find(lowercaseToken(seg))) {
      for (size_t i = 0; i < dim_; ++i) sum[i] += (*v)[i];
      ++hits;
    }
  }
  if (hits > 0) {
    for (double& x : sum) x /= static_cast<double>(hits);
    out.vec = std::move(sum);
    out.resolution = ResolvedFeature::Resolution::TokenMean;
    return out;
  }

  out.vec.assign(dim_, 0.0);
  out.resolution = ResolvedFeature::Resolution::ZeroOov;
  return out;
}

std::vector<std::pair<std::string, double>> EmbeddingStore::topKSimilar(
    const std::string& name, size_t k,
    const std::set<std::string>& pool) const {
  ResolvedFeature query = resolve(name);
  if (query.resolution == ResolvedFeature::Resolution::ZeroOov)
    throw std::runtime_error("unresolvable query concept: " + name);

  std::vector<std::pair<std::string, double>> scored;
  for (const std::string& candidate : pool) {
    ResolvedFeature f = resolve(candidate);
    if (f.resolution == ResolvedFeature::Resolution::ZeroOov) continue;
    scored.emplace_back(candidate, cosine(query.vec, f.vec));
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

}  // namespace onto
