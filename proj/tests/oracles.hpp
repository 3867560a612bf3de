// Independent reference implementations the tests check the library
// against. Everything here is deliberately written the dumbest possible
// way (dense matrices, exhaustive enumeration) and shares no code with the
// engine paths it validates.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// --- dense matrices ------------------------------------------------------

struct Mat {
  size_t rows = 0, cols = 0;
  std::vector<double> a;
  Mat() = default;
  Mat(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& at(size_t r, size_t c) { return a[r * cols + c]; }
  double at(size_t r, size_t c) const { return a[r * cols + c]; }
};

inline Mat mul(const Mat& x, const Mat& y) {
  Mat z(x.rows, y.cols);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t j = 0; j < y.cols; ++j) {
      double s = 0.0;
      for (size_t k = 0; k < x.cols; ++k) s += x.at(i, k) * y.at(k, j);
      z.at(i, j) = s;
    }
  return z;
}

inline Mat relu(const Mat& x) {
  Mat z = x;
  for (double& v : z.a) v = v > 0.0 ? v : 0.0;
  return z;
}

// Dense symmetric-normalized adjacency with self loops from an edge list.
inline Mat normalizedAdjacency(size_t n,
                               const std::vector<std::pair<size_t, size_t>>& edges) {
  Mat adj(n, n);
  for (auto [u, v] : edges) {
    adj.at(u, v) = 1.0;
    adj.at(v, u) = 1.0;
  }
  for (size_t i = 0; i < n; ++i) adj.at(i, i) = 1.0;
  std::vector<double> deg(n, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) deg[i] += adj.at(i, j);
  Mat out(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      out.at(i, j) = adj.at(i, j) / std::sqrt(deg[i] * deg[j]);
  return out;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> symmetricEigenvalues(Mat m) {
  size_t n = m.rows;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) off += m.at(p, q) * m.at(p, q);
    if (off < 1e-24) break;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) {
        double apq = m.at(p, q);
        if (std::fabs(apq) < 1e-18) continue;
        double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (size_t k = 0; k < n; ++k) {
          double akp = m.at(k, p), akq = m.at(k, q);
          m.at(k, p) = c * akp - s * akq;
          m.at(k, q) = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          double apk = m.at(p, k), aqk = m.at(q, k);
          m.at(p, k) = c * apk - s * aqk;
          m.at(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> eig(n);
  for (size_t i = 0; i < n; ++i) eig[i] = m.at(i, i);
  return eig;
}

// --- transitive closure over atomic subsumptions ---------------------------

// Floyd-Warshall-style boolean closure; pairs (a, b) with a path a -> b.
inline std::set<std::pair<std::string, std::string>> transitiveClosure(
    const std::vector<std::pair<std::string, std::string>>& edges) {
  std::set<std::string> names;
  for (const auto& [a, b] : edges) {
    names.insert(a);
    names.insert(b);
  }
  std::vector<std::string> order(names.begin(), names.end());
  size_t n = order.size();
  std::map<std::string, size_t> idx;
  for (size_t i = 0; i < n; ++i) idx[order[i]] = i;
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (const auto& [a, b] : edges) reach[idx[a]][idx[b]] = true;
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  std::set<std::pair<std::string, std::string>> out;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (reach[i][j]) out.insert({order[i], order[j]});
  return out;
}

// --- misc ------------------------------------------------------------------

inline double cosineSim(const std::vector<double>& a,
                        const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Confusion-matrix F1 coded independently of the library's.
struct ConfusionF1 {
  double precision, recall, f1;
};

inline ConfusionF1 confusionF1(const std::vector<double>& probs,
                               const std::vector<int>& labels,
                               double threshold) {
  double tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < probs.size(); ++i) {
    int hat = probs[i] >= threshold ? 1 : 0;
    tp += hat == 1 && labels[i] == 1;
    fp += hat == 1 && labels[i] == 0;
    fn += hat == 0 && labels[i] == 1;
  }
  ConfusionF1 r{};
  r.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0
             ? 2 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

}  // namespace oracle
