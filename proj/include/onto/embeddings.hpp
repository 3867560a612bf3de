#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace onto {

struct ResolvedFeature {
  enum class Resolution { ExactPhrase, TokenMean, ZeroOov };
  std::string concept_;
  std::vector<double> vec;
  Resolution resolution = Resolution::ZeroOov;
};

// Word2vec-text-format vector store ("count dim" header, then one
// "token v1 .. vdim" row per line). Immutable after load; all queries are
// read-only.
class EmbeddingStore {
 public:
  // Duplicate tokens keep the first occurrence; a warning goes to
  // `warnings` when given. Throws on a malformed header or a ragged row,
  // naming the line number.
  static EmbeddingStore load(const std::string& path,
                             std::ostream* warnings = nullptr);
  void save(const std::string& path) const;

  size_t dim() const { return dim_; }
  size_t size() const { return vectors_.size(); }
  const std::vector<double>* find(const std::string& token) const;
  const std::map<std::string, std::vector<double>>& vectors() const {
    return vectors_;
  }

  // Lookup order: the lowercase underscore-joined phrase token, then the
  // mean of the per-token vectors that are present, then an all-zero
  // vector flagged zero-oov.
  ResolvedFeature resolve(const std::string& conceptName) const;

  // Top k pool members by cosine similarity to the resolved query, ties
  // broken by name. Unresolvable pool members are skipped; an
  // unresolvable query throws.
  std::vector<std::pair<std::string, double>> topKSimilar(
      const std::string& name, size_t k,
      const std::set<std::string>& pool) const;

  // Test/fixture construction path.
  static EmbeddingStore fromVectors(
      std::map<std::string, std::vector<double>> vectors);

 private:
  size_t dim_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
  std::map<std::string, double> norms_;
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace onto
