#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "onto/concept.hpp"

namespace onto {

// Structural entailment over a fixed set of positive rules. Sound
// under-approximation of DL entailment; derivable C SubClassOf D when:
//   (a) C = D (reflexivity)
//   (b) C, D atomic and D is in the transitive closure of the atomic
//       subsumptions
//   (c) C a conjunction with some part deriving D
//   (d) D a conjunction with every part derived from C
//   (e) C = r some C', D = r some D' and C' derives D'
//   (f) C SubClassOf D is itself a positive rule (modulo canonical form)
class EntailmentChecker {
 public:
  explicit EntailmentChecker(const std::vector<Rule>& positives);

  bool entails(const Rule& candidate) const;

 private:
  bool derives(const ConceptPtr& body, const ConceptPtr& head) const;

  std::set<std::string> positiveIds_;
  // atomic name -> atoms reachable through directed subsumption edges
  std::map<std::string, std::set<std::string>> atomicClosure_;
  mutable std::map<std::pair<std::string, std::string>, bool> memo_;
};

inline bool entails(const std::vector<Rule>& positives, const Rule& candidate) {
  return EntailmentChecker(positives).entails(candidate);
}

}  // namespace onto
