#include "onto/entail.hpp"

#include <deque>

namespace onto {

EntailmentChecker::EntailmentChecker(const std::vector<Rule>& positives) {
  std::map<std::string, std::set<std::string>> direct;
  for (const Rule& r : positives) {
    positiveIds_.insert(r.id());
    if (r.isAtomicSubsumption())
      direct[r.body()->name()].insert(r.head()->name());
  }
  // BFS per atom; ontologies here are small enough that quadratic closure
  // construction is a non-issue.
  for (const auto& [start, firsts] : direct) {
    std::set<std::string>& reach = atomicClosure_[start];
    std::deque<std::string> queue(firsts.begin(), firsts.end());
    while (!queue.empty()) {
      std::string cur = queue.front();
      queue.pop_front();
      if (!reach.insert(cur).second) continue;
      auto it = direct.find(cur);
      if (it != direct.end())
        for (const std::string& next : it->second) queue.push_back(next);
    }
  }
}

bool EntailmentChecker::entails(const Rule& candidate) const {
  return derives(candidate.body(), candidate.head());
}

bool EntailmentChecker::derives(const ConceptPtr& body,
                                const ConceptPtr& head) const {
  if (body->text() == head->text()) return true;
  auto key = std::make_pair(body->text(), head->text());
  auto memoIt = memo_.find(key);
  if (memoIt != memo_.end()) return memoIt->second;

  bool ok = false;
  if (positiveIds_.count(body->text() + " SubClassOf " + head->text())) {
    ok = true;
  } else if (head->is(Concept::Kind::Conjunction)) {
    ok = true;
    for (const auto& part : head->parts())
      if (!derives(body, part)) {
        ok = false;
        break;
      }
  }
  if (!ok && body->is(Concept::Kind::Conjunction)) {
    for (const auto& part : body->parts())
      if (derives(part, head)) {
        ok = true;
        break;
      }
  }
  if (!ok && body->is(Concept::Kind::Existential) &&
      head->is(Concept::Kind::Existential) && body->name() == head->name()) {
    ok = derives(body->filler(), head->filler());
  }
  if (!ok && body->is(Concept::Kind::Atomic) &&
      head->is(Concept::Kind::Atomic)) {
    auto it = atomicClosure_.find(body->name());
    ok = it != atomicClosure_.end() && it->second.count(head->name()) > 0;
  }
  memo_[key] = ok;
  return ok;
}

}  // namespace onto
