#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "crepair/fd_core.hpp"
#include "crepair/matching.hpp"
#include "crepair/repair.hpp"
#include "crepair/simplify.hpp"

namespace crepair {

class CapExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultOracleCap = 20;
inline constexpr std::size_t kMatchingOracleCap = 16;

/// Facts as nodes, an edge between every two facts that violate some FD
/// together. Limited to 64 facts (adjacency is a bitmask per node).
class ConflictGraph {
 public:
  ConflictGraph(const FdSchema& schema, const Instance& instance) : facts_(instance.facts()) {
    requireSameSignature(schema, instance);
    if (facts_.size() > 64) throw CapExceededError("conflict graph is limited to 64 facts");
    adj_.assign(facts_.size(), 0);
    for (std::size_t i = 0; i < facts_.size(); ++i) {
      for (std::size_t j = i + 1; j < facts_.size(); ++j) {
        if (!pairConsistent(schema, facts_[i], facts_[j])) {
          adj_[i] |= std::uint64_t{1} << j;
          adj_[j] |= std::uint64_t{1} << i;
        }
      }
    }
  }

  std::size_t size() const noexcept { return facts_.size(); }
  const std::vector<Fact>& facts() const noexcept { return facts_; }
  std::uint64_t neighbors(std::size_t i) const { return adj_[i]; }
  bool adjacent(std::size_t i, std::size_t j) const { return (adj_[i] >> j) & 1u; }

  std::size_t edgeCount() const {
    std::size_t n = 0;
    for (auto m : adj_) n += static_cast<std::size_t>(std::popcount(m));
    return n / 2;
  }

  std::uint64_t allNodes() const {
    return facts_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << facts_.size()) - 1;
  }

  bool independent(std::uint64_t set) const {
    for (std::uint64_t b = set; b; b &= b - 1) {
      if (adj_[static_cast<std::size_t>(std::countr_zero(b))] & set) return false;
    }
    return true;
  }

  /// Size of a maximum independent set inside `cand`.
  std::size_t maxIndependent(std::uint64_t cand) const {
    std::size_t best = 0;
    search(cand, 0, best);
    return best;
  }

 private:
  void search(std::uint64_t cand, std::size_t cur, std::size_t& best) const {
    if (cur + static_cast<std::size_t>(std::popcount(cand)) <= best) return;
    std::size_t pick = 64;
    int pickDeg = -1;
    for (std::uint64_t b = cand; b; b &= b - 1) {
      auto v = static_cast<std::size_t>(std::countr_zero(b));
      int d = std::popcount(adj_[v] & cand);
      if (d > pickDeg) {
        pickDeg = d;
        pick = v;
      }
    }
    if (pickDeg <= 0) {
      // no edges left: everything remaining can be taken
      best = std::max(best, cur + static_cast<std::size_t>(std::popcount(cand)));
      return;
    }
    const std::uint64_t bit = std::uint64_t{1} << pick;
    search(cand & ~bit & ~adj_[pick], cur + 1, best);
    search(cand & ~bit, cur, best);
  }

  std::vector<Fact> facts_;
  std::vector<std::uint64_t> adj_;
};

/// Exact C-repair by maximum independent set. Among maximum sets it returns
/// the one that takes the earliest facts in canonical order.
inline RepairResult bruteForceCRep(const FdSchema& schema, const Instance& instance,
                                   std::size_t cap = kDefaultOracleCap) {
  if (cap > 64) throw std::invalid_argument("oracle cap above 64 is not supported");
  if (instance.size() > cap) {
    throw CapExceededError("instance has " + std::to_string(instance.size()) + " facts, oracle cap is " +
                           std::to_string(cap));
  }
  ConflictGraph g(schema, instance);
  std::uint64_t cand = g.allNodes();
  std::size_t target = g.maxIndependent(cand);
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < g.size() && target > 0; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    if (!(cand & bit)) continue;
    const std::uint64_t rest = cand & ~bit & ~g.neighbors(i);
    if (1 + g.maxIndependent(rest) == target) {
      chosen.push_back(i);
      cand = rest;
      --target;
    } else {
      cand &= ~bit;
    }
  }
  return detail::makeResult(instance, chosen, classify(schema), {});
}

/// Exhaustive maximum-weight matching with the same tie-break as
/// maxWeightMatching. Intended for at most 16 edges.
inline Matching bruteForceMatching(BipartiteMatchProblem problem, std::size_t cap = kMatchingOracleCap) {
  problem.canonicalize();
  const auto& edges = problem.edges;
  const std::size_t n = edges.size();
  if (n > cap || n > 30) {
    throw CapExceededError("matching has " + std::to_string(n) + " edges, oracle cap is " + std::to_string(cap));
  }
  // Bit n-1-k stands for edge k, so a numerically larger mask wins the
  // earliest-edge comparison.
  std::int64_t bestWeight = -1;
  std::uint32_t bestMask = 0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    std::vector<char> usedL(problem.left.size(), 0), usedR(problem.right.size(), 0);
    std::int64_t w = 0;
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      if (!((mask >> (n - 1 - k)) & 1u)) continue;
      const auto& e = edges[k];
      if (usedL[e.left] || usedR[e.right]) ok = false;
      usedL[e.left] = usedR[e.right] = 1;
      w += e.weight;
    }
    if (!ok) continue;
    if (w > bestWeight || (w == bestWeight && mask > bestMask)) {
      bestWeight = w;
      bestMask = mask;
    }
  }
  Matching m;
  m.weight = bestWeight < 0 ? 0 : bestWeight;
  for (std::size_t k = 0; k < n; ++k) {
    if ((bestMask >> (n - 1 - k)) & 1u) m.edges.push_back(k);
  }
  return m;
}

/// Candidate is a subset of the instance, consistent, and every left-out
/// fact conflicts with some kept one.
inline bool isSRepair(const FdSchema& schema, const Instance& instance, const Instance& candidate) {
  requireSameSignature(schema, instance);
  if (!(candidate.signature() == instance.signature())) return false;
  if (!candidate.subsetOf(instance)) return false;
  if (!isConsistent(schema, candidate)) return false;
  for (const auto& f : instance.facts()) {
    if (candidate.contains(f)) continue;
    bool blocked = false;
    for (const auto& g : candidate.facts()) {
      if (!pairConsistent(schema, f, g)) {
        blocked = true;
        break;
      }
    }
    if (!blocked) return false;
  }
  return true;
}

}  // namespace crepair
