#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "crepair/fd_core.hpp"
#include "crepair/matching.hpp"
#include "crepair/simplify.hpp"

namespace crepair {

/// Facts of an instance that agree on a set of blocking attributes.
struct Block {
  std::vector<Constant> key;  // values on the blocking attributes, signature order
  Instance facts;
};

struct RepairResult {
  Instance repair;
  std::size_t size = 0;
  SimplificationTrace trace;
  /// Sizes of the top-level blocks' repairs, keyed by block key. For S3 the
  /// key is the X1 values followed by the X2 values.
  std::vector<std::pair<std::vector<Constant>, std::size_t>> perBlockSizes;
};

/// Groups the instance by its values on `attrs`; blocks come out in key order.
inline std::vector<Block> splitBy(const Instance& instance, AttrSet attrs) {
  instance.signature().requireSubset(attrs);
  const auto cols = attrs.positions();
  std::map<std::vector<Constant>, std::vector<Fact>> groups;
  for (const auto& f : instance.facts()) {
    std::vector<Constant> key;
    key.reserve(cols.size());
    for (auto c : cols) key.push_back(f[c]);
    groups[std::move(key)].push_back(f);
  }
  std::vector<Block> out;
  out.reserve(groups.size());
  for (auto& [key, facts] : groups) out.push_back(Block{key, Instance(instance.signature(), std::move(facts))});
  return out;
}

inline std::vector<Block> splitS1(const FdSchema& schema, const Instance& instance, std::size_t attribute) {
  requireSameSignature(schema, instance);
  return splitBy(instance, AttrSet::single(attribute));
}

namespace detail {

// Recursive engine. Facts are never copied: a sub-problem is a set of fact
// indices plus the map from the current (projected) signature positions back
// to columns of the original facts. Inside a block all facts agree on the
// projected-away columns, so projection is injective there and counting
// original facts is the same as counting projected ones.
class RepairEngine {
 public:
  RepairEngine(const std::vector<Fact>& facts, std::size_t maxDepth) : facts_(facts), maxDepth_(maxDepth) {}

  using Selection = std::vector<std::size_t>;
  using BlockSizes = std::vector<std::pair<std::vector<Constant>, std::size_t>>;

  std::optional<Selection> solve(const FdSchema& schema, const std::vector<std::size_t>& columns,
                                 const Selection& members, std::size_t depth, BlockSizes* sizes = nullptr) {
    assert(depth <= maxDepth_ && "each simplification removes an attribute");
    (void)depth;
    FdSchema norm = normalize(schema);
    if (norm.empty()) return members;
    if (auto a = findS1(norm)) return solveS1(norm, *a, columns, members, depth, sizes);
    if (auto fd = findS2(norm)) return solveS2(norm, *fd, columns, members, depth, sizes);
    if (auto p = findS3(norm)) return solveS3(norm, *p, columns, members, depth, sizes);
    return std::nullopt;
  }

  std::optional<Selection> solveS1(const FdSchema& norm, std::size_t attr, const std::vector<std::size_t>& columns,
                                   const Selection& members, std::size_t depth, BlockSizes* sizes) {
    const AttrSet removed = AttrSet::single(attr);
    const FdSchema sub = project(norm, removed);
    const auto subColumns = dropColumns(columns, removed);
    Selection out;
    for (auto& [key, block] : group(columns, members, removed)) {
      auto r = solve(sub, subColumns, block, depth + 1);
      if (!r) return std::nullopt;
      if (sizes) sizes->emplace_back(key, r->size());
      out.insert(out.end(), r->begin(), r->end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::optional<Selection> solveS2(const FdSchema& norm, const Fd& fd, const std::vector<std::size_t>& columns,
                                   const Selection& members, std::size_t depth, BlockSizes* sizes) {
    const AttrSet removed = fd.rhs;
    const FdSchema sub = project(norm, removed);
    const auto subColumns = dropColumns(columns, removed);
    std::optional<Selection> best;
    for (auto& [key, block] : group(columns, members, removed)) {
      auto r = solve(sub, subColumns, block, depth + 1);
      if (!r) return std::nullopt;
      if (sizes) sizes->emplace_back(key, r->size());
      // strict comparison: the earliest block key wins ties
      if (!best || r->size() > best->size()) best = std::move(r);
    }
    return best ? *best : Selection{};
  }

  std::optional<Selection> solveS3(const FdSchema& norm, const std::pair<Fd, Fd>& pair,
                                   const std::vector<std::size_t>& columns, const Selection& members,
                                   std::size_t depth, BlockSizes* sizes) {
    const AttrSet x1 = pair.first.lhs, x2 = pair.second.lhs;
    const AttrSet removed = x1 | x2;
    const FdSchema sub = project(norm, removed);
    const auto subColumns = dropColumns(columns, removed);

    std::map<std::vector<Constant>, std::size_t> leftIds, rightIds;
    std::map<std::pair<std::vector<Constant>, std::vector<Constant>>, Selection> blocks;
    for (auto m : members) {
      auto kx = keyOf(m, columns, x1), ky = keyOf(m, columns, x2);
      leftIds.emplace(kx, 0);
      rightIds.emplace(ky, 0);
      blocks[{std::move(kx), std::move(ky)}].push_back(m);
    }
    BipartiteMatchProblem problem;
    for (auto& [k, id] : leftIds) {
      id = problem.left.size();
      problem.left.push_back(k);
    }
    for (auto& [k, id] : rightIds) {
      id = problem.right.size();
      problem.right.push_back(k);
    }
    // Block repairs in (left, right) order, which is also canonical edge order.
    std::vector<Selection> blockRepairs;
    for (auto& [key, block] : blocks) {
      auto r = solve(sub, subColumns, block, depth + 1);
      if (!r) return std::nullopt;
      problem.edges.push_back(WeightedEdge{leftIds.at(key.first), rightIds.at(key.second),
                                           static_cast<std::int64_t>(r->size())});
      if (sizes) {
        auto k = key.first;
        k.insert(k.end(), key.second.begin(), key.second.end());
        sizes->emplace_back(std::move(k), r->size());
      }
      blockRepairs.push_back(std::move(*r));
    }
    problem.canonicalize();
    const Matching matching = maxWeightMatching(problem);
    Selection out;
    for (auto e : matching.edges) out.insert(out.end(), blockRepairs[e].begin(), blockRepairs[e].end());
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Constant> keyOf(std::size_t member, const std::vector<std::size_t>& columns, AttrSet attrs) const {
    std::vector<Constant> key;
    for (auto p : attrs.positions()) key.push_back(facts_[member][columns[p]]);
    return key;
  }

  std::map<std::vector<Constant>, Selection> group(const std::vector<std::size_t>& columns, const Selection& members,
                                                  AttrSet attrs) const {
    std::map<std::vector<Constant>, Selection> out;
    for (auto m : members) out[keyOf(m, columns, attrs)].push_back(m);
    return out;
  }

  static std::vector<std::size_t> dropColumns(const std::vector<std::size_t>& columns, AttrSet removed) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (!removed.contains(i)) out.push_back(columns[i]);
    }
    return out;
  }

 private:
  const std::vector<Fact>& facts_;
  std::size_t maxDepth_;
};

inline std::vector<std::size_t> identityColumns(std::size_t n) {
  std::vector<std::size_t> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = i;
  return c;
}

inline std::vector<std::size_t> allMembers(const Instance& instance) { return identityColumns(instance.size()); }

inline RepairResult makeResult(const Instance& instance, const std::vector<std::size_t>& selection,
                               SimplificationTrace trace,
                               std::vector<std::pair<std::vector<Constant>, std::size_t>> sizes) {
  std::vector<Fact> kept;
  kept.reserve(selection.size());
  for (auto i : selection) kept.push_back(instance.facts()[i]);
  RepairResult r{Instance(instance.signature(), std::move(kept)), selection.size(), std::move(trace),
                 std::move(sizes)};
  return r;
}

}  // namespace detail

/// Cardinality repair by recursive simplification. Returns nullopt exactly
/// when the schema is not tractable.
inline std::optional<RepairResult> findCRep(const FdSchema& schema, const Instance& instance) {
  requireSameSignature(schema, instance);
  auto trace = classify(schema);
  if (!trace.tractable) return std::nullopt;
  detail::RepairEngine engine(instance.facts(), schema.arity());
  detail::RepairEngine::BlockSizes sizes;
  auto sel = engine.solve(schema, detail::identityColumns(schema.arity()), detail::allMembers(instance), 0, &sizes);
  if (!sel) return std::nullopt;
  return detail::makeResult(instance, *sel, std::move(trace), std::move(sizes));
}

namespace detail {

template <typename Fn>
std::optional<RepairResult> runForced(const FdSchema& schema, const Instance& instance, Fn&& body) {
  requireSameSignature(schema, instance);
  FdSchema norm = normalize(schema);
  auto trace = classify(norm);
  RepairEngine engine(instance.facts(), schema.arity());
  RepairEngine::BlockSizes sizes;
  auto sel = body(engine, norm, &sizes);
  if (!sel) return std::nullopt;
  return makeResult(instance, *sel, std::move(trace), std::move(sizes));
}

}  // namespace detail

/// S1 step: repair each block of the common lhs attribute, return the union.
inline std::optional<RepairResult> repairS1(const FdSchema& schema, const Instance& instance) {
  auto a = findS1(normalize(schema));
  if (!a) throw NotApplicableError("simplification S1 does not apply to " + normalize(schema).format());
  return detail::runForced(schema, instance, [&](auto& engine, const FdSchema& norm, auto* sizes) {
    return engine.solveS1(norm, *a, detail::identityColumns(norm.arity()), detail::allMembers(instance), 0, sizes);
  });
}

/// S2 step: repair each block of X for {} -> X and keep the largest.
inline std::optional<RepairResult> repairS2(const FdSchema& schema, const Instance& instance) {
  auto fd = findS2(normalize(schema));
  if (!fd) throw NotApplicableError("simplification S2 does not apply to " + normalize(schema).format());
  return detail::runForced(schema, instance, [&](auto& engine, const FdSchema& norm, auto* sizes) {
    return engine.solveS2(norm, *fd, detail::identityColumns(norm.arity()), detail::allMembers(instance), 0, sizes);
  });
}

/// S3 step: repair each (X1, X2) block, then keep the blocks picked by a
/// maximum-weight matching between X1 values and X2 values.
inline std::optional<RepairResult> repairS3(const FdSchema& schema, const Instance& instance) {
  auto p = findS3(normalize(schema));
  if (!p) throw NotApplicableError("simplification S3 does not apply to " + normalize(schema).format());
  return detail::runForced(schema, instance, [&](auto& engine, const FdSchema& norm, auto* sizes) {
    return engine.solveS3(norm, *p, detail::identityColumns(norm.arity()), detail::allMembers(instance), 0, sizes);
  });
}

/// The graph G_{X1||X2}: one left node per realized X1 value, one right node
/// per realized X2 value, one edge per non-empty block weighted by that
/// block's repair size under the schema with X1 u X2 projected away.
inline std::optional<BipartiteMatchProblem> buildMatchProblem(const FdSchema& schema, const Instance& instance,
                                                              AttrSet x1, AttrSet x2) {
  requireSameSignature(schema, instance);
  schema.signature().requireSubset(x1 | x2);
  const AttrSet removed = x1 | x2;
  const FdSchema sub = project(normalize(schema), removed);
  const auto cols1 = x1.positions(), cols2 = x2.positions();

  std::map<std::vector<Constant>, std::size_t> leftIds, rightIds;
  std::map<std::pair<std::vector<Constant>, std::vector<Constant>>, std::vector<Fact>> blocks;
  for (const auto& f : instance.facts()) {
    std::vector<Constant> kx, ky;
    for (auto c : cols1) kx.push_back(f[c]);
    for (auto c : cols2) ky.push_back(f[c]);
    leftIds.emplace(kx, 0);
    rightIds.emplace(ky, 0);
    blocks[{std::move(kx), std::move(ky)}].push_back(projectFact(f, removed));
  }
  BipartiteMatchProblem problem;
  for (auto& [k, id] : leftIds) {
    id = problem.left.size();
    problem.left.push_back(k);
  }
  for (auto& [k, id] : rightIds) {
    id = problem.right.size();
    problem.right.push_back(k);
  }
  for (auto& [key, facts] : blocks) {
    auto r = findCRep(sub, Instance(sub.signature(), std::move(facts)));
    if (!r) return std::nullopt;
    problem.edges.push_back(
        WeightedEdge{leftIds.at(key.first), rightIds.at(key.second), static_cast<std::int64_t>(r->size)});
  }
  problem.canonicalize();
  return problem;
}

}  // namespace crepair
