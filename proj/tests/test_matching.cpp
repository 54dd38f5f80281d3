#include <gtest/gtest.h>

#include "support/generators.hpp"

using namespace crepair;
using namespace crepair::testing;

namespace {

BipartiteMatchProblem graph(std::size_t l, std::size_t r, std::vector<WeightedEdge> edges) {
  BipartiteMatchProblem p;
  for (std::size_t i = 0; i < l; ++i) p.left.push_back({atom("x" + std::to_string(i + 1))});
  for (std::size_t i = 0; i < r; ++i) p.right.push_back({atom("y" + std::to_string(i + 1))});
  p.edges = std::move(edges);
  p.canonicalize();
  return p;
}

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

Pairs pairsOf(const BipartiteMatchProblem& p, const Matching& m) {
  Pairs out;
  for (auto k : m.edges) out.emplace_back(p.edges[k].left, p.edges[k].right);
  return out;
}

TEST(Matching, SingleEdge) {
  auto p = graph(1, 1, {{0, 0, 5}});
  auto m = maxWeightMatching(p);
  EXPECT_EQ(m.weight, 5);
  EXPECT_EQ(pairsOf(p, m), (Pairs{{0, 0}}));
}

TEST(Matching, DiagonalOfK22) {
  auto p = graph(2, 2, {{0, 0, 3}, {0, 1, 1}, {1, 0, 1}, {1, 1, 3}});
  auto m = maxWeightMatching(p);
  EXPECT_EQ(m.weight, 6);
  EXPECT_EQ(pairsOf(p, m), (Pairs{{0, 0}, {1, 1}}));
  EXPECT_EQ(bruteForceMatching(p), m);
}

TEST(Matching, Path) {
  // x1-y1 (4), x2-y1 (3), x2-y2 (2)
  auto p = graph(2, 2, {{0, 0, 4}, {1, 0, 3}, {1, 1, 2}});
  auto m = maxWeightMatching(p);
  EXPECT_EQ(m.weight, 6);
  EXPECT_EQ(pairsOf(p, m), (Pairs{{0, 0}, {1, 1}}));
  EXPECT_EQ(bruteForceMatching(p), m);
}

TEST(Matching, EmptyGraph) {
  auto p = graph(0, 0, {});
  EXPECT_EQ(maxWeightMatching(p), Matching{});
  auto q = graph(3, 2, {});
  EXPECT_EQ(maxWeightMatching(q).weight, 0);
}

TEST(Matching, TieBreakPrefersEarliestEdge) {
  // Both perfect matchings weigh 2; the one using edge (0,0) wins.
  auto p = graph(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
  EXPECT_EQ(pairsOf(p, maxWeightMatching(p)), (Pairs{{0, 0}, {1, 1}}));
  // Zero-weight edges are taken when that wins the comparison.
  auto z = graph(2, 2, {{0, 0, 0}, {1, 1, 4}});
  EXPECT_EQ(pairsOf(z, maxWeightMatching(z)), (Pairs{{0, 0}, {1, 1}}));
  EXPECT_EQ(bruteForceMatching(z), maxWeightMatching(z));
}

TEST(Matching, MoreLeftThanRight) {
  auto p = graph(3, 1, {{0, 0, 1}, {1, 0, 5}, {2, 0, 2}});
  auto m = maxWeightMatching(p);
  EXPECT_EQ(m.weight, 5);
  EXPECT_EQ(pairsOf(p, m), (Pairs{{1, 0}}));
}

TEST(Matching, RejectsBadInput) {
  BipartiteMatchProblem p;
  p.left.push_back({atom("x")});
  p.right.push_back({atom("y")});
  p.edges = {{0, 1, 1}};
  EXPECT_THROW(maxWeightMatching(p), std::invalid_argument);
  p.edges = {{0, 0, -1}};
  EXPECT_THROW(maxWeightMatching(p), std::invalid_argument);
  p.edges = {{0, 0, 1}, {0, 0, 2}};
  EXPECT_THROW(maxWeightMatching(p), std::invalid_argument);
}

TEST(Matching, AgreesWithBruteForce) {
  Rng rng(31);
  for (int t = 0; t < 300; ++t) {
    auto p = randomMatchProblem(rng, 6, 14, 5);
    p.canonicalize();
    auto fast = maxWeightMatching(p);
    auto slow = bruteForceMatching(p);
    EXPECT_EQ(fast.weight, slow.weight);
    EXPECT_EQ(fast.edges, slow.edges);
  }
}

TEST(Matching, ResultIsAMatching) {
  Rng rng(32);
  for (int t = 0; t < 100; ++t) {
    auto p = randomMatchProblem(rng, 12, 60, 9);
    p.canonicalize();
    auto m = maxWeightMatching(p);
    std::vector<char> l(p.left.size()), r(p.right.size());
    std::int64_t w = 0;
    for (auto k : m.edges) {
      EXPECT_FALSE(l[p.edges[k].left]++);
      EXPECT_FALSE(r[p.edges[k].right]++);
      w += p.edges[k].weight;
    }
    EXPECT_EQ(w, m.weight);
    EXPECT_TRUE(std::is_sorted(m.edges.begin(), m.edges.end()));
  }
}

}  // namespace
