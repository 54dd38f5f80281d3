#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "crepair/constant.hpp"

namespace crepair {

struct WeightedEdge {
  std::size_t left;
  std::size_t right;
  std::int64_t weight;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Bipartite graph with labelled nodes. In the repair engine a left node is a
/// realized X1-value tuple, a right node an X2-value tuple, and an edge weight
/// the repair size of the block that carries both.
///
/// Edges are kept sorted by (left, right); that order is the one used for
/// tie-breaking between matchings of equal weight.
struct BipartiteMatchProblem {
  std::vector<std::vector<Constant>> left;
  std::vector<std::vector<Constant>> right;
  std::vector<WeightedEdge> edges;

  /// Sorts edges and rejects duplicates, out-of-range endpoints and negative weights.
  void canonicalize() {
    std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
      return a.left != b.left ? a.left < b.left : a.right < b.right;
    });
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto& e = edges[i];
      if (e.left >= left.size() || e.right >= right.size()) {
        throw std::invalid_argument("matching edge endpoint out of range");
      }
      if (e.weight < 0) throw std::invalid_argument("matching edge weight is negative");
      if (i && edges[i - 1].left == e.left && edges[i - 1].right == e.right) {
        throw std::invalid_argument("duplicate matching edge");
      }
    }
  }
};

/// A matching as indices into problem.edges, ascending.
struct Matching {
  std::vector<std::size_t> edges;
  std::int64_t weight = 0;

  friend bool operator==(const Matching&, const Matching&) = default;
};

namespace detail {

inline constexpr std::int64_t kNoEdge = -1;

struct Assignment {
  std::int64_t value = 0;
  std::vector<std::size_t> rowToCol;  // for each row, its column
};

// Hungarian algorithm with potentials on a rows x cols matrix, rows <= cols.
// Maximizes the total of w[r][c] over an assignment of every row; absent
// edges (kNoEdge) count as zero, which is harmless since weights are >= 0.
inline Assignment hungarianMax(const std::vector<std::vector<std::int64_t>>& w, std::size_t rows,
                               std::size_t cols) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  auto cost = [&](std::size_t r, std::size_t c) -> std::int64_t {
    std::int64_t x = w[r][c];
    return x == kNoEdge ? 0 : -x;
  };
  // 1-based, following the classic formulation.
  std::vector<std::int64_t> u(rows + 1, 0), v(cols + 1, 0);
  std::vector<std::size_t> p(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(cols + 1, kInf);
    std::vector<char> used(cols + 1, 0);
    do {
      used[j0] = 1;
      std::size_t i0 = p[j0], j1 = 0;
      std::int64_t delta = kInf;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        std::int64_t cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  Assignment a;
  a.rowToCol.assign(rows, 0);
  for (std::size_t j = 1; j <= cols; ++j) {
    if (p[j]) a.rowToCol[p[j] - 1] = j - 1;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    std::int64_t x = w[r][a.rowToCol[r]];
    if (x != kNoEdge) a.value += x;
  }
  return a;
}

// Optimal matching weight on the live edges, plus the matched (left -> right)
// pairs that are real edges.
struct Solved {
  std::int64_t value = 0;
  std::vector<std::int64_t> leftToRight;  // -1 if unmatched
};

inline Solved solveLive(const BipartiteMatchProblem& p, const std::vector<char>& live) {
  const std::size_t L = p.left.size(), R = p.right.size();
  Solved s;
  s.leftToRight.assign(L, -1);
  if (L == 0 || R == 0) return s;
  const bool transpose = L > R;
  const std::size_t rows = transpose ? R : L, cols = transpose ? L : R;
  std::vector<std::vector<std::int64_t>> w(rows, std::vector<std::int64_t>(cols, kNoEdge));
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    if (!live[k]) continue;
    const auto& e = p.edges[k];
    if (transpose) w[e.right][e.left] = e.weight;
    else w[e.left][e.right] = e.weight;
  }
  auto a = hungarianMax(w, rows, cols);
  s.value = a.value;
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t c = a.rowToCol[r];
    if (w[r][c] == kNoEdge) continue;
    if (transpose) s.leftToRight[c] = static_cast<std::int64_t>(r);
    else s.leftToRight[r] = static_cast<std::int64_t>(c);
  }
  return s;
}

}  // namespace detail

/// Maximum-weight matching. Among all maximum-weight matchings it returns the
/// one that wins the earliest-edge comparison: walking edges in canonical
/// order, the first edge on which two maxima differ belongs to the winner.
///
/// Implementation: one Hungarian solve for the optimum, then a greedy pass
/// that commits each edge in order if some optimum still contains it. A
/// re-solve is only needed when the current optimum does not already use the
/// edge under test.
///
/// Returned indices refer to the canonicalized edge list; callers that keep
/// their own edge order should call canonicalize() first.
inline Matching maxWeightMatching(BipartiteMatchProblem problem) {
  problem.canonicalize();
  const auto& edges = problem.edges;
  std::vector<char> live(edges.size(), 1);

  auto current = detail::solveLive(problem, live);
  std::int64_t target = current.value;

  Matching out;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (!live[k]) continue;
    const auto& e = edges[k];
    bool accept = false;
    if (current.leftToRight[e.left] == static_cast<std::int64_t>(e.right)) {
      accept = true;
    } else {
      std::vector<char> trial = live;
      for (std::size_t q = 0; q < edges.size(); ++q) {
        if (edges[q].left == e.left || edges[q].right == e.right) trial[q] = 0;
      }
      auto rest = detail::solveLive(problem, trial);
      if (rest.value + e.weight == target) {
        accept = true;
        current = std::move(rest);
        current.leftToRight[e.left] = static_cast<std::int64_t>(e.right);
      }
    }
    if (accept) {
      out.edges.push_back(k);
      out.weight += e.weight;
      target -= e.weight;
      for (std::size_t q = 0; q < edges.size(); ++q) {
        if (edges[q].left == e.left || edges[q].right == e.right) live[q] = 0;
      }
      current.leftToRight[e.left] = -1;
    } else {
      live[k] = 0;
    }
  }
  return out;
}

}  // namespace crepair
