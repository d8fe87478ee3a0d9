#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kss/graph.hpp"
#include "kss/orderly.hpp"

// Exhaustive reference implementations, deliberately sharing no code with the
// bit-parallel predicates or the canonicity search. Used as test oracles.
namespace kss::brute {

/// Labeled graph on n vertices from a code read as an integer, first bit most significant.
inline Graph graph_from_index(int n, std::uint32_t index) {
  const int length = n * (n - 1) / 2;
  Graph g(n);
  int p = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i, ++p)
      if ((index >> (length - 1 - p)) & 1U) g.add_edge(i, j);
  return g;
}

inline std::uint32_t index_of(int n, const std::vector<std::vector<bool>>& adj) {
  std::uint32_t index = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) index = (index << 1) | (adj[i][j] ? 1U : 0U);
  return index;
}

inline std::vector<std::vector<bool>> matrix(const Graph& g) {
  std::vector<std::vector<bool>> m(g.n(), std::vector<bool>(g.n(), false));
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) m[i][j] = g.has_edge(i, j);
  return m;
}

/// Scan every 4-subset and each of its three cyclic arrangements.
inline bool has_square(const Graph& g) {
  const auto m = matrix(g);
  const int n = g.n();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          if (m[a][b] && m[b][c] && m[c][d] && m[d][a]) return true;
          if (m[a][b] && m[b][d] && m[d][c] && m[c][a]) return true;
          if (m[a][c] && m[c][b] && m[b][d] && m[d][a]) return true;
        }
  return false;
}

inline bool connected(const Graph& g) {
  const auto m = matrix(g);
  std::vector<bool> seen(g.n(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < g.n(); ++w)
      if (m[v][w] && !seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == g.n();
}

inline int triangle_count(const Graph& g) {
  const auto m = matrix(g);
  int count = 0;
  for (int a = 0; a < g.n(); ++a)
    for (int b = a + 1; b < g.n(); ++b)
      for (int c = b + 1; c < g.n(); ++c) count += m[a][b] && m[b][c] && m[a][c];
  return count;
}

/// Greatest code over all n! relabelings.
inline std::uint32_t max_code_index(const Graph& g) {
  const auto m = matrix(g);
  std::vector<int> perm(g.n());
  std::iota(perm.begin(), perm.end(), 0);
  std::uint32_t best = 0;
  std::vector<std::vector<bool>> r(g.n(), std::vector<bool>(g.n(), false));
  do {
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j) r[i][j] = m[perm[i]][perm[j]];
    best = std::max(best, index_of(g.n(), r));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// One representative per isomorphism class among all labeled graphs on n <= 7
/// vertices passing the filters. Representatives carry the maximal code.
inline std::vector<Graph> brute_force_classes(int n, const EnumFilters& filters) {
  if (n < 1 || n > 7) throw std::invalid_argument("brute_force_classes: n must be in 1..7");
  const int length = n * (n - 1) / 2;
  const std::uint32_t total = std::uint32_t{1} << length;
  std::vector<bool> seen(total, false);
  std::vector<Graph> reps;
  std::vector<int> perm(n);
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::uint32_t index = 0; index < total; ++index) {
    if (seen[index]) continue;
    const Graph g = graph_from_index(n, index);
    const auto m = matrix(g);
    std::uint32_t best = 0;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[i][j] = m[perm[i]][perm[j]];
      const std::uint32_t image = index_of(n, r);
      seen[image] = true;
      best = std::max(best, image);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (filters.square_free && has_square(g)) continue;
    if (filters.connected && !connected(g)) continue;
    reps.push_back(graph_from_index(n, best));
  }
  return reps;
}

/// Exhaustive 2^n scan for a 101-colouring (1 = value 1).
inline bool colourable_101(const Graph& g) {
  const auto m = matrix(g);
  const int n = g.n();
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
    auto val = [&](int v) { return (a >> v) & 1U; };
    bool ok = true;
    for (int u = 0; u < n && ok; ++u)
      for (int v = u + 1; v < n && ok; ++v) {
        if (!m[u][v]) continue;
        if (!val(u) && !val(v)) ok = false;
        for (int w = v + 1; w < n && ok; ++w)
          if (m[u][w] && m[v][w] && val(u) && val(v) && val(w)) ok = false;
      }
    if (ok) return true;
  }
  return false;
}

/// Exhaustive k^n scan for a proper k-colouring.
inline bool colourable_k(const Graph& g, int k) {
  const int n = g.n();
  std::vector<int> c(n, 0);
  while (true) {
    bool ok = true;
    for (int u = 0; u < n && ok; ++u)
      for (int v = u + 1; v < n && ok; ++v)
        if (g.has_edge(u, v) && c[u] == c[v]) ok = false;
    if (ok) return true;
    int p = 0;
    while (p < n && ++c[p] == k) c[p++] = 0;
    if (p == n) return false;
  }
}

}  // namespace kss::brute
