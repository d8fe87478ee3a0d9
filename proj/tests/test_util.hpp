#pragma once

#include <random>

#include "kss/graph.hpp"

namespace kss::test {

inline Graph complete(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

inline Graph cycle(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

inline Graph path(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph star(int leaves) {
  Graph g(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

template <class Rng>
Graph random_graph(Rng& rng, int n, double density) {
  std::bernoulli_distribution coin(density);
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) g.add_edge(i, j);
  return g;
}

/// Random square-free graph: add edges in random order, skipping those that close a square.
template <class Rng>
Graph random_square_free(Rng& rng, int n, int attempts) {
  Graph g(n);
  if (n < 2) return g;
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int t = 0; t < attempts; ++t) {
    const int u = pick(rng), v = pick(rng);
    if (u == v || g.has_edge(u, v)) continue;
    g.add_edge(u, v);
    bool square = false;
    for (int w = 0; w < n && !square; ++w)
      if (w != u && popcount(g.row(u) & g.row(w)) >= 2) square = true;
    for (int w = 0; w < n && !square; ++w)
      if (w != v && popcount(g.row(v) & g.row(w)) >= 2) square = true;
    if (square) g.remove_edge(u, v);
  }
  return g;
}

}  // namespace kss::test
