#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kss/graph.hpp"
#include "kss/sat.hpp"
#include "json.hpp"

namespace kss {

/// 0/1 per vertex. Rule (i): no edge with both ends 0. Rule (ii): no triangle all 1.
using Colouring101 = std::vector<int>;

struct Colour101Result {
  std::optional<Colouring101> colouring;  // empty when uncolourable
  sat::Stats stats;

  bool colourable() const { return colouring.has_value(); }
};

namespace detail {

inline sat::Solver build_101(const SparseGraph& g) {
  sat::Solver solver(g.n());
  for (int v = 0; v < g.n(); ++v) solver.set_priority(v, static_cast<double>(g.adj[v].size()));
  for (int u = 0; u < g.n(); ++u)
    for (int v : g.adj[u])
      if (u < v) solver.add_clause({sat::pos(u), sat::pos(v)});
  for (const auto& t : triangles(g))
    solver.add_clause({sat::neg(t[0]), sat::neg(t[1]), sat::neg(t[2])});
  return solver;
}

}  // namespace detail

/// Exact 101-colourability. Variable true means value 1; branching starts at
/// the highest-degree vertex with value 0.
inline Colour101Result solve_101(const SparseGraph& g) {
  auto solver = detail::build_101(g);
  Colour101Result result;
  if (solver.solve() == sat::Status::kSat) {
    Colouring101 c(g.n());
    for (int v = 0; v < g.n(); ++v) c[v] = solver.model()[v] ? 1 : 0;
    result.colouring = std::move(c);
  }
  result.stats = solver.stats();
  return result;
}

inline Colour101Result solve_101(const Graph& g) { return solve_101(to_sparse(g)); }

inline bool is_101_colourable(const SparseGraph& g) { return solve_101(g).colourable(); }
inline bool is_101_colourable(const Graph& g) { return solve_101(g).colourable(); }

/// Direct scan of both rules.
inline bool valid_101(const SparseGraph& g, const Colouring101& c) {
  if (static_cast<int>(c.size()) != g.n()) return false;
  for (int v = 0; v < g.n(); ++v)
    if (c[v] != 0 && c[v] != 1) return false;
  for (int u = 0; u < g.n(); ++u)
    for (int v : g.adj[u])
      if (c[u] == 0 && c[v] == 0) return false;
  for (const auto& t : triangles(g))
    if (c[t[0]] == 1 && c[t[1]] == 1 && c[t[2]] == 1) return false;
  return true;
}

inline bool valid_101(const Graph& g, const Colouring101& c) { return valid_101(to_sparse(g), c); }

// ---------------------------------------------------------------------------
// Proper k-colouring

/// Colours 1..k per vertex.
using KColouring = std::vector<int>;

namespace detail {

inline std::optional<KColouring> two_colour(const SparseGraph& g) {
  KColouring c(g.n(), 0);
  for (int s = 0; s < g.n(); ++s) {
    if (c[s] != 0) continue;
    c[s] = 1;
    std::vector<int> queue{s};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int v = queue[q];
      for (int w : g.adj[v]) {
        if (c[w] == 0) {
          c[w] = 3 - c[v];
          queue.push_back(w);
        } else if (c[w] == c[v]) {
          return std::nullopt;
        }
      }
    }
  }
  return c;
}

// DSATUR-ordered backtracking: most constrained vertex first, ties by degree then index.
class KColourSearch {
 public:
  KColourSearch(const SparseGraph& g, int k)
      : g_(g), k_(k), colour_(g.n(), 0), forbidden_(g.n(), std::vector<int>(k + 1, 0)) {}

  std::optional<KColouring> run() {
    if (search(0)) return colour_;
    return std::nullopt;
  }

 private:
  int saturation(int v) const {
    int s = 0;
    for (int c = 1; c <= k_; ++c) s += forbidden_[v][c] > 0;
    return s;
  }

  bool search(int coloured) {
    if (coloured == g_.n()) return true;
    int best = -1, best_sat = -1, best_deg = -1;
    for (int v = 0; v < g_.n(); ++v) {
      if (colour_[v] != 0) continue;
      const int s = saturation(v);
      const int d = static_cast<int>(g_.adj[v].size());
      if (s > best_sat || (s == best_sat && d > best_deg)) {
        best = v;
        best_sat = s;
        best_deg = d;
      }
    }
    if (best_sat == k_) return false;
    // Colours above the largest used one are interchangeable: try only the first.
    int used = 0;
    for (int c : colour_) used = std::max(used, c);
    for (int c = 1; c <= std::min(k_, used + 1); ++c) {
      if (forbidden_[best][c] > 0) continue;
      colour_[best] = c;
      for (int w : g_.adj[best]) ++forbidden_[w][c];
      if (search(coloured + 1)) return true;
      for (int w : g_.adj[best]) --forbidden_[w][c];
      colour_[best] = 0;
    }
    return false;
  }

  const SparseGraph& g_;
  int k_;
  KColouring colour_;
  std::vector<std::vector<int>> forbidden_;
};

}  // namespace detail

/// Exact proper k-colouring for k in 2..4, with witness when one exists.
inline std::optional<KColouring> k_colouring(const SparseGraph& g, int k) {
  if (k < 2 || k > 4) throw std::invalid_argument("k_colouring: k must be in 2..4");
  if (k == 2) return detail::two_colour(g);
  return detail::KColourSearch(g, k).run();
}

inline std::optional<KColouring> k_colouring(const Graph& g, int k) {
  return k_colouring(to_sparse(g), k);
}

inline bool is_k_colourable(const Graph& g, int k) { return k_colouring(g, k).has_value(); }
inline bool is_k_colourable(const SparseGraph& g, int k) { return k_colouring(g, k).has_value(); }

inline bool valid_k_colouring(const Graph& g, const KColouring& c, int k) {
  if (static_cast<int>(c.size()) != g.n()) return false;
  for (int v = 0; v < g.n(); ++v)
    if (c[v] < 1 || c[v] > k) return false;
  for (auto [u, v] : g.edges())
    if (c[u] == c[v]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Candidate filter

enum class RejectReason {
  kNone,
  kSquare,
  kThreeColourable,
  kNotFourColourable,
  kMinDegree,
  kVertexWithoutTriangle,
};

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kNone: return "pass";
    case RejectReason::kSquare: return "square";
    case RejectReason::kThreeColourable: return "3-colourable";
    case RejectReason::kNotFourColourable: return "not-4-colourable";
    case RejectReason::kMinDegree: return "min-degree";
    case RejectReason::kVertexWithoutTriangle: return "vertex-without-triangle";
  }
  return "?";
}

/// Necessary conditions for the graph of a minimal KS system, checked in this
/// order: square-free, not 3-colourable, 4-colourable, minimum degree 3, every
/// vertex in a triangle. Returns the first failure.
inline RejectReason candidate_filter(const Graph& g) {
  if (!is_square_free(g)) return RejectReason::kSquare;
  if (is_k_colourable(g, 3)) return RejectReason::kThreeColourable;
  if (!is_k_colourable(g, 4)) return RejectReason::kNotFourColourable;
  if (min_degree(g) < 3) return RejectReason::kMinDegree;
  if (!every_vertex_in_triangle(g)) return RejectReason::kVertexWithoutTriangle;
  return RejectReason::kNone;
}

// ---------------------------------------------------------------------------
// Interchange

/// DIMACS CNF: variable v+1 true means vertex v gets 1.
inline std::string export_dimacs_101(const Graph& g) {
  const auto tris = triangles(g);
  const auto edges = g.edges();
  std::ostringstream out;
  out << "c 101-colouring of a " << g.n() << "-vertex graph; x_v true means value 1\n";
  out << "p cnf " << g.n() << ' ' << edges.size() + tris.size() << '\n';
  for (auto [u, v] : edges) out << u + 1 << ' ' << v + 1 << " 0\n";
  for (const auto& t : tris) out << -(t[0] + 1) << ' ' << -(t[1] + 1) << ' ' << -(t[2] + 1) << " 0\n";
  return out.str();
}

inline nlohmann::json colouring_json(const std::vector<int>& values) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t v = 0; v < values.size(); ++v) j[std::to_string(v)] = values[v];
  return j;
}

}  // namespace kss
