#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kss/graph.hpp"
#include "kss/grid.hpp"
#include "json.hpp"

namespace kss {

/// Vertex v goes to directions[v]; injective and orthogonal along edges.
using GridEmbedding = std::vector<GridDirection>;

enum class GridOutcome { kEmbedded, kNotFound, kBudgetExceeded };

inline const char* to_string(GridOutcome o) {
  switch (o) {
    case GridOutcome::kEmbedded: return "embedded";
    case GridOutcome::kNotFound: return "not-found-on-this-grid";
    case GridOutcome::kBudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

struct GridEmbedResult {
  GridOutcome outcome = GridOutcome::kNotFound;
  GridEmbedding embedding;  // set when embedded
  std::uint64_t nodes = 0;
  bool pinned = false;  // found with the first triangle (or edge) on the axes
};

inline constexpr std::uint64_t kDefaultGridNodeLimit = 200'000'000;

/// Exact integer check of a claimed embedding.
inline bool valid_grid_embedding(const Graph& g, const GridEmbedding& e, int N) {
  if (static_cast<int>(e.size()) != g.n()) return false;
  for (int v = 0; v < g.n(); ++v) {
    if (e[v].chebyshev() != N) return false;
    for (int w = v + 1; w < g.n(); ++w) {
      if (e[v].normalized() == e[w].normalized()) return false;
      if (g.has_edge(v, w) && dot(e[v], e[w]) != 0) return false;
    }
  }
  return true;
}

namespace detail {

class GridSearch {
 public:
  GridSearch(const Graph& g, const GridSystem& sys, std::uint64_t node_limit)
      : g_(g), sys_(sys), node_limit_(node_limit), used_(sys.size(), 0), at_(g.n(), -1) {}

  // Pinned pass: `pins` are fixed to the axis images in `pin_dirs` before searching.
  std::optional<GridEmbedding> run(const std::vector<int>& pins,
                                   const std::vector<GridDirection>& pin_dirs, bool orbit_first) {
    order_ = search_order(pins);
    orbit_first_ = orbit_first;
    std::fill(used_.begin(), used_.end(), 0);
    std::fill(at_.begin(), at_.end(), -1);
    for (std::size_t i = 0; i < pins.size(); ++i) {
      const int idx = sys_.index_of(pin_dirs[i]);
      if (idx < 0 || !consistent(pins[i], idx)) return std::nullopt;
      assign(pins[i], idx);
    }
    if (!descend(pins.size())) return std::nullopt;
    GridEmbedding e(g_.n());
    for (int v = 0; v < g_.n(); ++v) e[v] = sys_.direction(at_[v]);
    return e;
  }

  std::uint64_t nodes() const { return nodes_; }
  bool exhausted_budget() const { return over_budget_; }

 private:
  // Pins first; then repeatedly the vertex with most ordered neighbours,
  // ties by larger degree, then smaller index.
  std::vector<int> search_order(const std::vector<int>& pins) const {
    std::vector<int> order = pins;
    Row placed = 0;
    for (int p : pins) placed |= bit(p);
    while (static_cast<int>(order.size()) < g_.n()) {
      int best = -1, best_links = -1, best_deg = -1;
      for (int v = 0; v < g_.n(); ++v) {
        if (placed & bit(v)) continue;
        const int links = popcount(g_.row(v) & placed);
        const int deg = g_.degree(v);
        if (links > best_links || (links == best_links && deg > best_deg)) {
          best = v;
          best_links = links;
          best_deg = deg;
        }
      }
      order.push_back(best);
      placed |= bit(best);
    }
    return order;
  }

  bool consistent(int v, int idx) const {
    if (used_[idx]) return false;
    const GridDirection& d = sys_.direction(idx);
    for (Row r = g_.row(v); r != 0; r &= r - 1) {
      const int w = std::countr_zero(r);
      if (at_[w] >= 0 && dot(d, sys_.direction(at_[w])) != 0) return false;
    }
    return true;
  }

  void assign(int v, int idx) {
    at_[v] = idx;
    used_[idx] = 1;
  }
  void release(int v) {
    used_[at_[v]] = 0;
    at_[v] = -1;
  }

  bool try_candidate(std::size_t pos, int v, int idx) {
    if (!consistent(v, idx)) return false;
    if (++nodes_ > node_limit_) {
      over_budget_ = true;
      return false;
    }
    assign(v, idx);
    if (descend(pos + 1)) return true;
    release(v);
    return false;
  }

  bool descend(std::size_t pos) {
    if (pos == order_.size()) return true;
    if (over_budget_) return false;
    const int v = order_[pos];
    int first = -1, second = -1;
    for (Row r = g_.row(v); r != 0; r &= r - 1) {
      const int w = std::countr_zero(r);
      if (at_[w] < 0) continue;
      if (first < 0) first = at_[w];
      else if (second < 0) second = at_[w];
    }
    if (second >= 0) {
      // Two distinct placed neighbours fix the direction up to sign.
      const auto d = scale_to_grid(cross(sys_.direction(first), sys_.direction(second)), sys_.N());
      if (!d) return false;
      return try_candidate(pos, v, sys_.index_of(*d));
    }
    if (first >= 0) {
      for (int idx : sys_.orthogonal(first))
        if (try_candidate(pos, v, idx)) return true;
      return false;
    }
    if (pos == 0 && orbit_first_) {
      for (int idx : orbit_representatives(sys_))
        if (try_candidate(pos, v, idx)) return true;
      return false;
    }
    for (int idx = 0; idx < sys_.size(); ++idx)
      if (try_candidate(pos, v, idx)) return true;
    return false;
  }

  const Graph& g_;
  const GridSystem& sys_;
  std::uint64_t node_limit_;
  std::uint64_t nodes_ = 0;
  bool over_budget_ = false;
  bool orbit_first_ = false;
  std::vector<char> used_;
  std::vector<int> at_;
  std::vector<int> order_;
};

}  // namespace detail

/// Backtracking search for an embedding on the grid of parameter sys.N().
/// First pass pins the first triangle (or, without triangles, the first edge)
/// to the coordinate axes. If that fails, an exhaustive pass quotients only by
/// the cube symmetries (the pinned pass alone is incomplete on a grid, since
/// not every orthogonal triple of grid directions is an image of the axes).
inline GridEmbedResult grid_embed(const Graph& g, const GridSystem& sys,
                                  std::uint64_t node_limit = kDefaultGridNodeLimit) {
  GridEmbedResult result;
  if (!is_square_free(g)) return result;
  const int N = sys.N();
  detail::GridSearch search(g, sys, node_limit);

  std::vector<int> pins;
  std::vector<GridDirection> pin_dirs;
  const auto tris = triangles(g);
  if (!tris.empty()) {
    pins = {tris[0][0], tris[0][1], tris[0][2]};
    pin_dirs = {{N, 0, 0}, {0, N, 0}, {0, 0, N}};
  } else if (const auto edges = g.edges(); !edges.empty()) {
    pins = {edges[0].first, edges[0].second};
    pin_dirs = {{N, 0, 0}, {0, N, 0}};
  }
  if (!pins.empty()) {
    if (auto e = search.run(pins, pin_dirs, false)) {
      result.outcome = GridOutcome::kEmbedded;
      result.embedding = std::move(*e);
      result.pinned = true;
      result.nodes = search.nodes();
      return result;
    }
  }
  if (!search.exhausted_budget()) {
    if (auto e = search.run({}, {}, true)) {
      result.outcome = GridOutcome::kEmbedded;
      result.embedding = std::move(*e);
    }
  }
  result.nodes = search.nodes();
  if (result.outcome != GridOutcome::kEmbedded && search.exhausted_budget())
    result.outcome = GridOutcome::kBudgetExceeded;
  return result;
}

inline GridEmbedResult grid_embed(const Graph& g, int N,
                                  std::uint64_t node_limit = kDefaultGridNodeLimit) {
  return grid_embed(g, GridSystem(N), node_limit);
}

inline nlohmann::json embedding_json(const GridEmbedding& e) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t v = 0; v < e.size(); ++v) j[std::to_string(v)] = to_json(e[v]);
  return j;
}

}  // namespace kss
