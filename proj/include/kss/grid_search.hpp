#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "kss/canonical.hpp"
#include "kss/colouring.hpp"
#include "kss/graph.hpp"
#include "kss/graph6.hpp"
#include "kss/grid.hpp"

namespace kss {

/// A set of grid directions (indices into the grid) and its orthogonality graph.
struct GridSubsystem {
  std::vector<int> vertices;
  SparseGraph graph;
};

/// Vertex scan order for greedy minimization: identity for seed 0, otherwise a
/// seeded Fisher-Yates shuffle.
inline std::vector<int> scan_order(int n, std::uint64_t seed) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (seed == 0) return order;
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

/// Greedy inclusion-minimal reduction of an uncolourable graph. One pass in
/// scan order suffices: colourability is hereditary, so a vertex that could
/// not be dropped earlier cannot be dropped later either.
/// Returns the kept vertices in ascending order.
inline std::vector<int> minimize_uncolourable(const SparseGraph& g, const std::vector<int>& order) {
  std::vector<bool> keep(g.n(), true);
  auto current = [&](int skip) {
    std::vector<int> vs;
    for (int v = 0; v < g.n(); ++v)
      if (keep[v] && v != skip) vs.push_back(v);
    return vs;
  };
  if (is_101_colourable(g))
    throw std::invalid_argument("minimize_uncolourable: graph is 101-colourable");
  for (int v : order) {
    if (!is_101_colourable(g.induced(current(v)))) keep[v] = false;
  }
  return current(-1);
}

inline GridSubsystem minimize_uncolourable(const GridSystem& sys, std::uint64_t seed = 0) {
  const SparseGraph g = grid_graph(sys);
  GridSubsystem out;
  out.vertices = minimize_uncolourable(g, scan_order(g.n(), seed));
  out.graph = g.induced(out.vertices);
  return out;
}

/// Removing any single vertex restores colourability.
inline bool is_critical(const SparseGraph& g) {
  if (is_101_colourable(g)) return false;
  for (int v = 0; v < g.n(); ++v) {
    std::vector<int> rest;
    for (int w = 0; w < g.n(); ++w)
      if (w != v) rest.push_back(w);
    if (!is_101_colourable(g.induced(rest))) return false;
  }
  return true;
}

/// Canonical graph6 of a small subsystem graph; the isomorphism-class key.
inline std::string canonical_key(const SparseGraph& g,
                                 std::uint64_t node_limit = kDefaultCanonNodeLimit) {
  return graph6_encode(canonical_label(to_dense(g), node_limit));
}

enum class SubsystemMode { kSampled, kExhaustive };

struct SubsystemSearchOptions {
  int size_bound = 31;
  std::uint64_t budget = 64;  // sampled: minimization runs; exhaustive: search nodes
  SubsystemMode mode = SubsystemMode::kSampled;
  std::uint64_t seed = 1;
};

struct SubsystemSearchResult {
  std::vector<GridSubsystem> systems;  // one per isomorphism class, in discovery order
  std::vector<std::string> keys;
  bool grid_colourable = false;  // then the stream is empty and complete
  bool truncated = false;        // budget ran out before the search was complete
  std::uint64_t work = 0;
};

namespace detail {

// Depth-first over keep/drop decisions in vertex order, dropping first. A kept
// set that is colourable is pruned (all its subsets are colourable too).
class ExhaustiveSubsystems {
 public:
  ExhaustiveSubsystems(const SparseGraph& g, const SubsystemSearchOptions& opt,
                       SubsystemSearchResult& out)
      : g_(g), opt_(opt), out_(out), keep_(g.n(), true) {}

  void run() { visit(0, g_.n()); }

 private:
  std::vector<int> kept() const {
    std::vector<int> vs;
    for (int v = 0; v < g_.n(); ++v)
      if (keep_[v]) vs.push_back(v);
    return vs;
  }

  void visit(int v, int size) {
    if (out_.truncated) return;
    if (++out_.work > opt_.budget) {
      out_.truncated = true;
      return;
    }
    const auto vs = kept();
    const SparseGraph sub = g_.induced(vs);
    if (is_101_colourable(sub)) return;
    if (v == g_.n()) {
      if (size <= opt_.size_bound && is_critical(sub)) record(vs, sub);
      return;
    }
    keep_[v] = false;
    visit(v + 1, size - 1);
    keep_[v] = true;
    visit(v + 1, size);
  }

  void record(const std::vector<int>& vs, const SparseGraph& sub) {
    const std::string key = canonical_key(sub);
    for (const auto& k : out_.keys)
      if (k == key) return;
    out_.keys.push_back(key);
    out_.systems.push_back({vs, sub});
  }

  const SparseGraph& g_;
  const SubsystemSearchOptions& opt_;
  SubsystemSearchResult& out_;
  std::vector<bool> keep_;
};

}  // namespace detail

/// Non-101-colourable induced subsystems of size <= size_bound, deduplicated
/// by canonical label. Sampled mode runs greedy minimization from seeded scan
/// orders; exhaustive mode walks keep/drop decisions under a node budget.
inline SubsystemSearchResult enumerate_grid_subsystems(const GridSystem& sys,
                                                       const SubsystemSearchOptions& opt) {
  SubsystemSearchResult out;
  const SparseGraph g = grid_graph(sys);
  if (is_101_colourable(g)) {
    out.grid_colourable = true;
    return out;
  }
  if (opt.mode == SubsystemMode::kExhaustive) {
    if (g.n() > kMaxVertices)
      throw std::invalid_argument("enumerate_grid_subsystems: exhaustive mode needs <= 64 directions");
    detail::ExhaustiveSubsystems(g, opt, out).run();
    return out;
  }
  for (std::uint64_t run = 0; run < opt.budget; ++run) {
    ++out.work;
    const std::uint64_t seed = run == 0 ? 0 : opt.seed + run;
    const auto vs = minimize_uncolourable(g, scan_order(g.n(), seed));
    if (static_cast<int>(vs.size()) > opt.size_bound) continue;
    GridSubsystem s{vs, g.induced(vs)};
    if (is_101_colourable(s.graph)) throw std::logic_error("subsystem failed re-validation");
    const std::string key = canonical_key(s.graph);
    bool seen = false;
    for (const auto& k : out.keys) seen = seen || k == key;
    if (seen) continue;
    out.keys.push_back(key);
    out.systems.push_back(std::move(s));
  }
  // Sampling never certifies completeness.
  out.truncated = true;
  return out;
}

inline nlohmann::json subsystem_json(const GridSystem& sys, const GridSubsystem& s) {
  nlohmann::json dirs = nlohmann::json::array();
  for (int v : s.vertices) dirs.push_back(to_json(sys.direction(v)));
  return {{"graph6", graph6_encode(to_dense(s.graph))}, {"size", s.vertices.size()},
          {"directions", dirs}};
}

}  // namespace kss
