#pragma once

#include <chrono>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kss/brute_force.hpp"
#include "kss/canonical.hpp"
#include "kss/colouring.hpp"
#include "kss/grid.hpp"
#include "kss/grid_embed.hpp"
#include "kss/grid_search.hpp"
#include "kss/orderly.hpp"
#include "json.hpp"

namespace kss {

struct VerifyReport {
  std::string name;
  bool passed = true;
  std::vector<std::string> lines;
  nlohmann::json artifacts = nlohmann::json::object();

  void check(bool ok, const std::string& what) {
    passed = passed && ok;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

inline const std::vector<std::string>& known_bundles() {
  static const std::vector<std::string> names{"grid-counts", "odd-grid-colourability", "n2-critical-31",
                                              "counts-vs-oracle", "prop5-prefixes"};
  return names;
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline void verify_grid_counts(VerifyReport& rep) {
  for (int N = 1; N <= 12; ++N) {
    const GridSystem sys(N);
    rep.check(sys.size() == grid_direction_count(N),
              "N=" + std::to_string(N) + ": " + std::to_string(sys.size()) + " directions, formula " +
                  std::to_string(grid_direction_count(N)));
    if (N <= 4) {
      std::int64_t surface = 0;
      for (int x = -N; x <= N; ++x)
        for (int y = -N; y <= N; ++y)
          for (int z = -N; z <= N; ++z) surface += std::max({std::abs(x), std::abs(y), std::abs(z)}) == N;
      rep.check(2 * sys.size() == surface, "N=" + std::to_string(N) + ": half of " + std::to_string(surface) +
                                               " surface points");
    }
  }
  rep.check(GridSystem(1).size() == 13 && GridSystem(2).size() == 49 && GridSystem(4).size() == 193,
            "13, 49, 193 directions for N = 1, 2, 4");
}

inline void verify_odd_grids(VerifyReport& rep) {
  for (int N = 1; N <= 15; N += 2) {
    const auto t0 = std::chrono::steady_clock::now();
    const GridSystem sys(N);
    const SparseGraph g = grid_graph(sys);
    const auto r = solve_101(g);
    const double t = seconds_since(t0);
    const std::string tag = "N=" + std::to_string(N) + " (" + std::to_string(sys.size()) + " directions, " +
                            std::to_string(t) + " s)";
    if (N <= 13) {
      rep.check(r.colourable() && valid_101(g, *r.colouring), tag + ": 101-colourable, witness valid");
      if (r.colourable()) rep.artifacts["witness_N" + std::to_string(N)] = *r.colouring;
    } else {
      rep.check(!r.colourable(), tag + ": not 101-colourable");
    }
  }
}

inline void verify_n2_critical(VerifyReport& rep, int scan_orders = 8) {
  const GridSystem sys(2);
  const SparseGraph g = grid_graph(sys);
  rep.check(sys.size() == 49 && !is_101_colourable(g), "N=2 grid graph (49 directions) is not 101-colourable");
  std::set<std::string> keys31;
  std::string key;
  SparseGraph smallest;
  std::size_t min_size = 1000;
  nlohmann::json runs = nlohmann::json::array();
  for (int seed = 0; seed < scan_orders; ++seed) {
    const auto sub = minimize_uncolourable(sys, static_cast<std::uint64_t>(seed));
    const bool critical = is_critical(sub.graph);
    rep.check(critical && sub.vertices.size() >= 31,
              "scan order " + std::to_string(seed) + ": critical subsystem of size " +
                  std::to_string(sub.vertices.size()));
    runs.push_back({{"seed", seed}, {"size", sub.vertices.size()}});
    if (sub.vertices.size() == 31) {
      key = canonical_key(sub.graph);
      keys31.insert(key);
    }
    if (sub.vertices.size() < min_size) {
      min_size = sub.vertices.size();
      smallest = sub.graph;
    }
  }
  rep.artifacts["runs"] = runs;
  rep.check(keys31.size() == 1, "size-31 outcomes share one canonical label (" + std::to_string(keys31.size()) +
                                    " distinct)");
  if (keys31.size() != 1) return;
  rep.artifacts["graph6"] = key;
  const Graph g31 = graph6_decode(key);
  for (int N : {2, 8}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto e = grid_embed(g31, N);
    const double t = seconds_since(t0);
    const double limit = N == 2 ? 1.0 : 25.0;
    rep.check(e.outcome == GridOutcome::kEmbedded && valid_grid_embedding(g31, e.embedding, N) && t < limit,
              "31-vertex graph embeds on N=" + std::to_string(N) + " in " + std::to_string(t) + " s (limit " +
                  std::to_string(limit) + " s)");
    if (e.outcome == GridOutcome::kEmbedded) rep.artifacts["embedding_N" + std::to_string(N)] = embedding_json(e.embedding);
  }
}

inline void verify_counts_vs_oracle(VerifyReport& rep, int n_max = 7) {
  for (int n = 1; n <= n_max; ++n) {
    std::set<std::string> mine, oracle;
    enumerate(n, {}, [&](const Graph& g) { mine.insert(encode_upper_triangle(g).to_string()); });
    for (const auto& g : brute::brute_force_classes(n, {})) oracle.insert(encode_upper_triangle(g).to_string());
    rep.check(mine == oracle, "n=" + std::to_string(n) + ": " + std::to_string(mine.size()) +
                                  " canonical codes, oracle " + std::to_string(oracle.size()));
  }
}

inline void verify_prop5_prefixes(VerifyReport& rep, int n_max = 8) {
  for (int n = 2; n <= n_max; ++n) {
    std::uint64_t graphs = 0, bad_canon = 0, bad_conn = 0;
    enumerate(n, {}, [&](const Graph& g) {
      ++graphs;
      for (Graph p = g.without_last(); p.n() >= 1; p = p.without_last()) {
        bad_canon += !is_canonical(p);
        bad_conn += !is_connected(p);
        if (p.n() == 1) break;
      }
    });
    rep.check(bad_canon == 0 && bad_conn == 0,
              "n=" + std::to_string(n) + ": every prefix of " + std::to_string(graphs) +
                  " canonical connected graphs is canonical and connected");
  }
  // Without the connected filter, connected canonical graphs still have connected prefixes.
  for (int n = 2; n <= 7; ++n) {
    std::uint64_t bad = 0;
    enumerate(n, {true, false}, [&](const Graph& g) {
      if (!is_connected(g)) return;
      for (Graph p = g.without_last(); p.n() >= 1; p = p.without_last()) {
        bad += !is_connected(p);
        if (p.n() == 1) break;
      }
    });
    rep.check(bad == 0, "n=" + std::to_string(n) + ": connected prefixes under square-free-only enumeration");
  }
}

}  // namespace detail

/// Runs one named bundle of known results.
inline VerifyReport verify_known(const std::string& name) {
  VerifyReport rep;
  rep.name = name;
  if (name == "grid-counts") detail::verify_grid_counts(rep);
  else if (name == "odd-grid-colourability") detail::verify_odd_grids(rep);
  else if (name == "n2-critical-31") detail::verify_n2_critical(rep);
  else if (name == "counts-vs-oracle") detail::verify_counts_vs_oracle(rep);
  else if (name == "prop5-prefixes") detail::verify_prop5_prefixes(rep);
  else throw std::invalid_argument("verify_known: unknown bundle '" + name + "'");
  return rep;
}

}  // namespace kss
