#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kss/canonical.hpp"
#include "kss/graph.hpp"

namespace kss {

struct EnumFilters {
  bool square_free = true;
  bool connected = true;

  friend bool operator==(const EnumFilters&, const EnumFilters&) = default;
};

/// A canonical, filter-respecting adjacency matrix on k = graph.n() vertices.
struct PrefixState {
  Graph graph;

  int k() const { return graph.n(); }
};

/// Root of one independent DFS subtree: a valid prefix at the split depth.
struct SubtreeTicket {
  PrefixState prefix;

  std::string id() const { return code_to_hex(prefix.graph); }
  static SubtreeTicket from_id(const std::string& id) { return {{graph_from_hex(id)}}; }
};

struct EnumStats {
  std::uint64_t nodes = 0;
  std::uint64_t candidates = 0;
  std::uint64_t canonicity_checks = 0;
  std::uint64_t emitted = 0;
};

namespace detail {

// Calls visit(column) for every admissible last column in descending numeric
// order. Vertex 0 is the most significant bit, so the recursion walks vertices
// in index order and tries "adjacent" before "not adjacent". In square-free
// mode a neighbour set S is admissible iff no old vertex sees two members of
// S; `covered` is the union of the neighbourhoods of S so far.
template <class Visit>
void for_each_column(const Graph& g, bool square_free, int v, Row chosen, Row covered,
                     Visit& visit) {
  const int k = g.n();
  if (v == k) {
    visit(chosen);
    return;
  }
  if (!square_free || (g.row(v) & covered) == 0)
    for_each_column(g, square_free, v + 1, chosen | bit(v), covered | g.row(v), visit);
  for_each_column(g, square_free, v + 1, chosen, covered, visit);
}

}  // namespace detail

/// Canonical one-vertex extensions of p, in descending order of the new column.
/// Filters apply in order: square-free, connected prefix, canonicity.
template <class Sink>
void for_each_extension(const PrefixState& p, const EnumFilters& filters, Sink&& sink,
                        EnumStats* stats = nullptr) {
  auto visit = [&](Row column) {
    if (stats) ++stats->candidates;
    if (filters.connected && column == 0) return;
    Graph child = p.graph.with_vertex(column);
    if (stats) ++stats->canonicity_checks;
    if (!is_canonical(child)) return;
    sink(PrefixState{std::move(child)});
  };
  detail::for_each_column(p.graph, filters.square_free, 0, 0, 0, visit);
}

inline std::vector<PrefixState> extend(const PrefixState& p, const EnumFilters& filters) {
  std::vector<PrefixState> out;
  for_each_extension(p, filters, [&](PrefixState s) { out.push_back(std::move(s)); });
  return out;
}

namespace detail {

template <class Sink>
void orderly_dfs(const PrefixState& p, int n_target, const EnumFilters& filters, Sink& sink,
                 EnumStats& stats) {
  ++stats.nodes;
  if (p.k() == n_target) {
    ++stats.emitted;
    sink(p.graph);
    return;
  }
  for_each_extension(
      p, filters, [&](PrefixState child) { orderly_dfs(child, n_target, filters, sink, stats); },
      &stats);
}

}  // namespace detail

/// Streams one canonical representative per isomorphism class on n_target
/// vertices, in DFS order. With a ticket, only that subtree is explored.
template <class Sink>
EnumStats enumerate(int n_target, const EnumFilters& filters, Sink&& sink,
                    const SubtreeTicket* ticket = nullptr) {
  if (n_target < 1 || n_target > kMaxVertices)
    throw std::invalid_argument("enumerate: n must be in 1..64");
  EnumStats stats;
  PrefixState root{Graph(1)};
  if (ticket) {
    root = ticket->prefix;
    if (root.k() > n_target) throw std::invalid_argument("enumerate: ticket deeper than target");
  }
  detail::orderly_dfs(root, n_target, filters, sink, stats);
  return stats;
}

inline std::vector<Graph> enumerate_all(int n_target, const EnumFilters& filters) {
  std::vector<Graph> out;
  enumerate(n_target, filters, [&](const Graph& g) { out.push_back(g); });
  return out;
}

inline constexpr int kDefaultSplitDepth = 7;

/// All prefixes at depth min(depth, n_target); their subtrees partition the enumeration.
inline std::vector<SubtreeTicket> make_tickets(int n_target, const EnumFilters& filters,
                                               int depth = kDefaultSplitDepth) {
  const int d = std::max(1, std::min(depth, n_target));
  std::vector<SubtreeTicket> out;
  enumerate(d, filters, [&](const Graph& g) { out.push_back({{g}}); });
  return out;
}

}  // namespace kss
