#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace kss {

/// Maximum vertex count of a bit-matrix Graph: one adjacency row per machine word.
inline constexpr int kMaxVertices = 64;

using Row = std::uint64_t;

inline constexpr Row bit(int i) { return Row{1} << i; }

inline int popcount(Row r) { return std::popcount(r); }

/// Mask of the vertices numbered strictly above v.
inline constexpr Row higher_than(int v) { return v >= 63 ? Row{0} : ~((Row{1} << (v + 1)) - 1); }

/// Simple undirected graph on at most 64 vertices, stored as symmetric bit rows.
class Graph {
 public:
  Graph() = default;

  explicit Graph(int n) : n_(n) {
    if (n < 1 || n > kMaxVertices) {
      throw std::invalid_argument("Graph: vertex count must be in 1..64, got " +
                                  std::to_string(n));
    }
  }

  Graph(int n, const std::vector<std::pair<int, int>>& edges) : Graph(n) {
    for (auto [u, v] : edges) add_edge(u, v);
  }

  int n() const { return n_; }
  Row row(int v) const { return rows_[v]; }
  bool has_edge(int u, int v) const { return (rows_[u] >> v) & 1U; }
  int degree(int v) const { return popcount(rows_[v]); }

  Row all_vertices() const { return n_ == 64 ? ~Row{0} : bit(n_) - 1; }

  void add_edge(int u, int v) {
    check_pair(u, v);
    rows_[u] |= bit(v);
    rows_[v] |= bit(u);
  }

  void remove_edge(int u, int v) {
    check_pair(u, v);
    rows_[u] &= ~bit(v);
    rows_[v] &= ~bit(u);
  }

  int edge_count() const {
    int twice = 0;
    for (int v = 0; v < n_; ++v) twice += degree(v);
    return twice / 2;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int j = 1; j < n_; ++j)
      for (int i = 0; i < j; ++i)
        if (has_edge(i, j)) out.emplace_back(i, j);
    return out;
  }

  /// Graph with vertex perm[i] of *this placed at position i.
  Graph relabeled(const std::vector<int>& perm) const {
    Graph out(static_cast<int>(perm.size()));
    for (int i = 0; i < out.n_; ++i)
      for (int j = i + 1; j < out.n_; ++j)
        if (has_edge(perm[i], perm[j])) out.add_edge(i, j);
    return out;
  }

  /// Subgraph induced by `vertices`, in the listed order.
  Graph induced(const std::vector<int>& vertices) const { return relabeled(vertices); }

  /// The same graph with one extra vertex adjacent to the vertices in `neighbours`.
  Graph with_vertex(Row neighbours) const {
    Graph out(n_ + 1);
    out.rows_ = rows_;
    for (int v = 0; v < n_; ++v)
      if ((neighbours >> v) & 1U) out.add_edge(v, n_);
    return out;
  }

  /// Drop the highest-numbered vertex.
  Graph without_last() const {
    Graph out(n_ - 1);
    const Row keep = out.all_vertices();
    for (int v = 0; v < n_ - 1; ++v) out.rows_[v] = rows_[v] & keep;
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    if (a.n_ != b.n_) return false;
    return std::equal(a.rows_.begin(), a.rows_.begin() + a.n_, b.rows_.begin());
  }

 private:
  void check_pair(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) {
      throw std::invalid_argument("Graph: bad edge (" + std::to_string(u) + "," +
                                  std::to_string(v) + ")");
    }
  }

  int n_ = 0;
  std::array<Row, kMaxVertices> rows_{};
};

/// Adjacency-list graph without the 64-vertex limit (grid orthogonality graphs).
struct SparseGraph {
  std::vector<std::vector<int>> adj;

  SparseGraph() = default;
  explicit SparseGraph(int n) : adj(static_cast<std::size_t>(n)) {}

  int n() const { return static_cast<int>(adj.size()); }

  void add_edge(int u, int v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }

  void sort_neighbours() {
    for (auto& a : adj) std::sort(a.begin(), a.end());
  }

  bool has_edge(int u, int v) const {
    return std::binary_search(adj[u].begin(), adj[u].end(), v);
  }

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& a : adj) twice += a.size();
    return twice / 2;
  }

  /// Subgraph induced by `vertices`; vertex i of the result is vertices[i].
  SparseGraph induced(const std::vector<int>& vertices) const {
    std::vector<int> position(adj.size(), -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) position[vertices[i]] = static_cast<int>(i);
    SparseGraph out(static_cast<int>(vertices.size()));
    for (std::size_t i = 0; i < vertices.size(); ++i)
      for (int w : adj[vertices[i]])
        if (position[w] > static_cast<int>(i)) out.add_edge(static_cast<int>(i), position[w]);
    out.sort_neighbours();
    return out;
  }
};

inline SparseGraph to_sparse(const Graph& g) {
  SparseGraph s(g.n());
  for (auto [u, v] : g.edges()) s.add_edge(u, v);
  s.sort_neighbours();
  return s;
}

inline Graph to_dense(const SparseGraph& s) {
  Graph g(s.n());
  for (int u = 0; u < s.n(); ++u)
    for (int v : s.adj[u])
      if (u < v) g.add_edge(u, v);
  return g;
}

// ---------------------------------------------------------------------------
// Upper-triangle code

/// Entries strictly above the diagonal, column by column (top to bottom), left to right.
struct UpperTriangleCode {
  int n = 0;
  std::vector<bool> bits;

  std::string to_string() const {
    std::string s;
    s.reserve(bits.size());
    for (bool b : bits) s.push_back(b ? '1' : '0');
    return s;
  }

  friend auto operator<=>(const UpperTriangleCode& a, const UpperTriangleCode& b) {
    if (auto c = a.n <=> b.n; c != 0) return c;
    return std::lexicographical_compare_three_way(a.bits.begin(), a.bits.end(), b.bits.begin(),
                                                  b.bits.end());
  }
  friend bool operator==(const UpperTriangleCode&, const UpperTriangleCode&) = default;
};

inline UpperTriangleCode encode_upper_triangle(const Graph& g) {
  UpperTriangleCode code{g.n(), {}};
  code.bits.reserve(static_cast<std::size_t>(g.n()) * (g.n() - 1) / 2);
  for (int j = 1; j < g.n(); ++j)
    for (int i = 0; i < j; ++i) code.bits.push_back(g.has_edge(i, j));
  return code;
}

inline Graph decode_upper_triangle(const UpperTriangleCode& code) {
  if (code.bits.size() != static_cast<std::size_t>(code.n) * (code.n - 1) / 2) {
    throw std::invalid_argument("decode_upper_triangle: length does not match n");
  }
  Graph g(code.n);
  std::size_t p = 0;
  for (int j = 1; j < code.n; ++j)
    for (int i = 0; i < j; ++i)
      if (code.bits[p++]) g.add_edge(i, j);
  return g;
}

/// Column j read as a j-bit number, row 0 most significant. Comparing these
/// column values in order j = 1..n-1 is the lexicographic order on codes.
inline Row column_value(const Graph& g, int j) {
  Row c = 0;
  for (int i = 0; i < j; ++i) c = (c << 1) | static_cast<Row>(g.has_edge(i, j));
  return c;
}

/// Compact "n:hex" form of the code, used to name enumeration tickets.
inline std::string code_to_hex(const Graph& g) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const auto code = encode_upper_triangle(g);
  std::string out = std::to_string(g.n()) + ":";
  for (std::size_t p = 0; p < code.bits.size(); p += 4) {
    int nibble = 0;
    for (std::size_t q = 0; q < 4; ++q)
      nibble = (nibble << 1) | ((p + q < code.bits.size() && code.bits[p + q]) ? 1 : 0);
    out.push_back(kDigits[nibble]);
  }
  return out;
}

inline Graph graph_from_hex(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("graph_from_hex: missing ':'");
  const int n = std::stoi(text.substr(0, colon));
  UpperTriangleCode code{n, {}};
  const std::size_t length = static_cast<std::size_t>(n) * (n - 1) / 2;
  const std::string hex = text.substr(colon + 1);
  if (hex.size() != (length + 3) / 4) throw std::invalid_argument("graph_from_hex: bad length");
  for (std::size_t p = 0; p < length; ++p) {
    const char c = hex[p / 4];
    int nibble = 0;
    if (c >= '0' && c <= '9') nibble = c - '0';
    else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
    else throw std::invalid_argument("graph_from_hex: bad digit");
    code.bits.push_back((nibble >> (3 - p % 4)) & 1);
  }
  return decode_upper_triangle(code);
}

// ---------------------------------------------------------------------------
// Predicates

/// No 4-cycle as a subgraph: two vertices sharing two common neighbours close a square.
inline bool is_square_free(const Graph& g) {
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j)
      if (popcount(g.row(i) & g.row(j)) >= 2) return false;
  return true;
}

inline bool is_connected(const Graph& g) {
  Row seen = bit(0);
  Row frontier = bit(0);
  while (frontier != 0) {
    Row next = 0;
    for (Row f = frontier; f != 0; f &= f - 1) next |= g.row(std::countr_zero(f));
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == g.all_vertices();
}

using Triangle = std::array<int, 3>;

/// Every 3-clique once, as ascending triples in ascending order.
inline std::vector<Triangle> triangles(const Graph& g) {
  std::vector<Triangle> out;
  for (int a = 0; a < g.n(); ++a) {
    for (Row rb = g.row(a) & higher_than(a); rb != 0; rb &= rb - 1) {
      const int b = std::countr_zero(rb);
      for (Row rc = g.row(a) & g.row(b) & higher_than(b); rc != 0; rc &= rc - 1)
        out.push_back({a, b, std::countr_zero(rc)});
    }
  }
  return out;
}

inline std::vector<Triangle> triangles(const SparseGraph& g) {
  std::vector<Triangle> out;
  for (int a = 0; a < g.n(); ++a) {
    for (int b : g.adj[a]) {
      if (b <= a) continue;
      const auto& na = g.adj[a];
      const auto& nb = g.adj[b];
      auto ia = std::upper_bound(na.begin(), na.end(), b);
      auto ib = std::upper_bound(nb.begin(), nb.end(), b);
      while (ia != na.end() && ib != nb.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else {
          out.push_back({a, b, *ia});
          ++ia;
          ++ib;
        }
      }
    }
  }
  return out;
}

inline int min_degree(const Graph& g) {
  int best = g.n();
  for (int v = 0; v < g.n(); ++v) best = std::min(best, g.degree(v));
  return best;
}

inline bool every_vertex_in_triangle(const Graph& g) {
  for (int v = 0; v < g.n(); ++v) {
    bool found = false;
    for (Row r = g.row(v); r != 0 && !found; r &= r - 1)
      found = (g.row(v) & g.row(std::countr_zero(r))) != 0;
    if (!found) return false;
  }
  return true;
}

}  // namespace kss
