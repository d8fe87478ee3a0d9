#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kss/graph.hpp"

namespace kss {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Both searches build a vertex ordering position by position. When positions
// 0..j-1 are fixed, column j of the relabeled matrix for candidate v is the
// j-bit value colval[v] (adjacency to the placed vertices, position 0 first),
// so the code is compared column by column as plain integers.
class OrderingSearch {
 public:
  explicit OrderingSearch(const Graph& g) : g_(g), n_(g.n()) {}

 protected:
  void start() {
    for (int v = 0; v < n_; ++v) colval_[0][v] = 0;
    placed_ = 0;
  }

  // Fill level j+1 from level j after placing v at position j.
  void place(int j, int v) {
    perm_[j] = v;
    const Row nv = g_.row(v);
    for (Row free = g_.all_vertices() & ~placed_ & ~bit(v); free != 0; free &= free - 1) {
      const int u = std::countr_zero(free);
      colval_[j + 1][u] = (colval_[j][u] << 1) | ((nv >> u) & 1U);
    }
    placed_ |= bit(v);
  }

  void unplace(int v) { placed_ &= ~bit(v); }

  Row unplaced() const { return g_.all_vertices() & ~placed_; }

  const Graph& g_;
  int n_;
  Row placed_ = 0;
  std::array<int, kMaxVertices> perm_;
  std::array<std::array<Row, kMaxVertices>, kMaxVertices + 1> colval_;
};

class CanonicityCheck : OrderingSearch {
 public:
  explicit CanonicityCheck(const Graph& g) : OrderingSearch(g) {
    for (int j = 0; j < n_; ++j) target_[j] = column_value(g, j);
  }

  bool run() {
    start();
    return !exceeds(0);
  }

 private:
  // True when some completion of the current prefix beats the input's code.
  bool exceeds(int j) {
    if (j == n_) return false;
    const Row want = target_[j];
    Row ties = 0;
    for (Row free = unplaced(); free != 0; free &= free - 1) {
      const int v = std::countr_zero(free);
      const Row c = colval_[j][v];
      if (c > want) return true;
      if (c == want) ties |= bit(v);
    }
    for (; ties != 0; ties &= ties - 1) {
      const int v = std::countr_zero(ties);
      place(j, v);
      const bool hit = exceeds(j + 1);
      unplace(v);
      if (hit) return true;
    }
    return false;
  }

  std::array<Row, kMaxVertices> target_{};
};

class CanonicalLabeling : OrderingSearch {
 public:
  CanonicalLabeling(const Graph& g, std::uint64_t node_limit)
      : OrderingSearch(g), node_limit_(node_limit) {}

  std::vector<int> run() {
    best_.fill(kUnset);
    start();
    descend(0);
    return {best_perm_.begin(), best_perm_.begin() + n_};
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  static constexpr std::int64_t kUnset = -1;

  void descend(int j) {
    if (++nodes_ > node_limit_) {
      throw BudgetExceeded("canonical_label: node limit " + std::to_string(node_limit_) +
                           " exceeded");
    }
    if (j == n_) {
      best_perm_ = perm_;
      return;
    }
    Row top = 0;
    Row ties = 0;
    for (Row free = unplaced(); free != 0; free &= free - 1) {
      const int v = std::countr_zero(free);
      const Row c = colval_[j][v];
      if (c > top || ties == 0) {
        top = c;
        ties = bit(v);
      } else if (c == top) {
        ties |= bit(v);
      }
    }
    const auto value = static_cast<std::int64_t>(top);
    if (value < best_[j]) return;
    if (value > best_[j]) {
      best_[j] = value;
      for (int k = j + 1; k < n_; ++k) best_[k] = kUnset;
    }
    for (; ties != 0; ties &= ties - 1) {
      const int v = std::countr_zero(ties);
      place(j, v);
      descend(j + 1);
      unplace(v);
    }
  }

  std::uint64_t node_limit_;
  std::uint64_t nodes_ = 0;
  std::array<std::int64_t, kMaxVertices> best_{};
  std::array<int, kMaxVertices> best_perm_{};
};

}  // namespace detail

/// True iff no relabeling of g has a strictly greater upper-triangle code.
inline bool is_canonical(const Graph& g) { return detail::CanonicityCheck(g).run(); }

inline constexpr std::uint64_t kDefaultCanonNodeLimit = 50'000'000;

/// Ordering perm such that g.relabeled(perm) carries the greatest code.
inline std::vector<int> canonical_ordering(const Graph& g,
                                           std::uint64_t node_limit = kDefaultCanonNodeLimit) {
  return detail::CanonicalLabeling(g, node_limit).run();
}

/// The relabeled graph with maximum code; isomorphic graphs map to equal graphs.
inline Graph canonical_label(const Graph& g,
                             std::uint64_t node_limit = kDefaultCanonNodeLimit) {
  return g.relabeled(canonical_ordering(g, node_limit));
}

}  // namespace kss
