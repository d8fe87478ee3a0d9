#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kss/graph.hpp"
#include "json.hpp"

namespace kss {

/// Integer direction on the surface of the cube [-N,N]^3, antipodes identified.
struct GridDirection {
  int x = 0, y = 0, z = 0;

  friend auto operator<=>(const GridDirection&, const GridDirection&) = default;

  int chebyshev() const { return std::max({std::abs(x), std::abs(y), std::abs(z)}); }

  /// Representative of {d, -d}: first nonzero coordinate in (z, y, x) order is positive.
  GridDirection normalized() const {
    const int lead = z != 0 ? z : (y != 0 ? y : x);
    return lead < 0 ? GridDirection{-x, -y, -z} : *this;
  }

  bool is_normalized() const { return normalized() == *this; }
};

inline std::int64_t dot(const GridDirection& a, const GridDirection& b) {
  return std::int64_t{a.x} * b.x + std::int64_t{a.y} * b.y + std::int64_t{a.z} * b.z;
}

inline GridDirection cross(const GridDirection& a, const GridDirection& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// The multiple of d with Chebyshev norm exactly N, if it is integral.
inline std::optional<GridDirection> scale_to_grid(GridDirection d, int N) {
  const int g = std::gcd(std::gcd(std::abs(d.x), std::abs(d.y)), std::abs(d.z));
  if (g == 0) return std::nullopt;
  d = {d.x / g, d.y / g, d.z / g};
  const int m = d.chebyshev();
  if (N % m != 0) return std::nullopt;
  const int s = N / m;
  return GridDirection{d.x * s, d.y * s, d.z * s}.normalized();
}

inline std::int64_t grid_direction_count(int N) {
  const std::int64_t outer = 2 * std::int64_t{N} + 1, inner = 2 * std::int64_t{N} - 1;
  return (outer * outer * outer - inner * inner * inner) / 2;
}

/// All normalized directions of Chebyshev norm N (sorted) and their orthogonality.
class GridSystem {
 public:
  explicit GridSystem(int N) : N_(N) {
    if (N < 1 || N > 32) throw std::invalid_argument("GridSystem: N must be in 1..32");
    const int side = 2 * N + 1;
    index_.assign(static_cast<std::size_t>(side) * side * side, -1);
    for (int x = -N; x <= N; ++x)
      for (int y = -N; y <= N; ++y)
        for (int z = -N; z <= N; ++z) {
          const GridDirection d{x, y, z};
          if (d.chebyshev() == N && d.is_normalized()) directions_.push_back(d);
        }
    for (std::size_t i = 0; i < directions_.size(); ++i)
      index_[slot(directions_[i])] = static_cast<int>(i);
    orth_.resize(directions_.size());
    for (std::size_t i = 0; i < directions_.size(); ++i)
      for (std::size_t j = i + 1; j < directions_.size(); ++j)
        if (dot(directions_[i], directions_[j]) == 0) {
          orth_[i].push_back(static_cast<int>(j));
          orth_[j].push_back(static_cast<int>(i));
        }
    for (auto& o : orth_) std::sort(o.begin(), o.end());
  }

  int N() const { return N_; }
  int size() const { return static_cast<int>(directions_.size()); }
  const std::vector<GridDirection>& directions() const { return directions_; }
  const GridDirection& direction(int i) const { return directions_[i]; }
  /// Indices of directions orthogonal to direction i, ascending.
  const std::vector<int>& orthogonal(int i) const { return orth_[i]; }

  /// Index of d (any sign), or -1 when d is not on this grid.
  int index_of(const GridDirection& d) const {
    if (d.chebyshev() != N_) return -1;
    return index_[slot(d.normalized())];
  }

 private:
  std::size_t slot(const GridDirection& d) const {
    const std::size_t side = 2 * static_cast<std::size_t>(N_) + 1;
    return (static_cast<std::size_t>(d.x + N_) * side + static_cast<std::size_t>(d.y + N_)) * side +
           static_cast<std::size_t>(d.z + N_);
  }

  int N_;
  std::vector<GridDirection> directions_;
  std::vector<int> index_;
  std::vector<std::vector<int>> orth_;
};

inline GridSystem generate_grid(int N) { return GridSystem(N); }

/// Orthogonality graph: vertex i is direction i, edges join orthogonal directions.
inline SparseGraph grid_graph(const GridSystem& sys) {
  SparseGraph g(sys.size());
  for (int i = 0; i < sys.size(); ++i) g.adj[i] = sys.orthogonal(i);
  return g;
}

/// The 48 signed coordinate permutations acting on directions.
inline std::vector<GridDirection> cube_images(const GridDirection& d) {
  static constexpr std::array<std::array<int, 3>, 6> kPerms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  const std::array<int, 3> c{d.x, d.y, d.z};
  std::vector<GridDirection> out;
  for (const auto& p : kPerms)
    for (int s = 0; s < 8; ++s) {
      const int a = (s & 1 ? -1 : 1) * c[p[0]];
      const int b = (s & 2 ? -1 : 1) * c[p[1]];
      const int e = (s & 4 ? -1 : 1) * c[p[2]];
      out.push_back(GridDirection{a, b, e}.normalized());
    }
  return out;
}

/// Smallest-index member of each orbit of the cube symmetry group, ascending.
inline std::vector<int> orbit_representatives(const GridSystem& sys) {
  std::vector<bool> covered(sys.size(), false);
  std::vector<int> reps;
  for (int i = 0; i < sys.size(); ++i) {
    if (covered[i]) continue;
    reps.push_back(i);
    for (const auto& image : cube_images(sys.direction(i))) covered[sys.index_of(image)] = true;
  }
  return reps;
}

inline nlohmann::json to_json(const GridDirection& d) { return nlohmann::json::array({d.x, d.y, d.z}); }

inline nlohmann::json grid_json(const GridSystem& sys) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : sys.directions()) out.push_back(to_json(d));
  return out;
}

}  // namespace kss
