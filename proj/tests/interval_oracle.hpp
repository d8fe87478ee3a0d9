#pragma once

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "kss/interval.hpp"
#include "kss/interval_embed.hpp"

namespace kss::test {

// Random polynomial of total degree <= 4 in three variables.
struct Monomial {
  int coef;
  std::array<int, 3> exp;
};

template <class Rng>
std::vector<Monomial> random_polynomial(Rng& rng) {
  std::uniform_int_distribution<int> coef(-9, 9), count(1, 6), e(0, 4);
  std::vector<Monomial> p;
  for (int k = count(rng); k > 0; --k) {
    Monomial m{coef(rng), {e(rng), e(rng), e(rng)}};
    for (int v = 0; m.exp[0] + m.exp[1] + m.exp[2] > 4; v = (v + 1) % 3)
      if (m.exp[v] > 0) --m.exp[v];
    p.push_back(m);
  }
  return p;
}

// Naive interval evaluation: repeated multiplication, no power rules.
inline Interval eval_interval(const std::vector<Monomial>& p, const IntervalBox& b) {
  Interval sum = 0.0;
  for (const auto& m : p) {
    Interval term = static_cast<double>(m.coef);
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < m.exp[v]; ++k) term = IA::mul(term, b[v]);
    sum = IA::add(sum, term);
  }
  return sum;
}

inline mpq_class eval_exact(const std::vector<Monomial>& p, const std::array<double, 3>& x) {
  mpq_class sum = 0;
  for (const auto& m : p) {
    mpq_class term = m.coef;
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < m.exp[v]; ++k) term *= mpq_class(x[v]);
    sum += term;
  }
  return sum;
}

// Interval ranges of random polynomials over random boxes must contain the
// exact rational value at a point of the box. Returns "" when they all do.
inline std::string enclosure_failure(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(-2, 2), width(0, 1), t(0, 1);
  for (int trial = 0; trial < trials; ++trial) {
    IntervalBox b(3);
    for (auto& x : b) {
      const double c = centre(rng), w = width(rng);
      x = {c, c + w};
    }
    const auto p = random_polynomial(rng);
    const Interval range = eval_interval(p, b);
    const std::array<double, 3> point{b[0].lo + t(rng) * b[0].width(), b[1].lo + t(rng) * b[1].width(),
                                      b[2].hi};
    const mpq_class value = eval_exact(p, point);
    if (mpq_class(range.lo) > value || mpq_class(range.hi) < value)
      return "trial " + std::to_string(trial) + ": range misses the exact value";
  }
  return "";
}

// Feasible points of the separated system, enclosed in tiny boxes (the true
// point has irrational coordinates).
struct Planted {
  IntervalBox box;
};

// Star K1,3 pins 0 -> e1, 1 -> e2; leaves 2, 3 lie on the circle x = 0.
inline std::vector<Planted> plant_star(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> angle(0.1, 3.0);
  std::vector<Planted> out;
  while (static_cast<int>(out.size()) < count) {
    const double a = angle(rng), b = angle(rng);
    if (std::abs(a - b) < 0.1 || std::abs(a - M_PI_2) < 0.1 || std::abs(b - M_PI_2) < 0.1) continue;
    Planted p;
    for (double t : {a, b})
      for (double c : {0.0, std::cos(t), std::sin(t)}) p.box.push_back({c - 1e-14, c + 1e-14});
    p.box[0] = 0.0;
    p.box[3] = 0.0;
    out.push_back(p);
  }
  return out;
}

// Bowtie (two triangles sharing vertex 0): triangle 0,1,2 pinned, vertices 3, 4
// orthogonal to e1 and to each other.
inline std::vector<Planted> plant_bowtie(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> angle(0.1, M_PI_2 - 0.1);
  std::vector<Planted> out;
  for (int i = 0; i < count; ++i) {
    const double t = angle(rng);
    Planted p;
    p.box = {0.0, {std::cos(t) - 1e-14, std::cos(t) + 1e-14}, {std::sin(t) - 1e-14, std::sin(t) + 1e-14},
             0.0, {-std::sin(t) - 1e-14, -std::sin(t) + 1e-14}, {std::cos(t) - 1e-14, std::cos(t) + 1e-14}};
    out.push_back(p);
  }
  return out;
}

inline bool overlaps(const IntervalBox& a, const IntervalBox& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!intersect(a[i], b[i])) return false;
  return true;
}

// Runs a budgeted branch-and-prune on g and checks that no box holding a
// planted point is ever discarded. Returns "" on success.
inline std::string cover_failure(const Graph& g, const std::vector<Planted>& planted) {
  DecideOptions opt;
  opt.budget = 3000;
  opt.eager_existence = 0;
  opt.existence_period = 1 << 30;
  int tracked = 0;
  std::string failure;
  opt.on_contract = [&](const IntervalBox& before, const IntervalBox* after) {
    for (const auto& p : planted) {
      if (!box_subset(p.box, before)) continue;
      ++tracked;
      if (after == nullptr || !overlaps(*after, p.box))
        if (failure.empty()) failure = "a box holding a planted point was discarded";
    }
  };
  opt.on_bisect = [&](const IntervalBox& parent, const IntervalBox& left, const IntervalBox& right) {
    for (std::size_t k = 0; k < parent.size(); ++k)
      if (!(hull(left[k], right[k]) == parent[k]) && failure.empty()) failure = "bisection does not cover its parent";
  };
  const auto v = decide_embeddability(g, opt);
  if (!failure.empty()) return failure;
  if (v.kind != VerdictKind::kInconclusive) return "expected the budget to run out";
  if (tracked == 0) return "no planted point was tracked";
  for (const auto& p : planted) {
    bool live = false;
    for (const auto& b : v.residual) live = live || overlaps(b, p.box);
    if (!live) return "a planted point is missing from the residual boxes";
  }
  return "";
}

inline Graph bowtie() {
  Graph g(5);
  for (auto [u, v] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}})
    g.add_edge(u, v);
  return g;
}

}  // namespace kss::test
