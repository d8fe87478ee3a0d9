#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace kss {

/// Closed interval [lo, hi] of doubles. Arithmetic is parameterized by a
/// rounding policy that returns outward-rounded endpoints.
struct Interval {
  double lo = 0.0, hi = 0.0;

  Interval() = default;
  constexpr Interval(double point) : lo(point), hi(point) {}  // NOLINT: implicit from point
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  double width() const { return hi - lo; }
  double mid() const { return lo + (hi - lo) / 2; }
  double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  bool subset_of(const Interval& o) const { return o.lo <= lo && hi <= o.hi; }
  bool interior_of(const Interval& o) const { return o.lo < lo && hi < o.hi; }
  bool is_point() const { return lo == hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Interval& x) {
    return os << '[' << x.lo << ", " << x.hi << ']';
  }
};

inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  const double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
  if (lo > hi) return std::nullopt;
  return Interval{lo, hi};
}

inline Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

namespace rounding {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double down(double x) { return std::nextafter(x, -kInf); }
inline double up(double x) { return std::nextafter(x, kInf); }

// Below this magnitude products and quotients can lose their exact residual
// to underflow, so results are simply pushed one ulp outward. Sums are exact
// to recover at any magnitude.
constexpr double kTiny = 0x1p-960;

/// Correctly rounded operations plus an exact residual (TwoSum, fma) tell
/// which side of the true value the rounded result fell on.
struct Fast {
  static double add_down(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return err < 0 ? down(s) : s;
  }
  static double add_up(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return err > 0 ? up(s) : s;
  }
  static double sub_down(double a, double b) { return add_down(a, -b); }
  static double sub_up(double a, double b) { return add_up(a, -b); }

  static double mul_down(double a, double b) {
    const double p = a * b;
    if (a == 0 || b == 0) return 0.0;
    if (std::abs(p) < kTiny) return down(p);
    return std::fma(a, b, -p) < 0 ? down(p) : p;
  }
  static double mul_up(double a, double b) {
    const double p = a * b;
    if (a == 0 || b == 0) return 0.0;
    if (std::abs(p) < kTiny) return up(p);
    return std::fma(a, b, -p) > 0 ? up(p) : p;
  }

  // Sign of (a/b - q) equals sign of (a - q*b) times sign of b.
  static double div_down(double a, double b) {
    const double q = a / b;
    if (a == 0) return 0.0;
    if (std::abs(q) < kTiny || std::isinf(q)) return down(q);
    const double r = std::fma(-q, b, a);
    return (b > 0 ? r < 0 : r > 0) ? down(q) : q;
  }
  static double div_up(double a, double b) {
    const double q = a / b;
    if (a == 0) return 0.0;
    if (std::abs(q) < kTiny || std::isinf(q)) return up(q);
    const double r = std::fma(-q, b, a);
    return (b > 0 ? r > 0 : r < 0) ? up(q) : q;
  }

  static double sqrt_down(double a) {
    if (a <= 0) return 0.0;
    const double r = std::sqrt(a);
    if (r < kTiny) return down(r);
    return std::fma(-r, r, a) < 0 ? down(r) : r;
  }
  static double sqrt_up(double a) {
    if (a <= 0) return 0.0;
    const double r = std::sqrt(a);
    if (r < kTiny) return up(r);
    return std::fma(-r, r, a) > 0 ? up(r) : r;
  }
};

/// Every endpoint computed exactly over the rationals and then rounded
/// outward to a double. Slow; used to re-check refutations.
struct Exact {
  static mpq_class q(double x) { return mpq_class(x); }

  static double round_down(const mpq_class& v) {
    double d = v.get_d();  // truncates toward zero
    if (mpq_class(d) > v) d = down(d);
    return d;
  }
  static double round_up(const mpq_class& v) {
    double d = v.get_d();
    if (mpq_class(d) < v) d = up(d);
    return d;
  }

  static double add_down(double a, double b) { return round_down(q(a) + q(b)); }
  static double add_up(double a, double b) { return round_up(q(a) + q(b)); }
  static double sub_down(double a, double b) { return round_down(q(a) - q(b)); }
  static double sub_up(double a, double b) { return round_up(q(a) - q(b)); }
  static double mul_down(double a, double b) { return round_down(q(a) * q(b)); }
  static double mul_up(double a, double b) { return round_up(q(a) * q(b)); }
  static double div_down(double a, double b) { return round_down(q(a) / q(b)); }
  static double div_up(double a, double b) { return round_up(q(a) / q(b)); }

  static double sqrt_down(double a) {
    if (a <= 0) return 0.0;
    const mpq_class target = q(a);
    double r = std::sqrt(a);
    while (r > 0 && q(r) * q(r) > target) r = down(r);
    return std::max(r, 0.0);
  }
  static double sqrt_up(double a) {
    if (a <= 0) return 0.0;
    const mpq_class target = q(a);
    double r = std::sqrt(a);
    while (q(r) * q(r) < target) r = up(r);
    return r;
  }
};

}  // namespace rounding

template <class R = rounding::Fast>
struct IntervalOps {
  static Interval add(const Interval& a, const Interval& b) {
    return {R::add_down(a.lo, b.lo), R::add_up(a.hi, b.hi)};
  }
  static Interval sub(const Interval& a, const Interval& b) {
    return {R::sub_down(a.lo, b.hi), R::sub_up(a.hi, b.lo)};
  }
  static Interval neg(const Interval& a) { return {-a.hi, -a.lo}; }

  static Interval mul(const Interval& a, const Interval& b) {
    if (a.is_point() && b.is_point())
      return {R::mul_down(a.lo, b.lo), R::mul_up(a.lo, b.lo)};
    const double c[4][2] = {{a.lo, b.lo}, {a.lo, b.hi}, {a.hi, b.lo}, {a.hi, b.hi}};
    double lo = rounding::kInf, hi = -rounding::kInf;
    for (const auto& p : c) {
      lo = std::min(lo, R::mul_down(p[0], p[1]));
      hi = std::max(hi, R::mul_up(p[0], p[1]));
    }
    return {lo, hi};
  }

  static Interval scale(double k, const Interval& a) {
    if (k >= 0) return {R::mul_down(k, a.lo), R::mul_up(k, a.hi)};
    return {R::mul_down(k, a.hi), R::mul_up(k, a.lo)};
  }

  static Interval sqr(const Interval& a) {
    if (a.lo >= 0) return {R::mul_down(a.lo, a.lo), R::mul_up(a.hi, a.hi)};
    if (a.hi <= 0) return {R::mul_down(a.hi, a.hi), R::mul_up(a.lo, a.lo)};
    const double m = std::max(-a.lo, a.hi);
    return {0.0, R::mul_up(m, m)};
  }

  /// Requires 0 not in b.
  static Interval div(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw std::domain_error("interval division by an interval containing 0");
    const double c[4][2] = {{a.lo, b.lo}, {a.lo, b.hi}, {a.hi, b.lo}, {a.hi, b.hi}};
    double lo = rounding::kInf, hi = -rounding::kInf;
    for (const auto& p : c) {
      lo = std::min(lo, R::div_down(p[0], p[1]));
      hi = std::max(hi, R::div_up(p[0], p[1]));
    }
    return {lo, hi};
  }

  /// Square root of the nonnegative part of a; nullopt when a < 0 entirely.
  static std::optional<Interval> sqrt(const Interval& a) {
    if (a.hi < 0) return std::nullopt;
    return Interval{R::sqrt_down(std::max(a.lo, 0.0)), R::sqrt_up(a.hi)};
  }

  /// {x in x0 : x*y in r for some y in y0}, hull of the relational division.
  static std::optional<Interval> project_product(const Interval& x0, const Interval& y,
                                                 const Interval& r) {
    if (!y.contains_zero()) return intersect(x0, div(r, y));
    if (r.contains_zero()) return x0;
    if (y.lo == 0 && y.hi == 0) return std::nullopt;
    // r strictly one-signed, y straddles or touches 0: x lies in up to two half-lines.
    std::optional<Interval> out;
    auto add_piece = [&](double lo, double hi) {
      if (auto piece = intersect(x0, Interval{lo, hi})) out = out ? hull(*out, *piece) : *piece;
    };
    const double inf = rounding::kInf;
    if (r.lo > 0) {
      if (y.hi > 0) add_piece(R::div_down(r.lo, y.hi), inf);
      if (y.lo < 0) add_piece(-inf, R::div_up(r.lo, y.lo));
    } else {
      if (y.hi > 0) add_piece(-inf, R::div_up(r.hi, y.hi));
      if (y.lo < 0) add_piece(R::div_down(r.hi, y.lo), inf);
    }
    return out;
  }

  /// {x in x0 : x^2 in r}.
  static std::optional<Interval> project_square(const Interval& x0, const Interval& r) {
    const auto root = sqrt(r);
    if (!root) return std::nullopt;
    const auto pos = intersect(x0, *root);
    const auto neg_part = intersect(x0, neg(*root));
    if (pos && neg_part) return hull(*pos, *neg_part);
    return pos ? pos : neg_part;
  }
};

using IA = IntervalOps<rounding::Fast>;

using IntervalBox = std::vector<Interval>;

inline double max_width(const IntervalBox& b) {
  double w = 0;
  for (const auto& x : b) w = std::max(w, x.width());
  return w;
}

inline bool box_contains(const IntervalBox& b, const std::vector<double>& point) {
  if (b.size() != point.size()) return false;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!b[i].contains(point[i])) return false;
  return true;
}

inline bool box_subset(const IntervalBox& inner, const IntervalBox& outer) {
  if (inner.size() != outer.size()) return false;
  for (std::size_t i = 0; i < inner.size(); ++i)
    if (!inner[i].subset_of(outer[i])) return false;
  return true;
}

/// Sum of log2 widths; zero-width dimensions count as a tiny width so
/// volumes stay comparable.
inline double log_volume(const IntervalBox& b) {
  double v = 0;
  for (const auto& x : b) v += std::log2(std::max(x.width(), 1e-300));
  return v;
}

struct WidthUnderflow : std::runtime_error {
  WidthUnderflow() : std::runtime_error("bisect: widest dimension cannot be split") {}
};

/// Split the widest dimension (lowest index on ties) at its midpoint.
inline std::pair<IntervalBox, IntervalBox> bisect(const IntervalBox& b) {
  std::size_t dim = 0;
  double widest = -1;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i].width() > widest) {
      widest = b[i].width();
      dim = i;
    }
  if (b.empty() || !(widest > 0)) throw WidthUnderflow();
  const double m = b[dim].mid();
  if (!(b[dim].lo < m && m < b[dim].hi)) throw WidthUnderflow();
  IntervalBox left = b, right = b;
  left[dim].hi = m;
  right[dim].lo = m;
  return {std::move(left), std::move(right)};
}

}  // namespace kss
