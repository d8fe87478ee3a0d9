#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kss/graph.hpp"
#include "kss/graph6.hpp"
#include "kss/interval.hpp"
#include "json.hpp"

namespace kss {

constexpr double kDefaultDelta = 1e-4;
// Smaller separations round 1 - delta^2/2 up to 1 and stop separating anything.
constexpr double kMinDelta = 0x1p-26;
constexpr std::uint64_t kDefaultIntervalBudget = 1'000'000;

/// coef * (1 | x_a | x_a^2 | x_a*x_b), selected by which indices are set.
struct Term {
  double coef = 1.0;
  int a = -1;
  int b = -1;

  bool is_constant() const { return a < 0; }
  bool is_linear() const { return a >= 0 && b < 0; }
  bool is_square() const { return a >= 0 && a == b; }
};

/// sum(terms) in target.
struct Constraint {
  enum class Kind { kNorm, kEdge, kSeparation };
  Kind kind = Kind::kEdge;
  int u = -1, v = -1;  // vertices involved (v = -1 for a norm)
  std::vector<Term> terms;
  Interval target;

  bool has_variables() const {
    for (const auto& t : terms)
      if (!t.is_constant()) return true;
    return false;
  }
};

struct ConstraintSystem {
  int n = 0;
  double delta = kDefaultDelta;
  double separation = 1.0;  // |u.v| <= separation for non-adjacent pairs
  std::vector<int> pinned;
  std::vector<std::array<double, 3>> pinned_dirs;
  std::vector<int> free_vertices;
  std::vector<int> var_base;  // per vertex: first of its 3 variables, -1 when pinned
  int num_vars = 0;
  std::vector<Constraint> constraints;

  /// [-1,1] x [-1,1] x [0,1] per free vertex.
  IntervalBox initial_box() const {
    IntervalBox b;
    for (std::size_t i = 0; i < free_vertices.size(); ++i) {
      b.push_back({-1.0, 1.0});
      b.push_back({-1.0, 1.0});
      b.push_back({0.0, 1.0});
    }
    return b;
  }

  /// Indices of the norm and edge constraints that involve variables.
  std::vector<int> equations() const {
    std::vector<int> eq;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      const auto& c = constraints[i];
      if (c.kind != Constraint::Kind::kSeparation && c.has_variables())
        eq.push_back(static_cast<int>(i));
    }
    return eq;
  }

  /// Coordinates of vertex v as intervals over box b.
  std::array<Interval, 3> vertex(const IntervalBox& b, int v) const {
    if (var_base[v] < 0) {
      for (std::size_t i = 0; i < pinned.size(); ++i)
        if (pinned[i] == v) return {pinned_dirs[i][0], pinned_dirs[i][1], pinned_dirs[i][2]};
    }
    const int k = var_base[v];
    return {b[k], b[k + 1], b[k + 2]};
  }
};

namespace detail {

// Pinned coordinates are constants; free ones are variables.
inline std::vector<Term> dot_terms(const ConstraintSystem& cs, int u, int v) {
  std::vector<Term> terms;
  double constant = 0;
  auto coord = [&](int w, int k) -> std::pair<int, double> {
    if (cs.var_base[w] >= 0) return {cs.var_base[w] + k, 0.0};
    for (std::size_t i = 0; i < cs.pinned.size(); ++i)
      if (cs.pinned[i] == w) return {-1, cs.pinned_dirs[i][k]};
    throw std::logic_error("vertex neither free nor pinned");
  };
  for (int k = 0; k < 3; ++k) {
    const auto [a, ca] = coord(u, k);
    const auto [b, cb] = coord(v, k);
    if (a >= 0 && b >= 0) {
      terms.push_back({1.0, a, b});
    } else if (a >= 0) {
      if (cb != 0) terms.push_back({cb, a, -1});
    } else if (b >= 0) {
      if (ca != 0) terms.push_back({ca, b, -1});
    } else {
      constant += ca * cb;
    }
  }
  if (constant != 0 || terms.empty()) terms.push_back({constant, -1, -1});
  return terms;
}

}  // namespace detail

/// Orthogonality constraint system of g. Pins the first triangle to the
/// coordinate axes (or, without triangles, the first edge to e1, e2); the
/// remaining vertices get three variables each, in ascending vertex order.
inline ConstraintSystem build_constraint_system(const Graph& g, double delta = kDefaultDelta) {
  if (g.edges().empty())
    throw std::invalid_argument("build_constraint_system: graph has no edges (trivially embeddable)");
  if (!(delta >= kMinDelta && delta < 1))
    throw std::invalid_argument("build_constraint_system: delta must be in [2^-26, 1)");
  ConstraintSystem cs;
  cs.n = g.n();
  cs.delta = delta;
  // |u-v|^2 >= delta^2 and |u+v|^2 >= delta^2 on the unit sphere.
  cs.separation = rounding::Fast::sub_up(1.0, rounding::Fast::mul_down(delta, delta) / 2);
  const auto tris = triangles(g);
  if (!tris.empty()) {
    cs.pinned = {tris[0][0], tris[0][1], tris[0][2]};
    cs.pinned_dirs = {{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}};
  } else {
    const auto e = g.edges().front();
    cs.pinned = {e.first, e.second};
    cs.pinned_dirs = {{{1, 0, 0}}, {{0, 1, 0}}};
  }
  cs.var_base.assign(g.n(), -1);
  for (int v = 0; v < g.n(); ++v) {
    if (std::find(cs.pinned.begin(), cs.pinned.end(), v) != cs.pinned.end()) continue;
    cs.var_base[v] = cs.num_vars;
    cs.num_vars += 3;
    cs.free_vertices.push_back(v);
  }
  using Kind = Constraint::Kind;
  for (int v : cs.free_vertices) {
    const int k = cs.var_base[v];
    cs.constraints.push_back({Kind::kNorm, v, -1, {{1.0, k, k}, {1.0, k + 1, k + 1}, {1.0, k + 2, k + 2}}, {1.0, 1.0}});
  }
  for (auto [u, v] : g.edges())
    cs.constraints.push_back({Kind::kEdge, u, v, detail::dot_terms(cs, u, v), {0.0, 0.0}});
  for (int u = 0; u < g.n(); ++u)
    for (int v = u + 1; v < g.n(); ++v)
      if (!g.has_edge(u, v))
        cs.constraints.push_back({Kind::kSeparation, u, v, detail::dot_terms(cs, u, v),
                                  {-cs.separation, cs.separation}});
  return cs;
}

template <class R = rounding::Fast>
Interval eval_term(const Term& t, const IntervalBox& b) {
  using Ops = IntervalOps<R>;
  if (t.is_constant()) return t.coef;
  if (t.is_linear()) return Ops::scale(t.coef, b[t.a]);
  if (t.is_square()) return Ops::scale(t.coef, Ops::sqr(b[t.a]));
  return Ops::scale(t.coef, Ops::mul(b[t.a], b[t.b]));
}

template <class R = rounding::Fast>
Interval eval_constraint(const Constraint& c, const IntervalBox& b) {
  Interval sum = 0.0;
  for (const auto& t : c.terms) sum = IntervalOps<R>::add(sum, eval_term<R>(t, b));
  return sum;
}

/// Constraint index and the box over which its evaluation missed the target.
struct Refutation {
  int constraint = -1;
  IntervalBox box;
};

namespace detail {

// One hull-consistency pass of constraint c. Returns false when c is violated.
template <class R>
bool revise(const Constraint& c, IntervalBox& b) {
  using Ops = IntervalOps<R>;
  std::vector<Interval> vals;
  for (const auto& t : c.terms) vals.push_back(eval_term<R>(t, b));
  for (std::size_t k = 0; k <= c.terms.size(); ++k) {
    Interval total = 0.0;
    for (const auto& v : vals) total = Ops::add(total, v);
    if (!intersect(total, c.target)) return false;
    if (k == c.terms.size()) break;
    const Term& t = c.terms[k];
    if (t.is_constant()) continue;
    Interval others = 0.0;
    for (std::size_t j = 0; j < vals.size(); ++j)
      if (j != k) others = Ops::add(others, vals[j]);
    const Interval allowed = Ops::div(Ops::sub(c.target, others), Interval(t.coef));
    std::optional<Interval> narrowed;
    if (t.is_linear()) {
      narrowed = intersect(b[t.a], allowed);
      if (!narrowed) return false;
      b[t.a] = *narrowed;
    } else if (t.is_square()) {
      narrowed = Ops::project_square(b[t.a], allowed);
      if (!narrowed) return false;
      b[t.a] = *narrowed;
    } else {
      narrowed = Ops::project_product(b[t.a], b[t.b], allowed);
      if (!narrowed) return false;
      b[t.a] = *narrowed;
      narrowed = Ops::project_product(b[t.b], b[t.a], allowed);
      if (!narrowed) return false;
      b[t.b] = *narrowed;
    }
    vals[k] = eval_term<R>(t, b);
  }
  return true;
}

}  // namespace detail

/// Hull-consistency narrowing to a (loose) fixed point. Returns nullopt when
/// some constraint's interval evaluation excludes its target; `why` then
/// records the constraint and the box it was evaluated over.
template <class R = rounding::Fast>
std::optional<IntervalBox> contract(const IntervalBox& box, const ConstraintSystem& cs,
                                    Refutation* why = nullptr, int max_rounds = 24) {
  IntervalBox b = box;
  for (int round = 0; round < max_rounds; ++round) {
    const IntervalBox before = b;
    for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
      IntervalBox trial = b;
      if (!detail::revise<R>(cs.constraints[i], trial)) {
        if (why != nullptr) *why = {static_cast<int>(i), b};
        return std::nullopt;
      }
      b = std::move(trial);
    }
    bool progress = false;
    for (std::size_t k = 0; k < b.size(); ++k)
      progress = progress || b[k].width() < 0.9 * before[k].width();
    if (!progress) break;
  }
  return b;
}

/// Exact rational interval evaluation of the refuting constraint: confirms
/// that its range over the recorded box misses the target.
inline bool confirm_refutation(const ConstraintSystem& cs, const Refutation& r) {
  if (r.constraint < 0 || r.constraint >= static_cast<int>(cs.constraints.size())) return false;
  const Constraint& c = cs.constraints[r.constraint];
  auto q = [](double x) { return mpq_class(x); };
  mpq_class lo = 0, hi = 0;
  for (const auto& t : c.terms) {
    mpq_class tlo, thi;
    if (t.is_constant()) {
      tlo = thi = q(t.coef);
    } else {
      const Interval x = r.box[t.a];
      const Interval y = t.is_linear() ? Interval(1.0) : r.box[t.b];
      std::vector<mpq_class> c4{q(x.lo) * q(y.lo), q(x.lo) * q(y.hi), q(x.hi) * q(y.lo), q(x.hi) * q(y.hi)};
      tlo = *std::min_element(c4.begin(), c4.end());
      thi = *std::max_element(c4.begin(), c4.end());
      if (t.is_square() && x.lo < 0 && x.hi > 0) tlo = 0;
      tlo *= q(t.coef);
      thi *= q(t.coef);
      if (t.coef < 0) std::swap(tlo, thi);
    }
    lo += tlo;
    hi += thi;
  }
  return hi < q(c.target.lo) || lo > q(c.target.hi);
}

// ---------------------------------------------------------------------------
// Existence by the Krawczyk operator

struct ExistenceResult {
  bool certified = false;
  IntervalBox box;              // certified box (fixed variables are points)
  std::vector<int> fixed_vars;  // variables held at a point value
  std::vector<int> equations;   // constraint indices solved for the unknowns
  std::string diagnostic;
  int iterations = 0;
};

struct ExistenceOptions {
  std::optional<std::vector<int>> fixed_vars;  // chosen by pivoting when absent
  int max_iterations = 12;
};

namespace detail {

inline Eigen::MatrixXd point_jacobian(const ConstraintSystem& cs, const std::vector<int>& eqs,
                                      const std::vector<double>& x) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(eqs.size()), cs.num_vars);
  for (std::size_t i = 0; i < eqs.size(); ++i)
    for (const auto& t : cs.constraints[eqs[i]].terms) {
      const auto r = static_cast<Eigen::Index>(i);
      if (t.is_linear()) {
        J(r, t.a) += t.coef;
      } else if (t.is_square()) {
        J(r, t.a) += 2 * t.coef * x[t.a];
      } else if (!t.is_constant()) {
        J(r, t.a) += t.coef * x[t.b];
        J(r, t.b) += t.coef * x[t.a];
      }
    }
  return J;
}

inline Eigen::VectorXd point_residual(const ConstraintSystem& cs, const std::vector<int>& eqs,
                                      const std::vector<double>& x) {
  Eigen::VectorXd F(static_cast<Eigen::Index>(eqs.size()));
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    const auto& c = cs.constraints[eqs[i]];
    double s = -c.target.lo;
    for (const auto& t : c.terms) {
      if (t.is_constant()) s += t.coef;
      else if (t.is_linear()) s += t.coef * x[t.a];
      else s += t.coef * x[t.a] * x[t.b];
    }
    F(static_cast<Eigen::Index>(i)) = s;
  }
  return F;
}

// d(term)/d(var) over box b.
inline Interval term_derivative(const Term& t, int var, const IntervalBox& b) {
  if (t.is_constant()) return 0.0;
  if (t.is_linear()) return t.a == var ? Interval(t.coef) : Interval(0.0);
  if (t.is_square()) return t.a == var ? IA::scale(2 * t.coef, b[t.a]) : Interval(0.0);
  Interval d = 0.0;
  if (t.a == var) d = IA::add(d, IA::scale(t.coef, b[t.b]));
  if (t.b == var) d = IA::add(d, IA::scale(t.coef, b[t.a]));
  return d;
}

}  // namespace detail

/// Pivot choice of unknowns: column-pivoted QR of the equation Jacobian at x
/// picks a well-conditioned square block; the remaining variables are fixed.
inline std::optional<std::vector<int>> choose_fixed_vars(const ConstraintSystem& cs, const std::vector<int>& eqs,
                                                         const std::vector<double>& x) {
  const int m = static_cast<int>(eqs.size());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(detail::point_jacobian(cs, eqs, x));
  if (qr.rank() < m) return std::nullopt;
  const auto& perm = qr.colsPermutation().indices();
  std::vector<bool> is_unknown(cs.num_vars, false);
  for (int i = 0; i < m; ++i) is_unknown[perm(i)] = true;
  std::vector<int> fixed;
  for (int i = 0; i < cs.num_vars; ++i)
    if (!is_unknown[i]) fixed.push_back(i);
  return fixed;
}

/// Krawczyk image K(X) = c - Y F(c) + (I - Y J(X)) (X - c) over the unknowns,
/// with Y the inverse of the point Jacobian at the midpoint c. Fixed variables
/// must be points in X. Returns nullopt when that Jacobian is singular.
inline std::optional<IntervalBox> krawczyk(const IntervalBox& X, const ConstraintSystem& cs,
                                           const std::vector<int>& eqs, const std::vector<int>& unknowns) {
  const int m = static_cast<int>(eqs.size());
  const int v = cs.num_vars;
  std::vector<double> c(v);
  for (int i = 0; i < v; ++i) c[i] = X[i].mid();
  const Eigen::MatrixXd full = detail::point_jacobian(cs, eqs, c);
  Eigen::MatrixXd Jc(m, m);
  for (int j = 0; j < m; ++j) Jc.col(j) = full.col(unknowns[j]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Jc);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::MatrixXd Y = lu.inverse();

  IntervalBox C(v);
  for (int i = 0; i < v; ++i) C[i] = c[i];
  std::vector<Interval> Fc(m);
  for (int i = 0; i < m; ++i) {
    const auto& con = cs.constraints[eqs[i]];
    Fc[i] = IA::sub(eval_constraint(con, C), con.target);
  }
  std::vector<std::vector<Interval>> JX(m, std::vector<Interval>(m, 0.0));
  for (int i = 0; i < m; ++i)
    for (const auto& t : cs.constraints[eqs[i]].terms)
      for (int j = 0; j < m; ++j) JX[i][j] = IA::add(JX[i][j], detail::term_derivative(t, unknowns[j], X));

  IntervalBox K = X;
  for (int i = 0; i < m; ++i) {
    Interval k = c[unknowns[i]];
    for (int j = 0; j < m; ++j) k = IA::sub(k, IA::scale(Y(i, j), Fc[j]));
    for (int l = 0; l < m; ++l) {
      Interval a = (i == l) ? Interval(1.0) : Interval(0.0);
      for (int j = 0; j < m; ++j) a = IA::sub(a, IA::scale(Y(i, j), JX[j][l]));
      const int ul = unknowns[l];
      k = IA::add(k, IA::mul(a, IA::sub(X[ul], Interval(c[ul]))));
    }
    K[unknowns[i]] = k;
  }
  return K;
}

/// Interval Newton (Krawczyk form) existence test on the square subsystem
/// formed by the norm and edge equations and as many unknowns; the other
/// variables are held at the box midpoint. Success means K(X) lies strictly
/// inside X, which proves a unique real root there. Never a false certificate.
inline ExistenceResult prove_root_in_box(const IntervalBox& b, const ConstraintSystem& cs,
                                         const ExistenceOptions& opt = {}) {
  ExistenceResult out;
  out.equations = cs.equations();
  const int m = static_cast<int>(out.equations.size());
  const int v = cs.num_vars;
  if (static_cast<int>(b.size()) != v) throw std::invalid_argument("prove_root_in_box: box size mismatch");
  // Constraints without variables are constant checks.
  for (const auto& c : cs.constraints)
    if (c.kind != Constraint::Kind::kSeparation && !c.has_variables() &&
        !eval_constraint(c, b).subset_of(c.target)) {
      out.diagnostic = "constant constraint violated";
      return out;
    }
  if (m == 0) {
    out.certified = true;
    out.box = b;
    for (int i = 0; i < v; ++i) out.fixed_vars.push_back(i);
    out.diagnostic = v == 0 ? "no free variables" : "no equations";
    return out;
  }
  if (m > v) {
    out.diagnostic = "overdetermined: " + std::to_string(m) + " equations, " + std::to_string(v) + " unknowns";
    return out;
  }
  std::vector<double> x(v);
  for (int i = 0; i < v; ++i) x[i] = b[i].mid();

  if (opt.fixed_vars) {
    out.fixed_vars = *opt.fixed_vars;
  } else if (auto fixed = choose_fixed_vars(cs, out.equations, x)) {
    out.fixed_vars = std::move(*fixed);
  } else {
    out.diagnostic = "singular Jacobian at box midpoint";
    return out;
  }
  std::vector<int> unknowns;
  for (int i = 0; i < v; ++i)
    if (std::find(out.fixed_vars.begin(), out.fixed_vars.end(), i) == out.fixed_vars.end()) unknowns.push_back(i);
  if (static_cast<int>(unknowns.size()) != m) {
    out.diagnostic = "fixed variable count does not leave a square system";
    return out;
  }

  IntervalBox X = b;
  for (int f : out.fixed_vars) X[f] = x[f];
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    out.iterations = iter + 1;
    const auto K = krawczyk(X, cs, out.equations, unknowns);
    if (!K) {
      out.diagnostic = "singular Jacobian at box midpoint";
      return out;
    }
    bool inside = true;
    IntervalBox next = X;
    for (int u : unknowns) {
      inside = inside && (*K)[u].interior_of(X[u]);
      const auto cut = intersect((*K)[u], X[u]);
      if (!cut) {
        out.diagnostic = "no root in box";
        return out;
      }
      next[u] = *cut;
    }
    if (inside) {
      out.certified = true;
      out.box = *K;
      return out;
    }
    bool progress = false;
    for (int u : unknowns) progress = progress || next[u].width() < 0.9 * X[u].width();
    X = std::move(next);
    if (!progress) break;
  }
  out.diagnostic = "Krawczyk operator not contained in box";
  return out;
}

/// Gauss-Newton with minimum-norm steps on the norm and edge equations.
inline std::optional<std::vector<double>> newton_solve(const ConstraintSystem& cs, std::vector<double> x,
                                                       int max_iterations = 60) {
  const auto eqs = cs.equations();
  if (eqs.empty()) return x;
  for (int iter = 0; iter < max_iterations; ++iter) {
    const Eigen::VectorXd F = detail::point_residual(cs, eqs, x);
    if (F.lpNorm<Eigen::Infinity>() < 1e-14) return x;
    const Eigen::MatrixXd J = detail::point_jacobian(cs, eqs, x);
    const Eigen::VectorXd dx = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(J).solve(-F);
    if (!dx.allFinite()) return std::nullopt;
    for (int i = 0; i < cs.num_vars; ++i) x[i] += dx(i);
  }
  if (detail::point_residual(cs, eqs, x).lpNorm<Eigen::Infinity>() < 1e-12) return x;
  return std::nullopt;
}

/// All pairs of distinct vertices map to distinct directions over b:
/// |u.v| < 1 for every pair (adjacent pairs are orthogonal at any root).
inline bool distinct_directions(const ConstraintSystem& cs, const IntervalBox& b) {
  for (int u = 0; u < cs.n; ++u)
    for (int v = u + 1; v < cs.n; ++v) {
      const auto pu = cs.vertex(b, u), pv = cs.vertex(b, v);
      Interval d = 0.0;
      for (int k = 0; k < 3; ++k) d = IA::add(d, IA::mul(pu[k], pv[k]));
      if (!(d.mag() < 1.0)) {
        // Adjacent pairs are certified orthogonal by the equations themselves.
        bool adjacent = false;
        for (const auto& c : cs.constraints)
          if (c.kind == Constraint::Kind::kEdge && ((c.u == u && c.v == v) || (c.u == v && c.v == u)))
            adjacent = true;
        if (!adjacent) return false;
      }
    }
  return true;
}

// ---------------------------------------------------------------------------
// Branch and prune

enum class VerdictKind { kProvedUnembeddable, kProvedEmbeddable, kInconclusive };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::kProvedUnembeddable: return "proved-unembeddable";
    case VerdictKind::kProvedEmbeddable: return "proved-embeddable";
    case VerdictKind::kInconclusive: return "inconclusive";
  }
  return "?";
}

struct BranchStats {
  std::uint64_t contractions = 0;
  std::uint64_t refuted = 0;
  std::uint64_t bisections = 0;
  std::uint64_t existence_attempts = 0;
  std::uint64_t shadow_checks = 0;
  std::uint64_t shadow_disagreements = 0;
  std::uint64_t max_live = 0;
};

struct Verdict {
  VerdictKind kind = VerdictKind::kInconclusive;
  double delta = kDefaultDelta;
  std::uint64_t budget = 0;
  BranchStats stats;
  std::optional<ExistenceResult> certificate;
  std::vector<IntervalBox> residual;  // live boxes when inconclusive
  std::string note;
};

struct DecideOptions {
  std::uint64_t budget = kDefaultIntervalBudget;  // contraction steps
  double delta = kDefaultDelta;
  bool shadow_check = false;  // re-run every refutation with exact rational rounding
  int eager_existence = 32;   // existence attempts on the first boxes popped
  int existence_period = 64;  // then on every k-th box
  std::vector<IntervalBox> resume;
  // Observers, for tests and tracing. `after` is null when the box was refuted.
  std::function<void(const IntervalBox& before, const IntervalBox* after)> on_contract;
  std::function<void(const IntervalBox& parent, const IntervalBox& left, const IntervalBox& right)> on_bisect;
};

namespace detail {

inline std::optional<ExistenceResult> try_existence(const ConstraintSystem& cs, const IntervalBox& b,
                                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::vector<double> start(cs.num_vars);
    for (int i = 0; i < cs.num_vars; ++i) {
      const double t = attempt == 0 ? 0.5 : std::uniform_real_distribution<double>(0.05, 0.95)(rng);
      start[i] = b[i].lo + t * b[i].width();
    }
    const auto root = newton_solve(cs, start);
    if (!root) continue;
    IntervalBox tight(cs.num_vars);
    for (int i = 0; i < cs.num_vars; ++i) {
      const double r = 1e-9 * std::max(1.0, std::abs((*root)[i]));
      tight[i] = {(*root)[i] - r, (*root)[i] + r};
    }
    auto cert = prove_root_in_box(tight, cs);
    if (cert.certified && distinct_directions(cs, cert.box)) return cert;
  }
  return std::nullopt;
}

}  // namespace detail

/// Branch-and-prune over the hemisphere box: contract, test existence, bisect.
/// Boxes are processed largest volume first. The budget counts contractions.
inline Verdict decide_embeddability(const Graph& g, const DecideOptions& opt = {}) {
  Verdict verdict;
  verdict.delta = opt.delta;
  verdict.budget = opt.budget;
  if (g.n() == 0) throw std::invalid_argument("decide_embeddability: empty graph");
  if (g.edges().empty()) {
    // Nothing to constrain: pairwise distinct directions always exist.
    verdict.kind = VerdictKind::kProvedEmbeddable;
    verdict.note = "no edges; trivially embeddable";
    return verdict;
  }
  const ConstraintSystem cs = build_constraint_system(g, opt.delta);
  if (cs.num_vars == 0) {
    auto cert = prove_root_in_box({}, cs);
    if (cert.certified && distinct_directions(cs, cert.box)) {
      verdict.kind = VerdictKind::kProvedEmbeddable;
      verdict.certificate = std::move(cert);
    }
    return verdict;
  }

  struct Entry {
    double volume;
    std::uint64_t seq;
    bool operator<(const Entry& o) const { return volume != o.volume ? volume < o.volume : seq > o.seq; }
  };
  std::vector<IntervalBox> boxes;
  std::priority_queue<Entry> queue;
  std::vector<IntervalBox> stuck;
  auto push = [&](IntervalBox b) {
    queue.push({log_volume(b), boxes.size()});
    boxes.push_back(std::move(b));
  };
  if (opt.resume.empty()) push(cs.initial_box());
  for (const auto& b : opt.resume) {
    if (static_cast<int>(b.size()) != cs.num_vars) throw std::invalid_argument("decide_embeddability: resume box size mismatch");
    push(b);
  }

  std::uint64_t popped = 0;
  while (!queue.empty()) {
    verdict.stats.max_live = std::max<std::uint64_t>(verdict.stats.max_live, queue.size());
    if (verdict.stats.contractions >= opt.budget) break;
    const Entry top = queue.top();
    queue.pop();
    IntervalBox box = std::move(boxes[top.seq]);
    ++popped;
    ++verdict.stats.contractions;
    auto narrowed = contract(box, cs);
    if (narrowed && opt.on_contract) opt.on_contract(box, &*narrowed);
    if (!narrowed) {
      bool refuted = true;
      if (opt.shadow_check) {
        ++verdict.stats.shadow_checks;
        if (contract<rounding::Exact>(box, cs)) {
          ++verdict.stats.shadow_disagreements;
          refuted = false;
          narrowed = box;
        }
      }
      if (refuted) {
        if (opt.on_contract) opt.on_contract(box, nullptr);
        ++verdict.stats.refuted;
        continue;
      }
    }
    if (popped <= static_cast<std::uint64_t>(opt.eager_existence) ||
        popped % static_cast<std::uint64_t>(std::max(1, opt.existence_period)) == 0) {
      ++verdict.stats.existence_attempts;
      if (auto cert = detail::try_existence(cs, *narrowed, top.seq)) {
        verdict.kind = VerdictKind::kProvedEmbeddable;
        verdict.certificate = std::move(cert);
        return verdict;
      }
    }
    try {
      auto [left, right] = bisect(*narrowed);
      ++verdict.stats.bisections;
      if (opt.on_bisect) opt.on_bisect(*narrowed, left, right);
      push(std::move(left));
      push(std::move(right));
    } catch (const WidthUnderflow&) {
      stuck.push_back(std::move(*narrowed));
    }
  }
  if (queue.empty() && stuck.empty()) {
    verdict.kind = VerdictKind::kProvedUnembeddable;
    std::ostringstream note;
    note << "no embedding with all pairwise direction separations >= " << opt.delta;
    verdict.note = note.str();
    return verdict;
  }
  while (!queue.empty()) {
    verdict.residual.push_back(std::move(boxes[queue.top().seq]));
    queue.pop();
  }
  for (auto& b : stuck) verdict.residual.push_back(std::move(b));
  verdict.note = stuck.empty() ? "budget exhausted" : "boxes at floating-point resolution";
  return verdict;
}

// ---------------------------------------------------------------------------
// Serialization

constexpr int kCheckpointVersion = 1;

inline nlohmann::json box_json(const IntervalBox& b) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& x : b) j.push_back({x.lo, x.hi});
  return j;
}

inline IntervalBox box_from_json(const nlohmann::json& j) {
  IntervalBox b;
  for (const auto& x : j) {
    const double lo = x.at(0).get<double>(), hi = x.at(1).get<double>();
    if (!(lo <= hi)) throw std::invalid_argument("box_from_json: lo > hi");
    b.push_back({lo, hi});
  }
  return b;
}

inline nlohmann::json checkpoint_json(const Graph& g, const Verdict& v) {
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& b : v.residual) boxes.push_back(box_json(b));
  return {{"format", "kss-interval-checkpoint"},
          {"version", kCheckpointVersion},
          {"graph6", graph6_encode(g)},
          {"delta", v.delta},
          {"boxes", boxes}};
}

/// Residual boxes from a checkpoint; validates format, version, graph and delta.
inline std::vector<IntervalBox> load_checkpoint(const nlohmann::json& j, const Graph& g, double delta) {
  if (j.value("format", "") != "kss-interval-checkpoint") throw std::invalid_argument("checkpoint: wrong format");
  if (j.value("version", 0) != kCheckpointVersion) throw std::invalid_argument("checkpoint: unsupported version");
  if (j.at("graph6").get<std::string>() != graph6_encode(g)) throw std::invalid_argument("checkpoint: graph mismatch");
  if (j.at("delta").get<double>() != delta) throw std::invalid_argument("checkpoint: delta mismatch");
  std::vector<IntervalBox> boxes;
  for (const auto& b : j.at("boxes")) boxes.push_back(box_from_json(b));
  return boxes;
}

inline nlohmann::json verdict_json(const Verdict& v) {
  nlohmann::json j{{"verdict", to_string(v.kind)},
                   {"delta", v.delta},
                   {"budget", v.budget},
                   {"note", v.note},
                   {"stats",
                    {{"contractions", v.stats.contractions},
                     {"refuted", v.stats.refuted},
                     {"bisections", v.stats.bisections},
                     {"existence_attempts", v.stats.existence_attempts},
                     {"shadow_checks", v.stats.shadow_checks},
                     {"max_live", v.stats.max_live},
                     {"residual_boxes", v.residual.size()}}}};
  if (v.certificate) {
    j["certificate"] = {{"box", box_json(v.certificate->box)},
                        {"fixed_vars", v.certificate->fixed_vars},
                        {"iterations", v.certificate->iterations},
                        {"diagnostic", v.certificate->diagnostic}};
  }
  return j;
}

}  // namespace kss
