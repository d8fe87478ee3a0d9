#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kss/graph.hpp"

namespace kss {

/// Sparse multivariate polynomial with integer coefficients. A monomial is
/// the sorted list of its variable indices, with repetition.
class Polynomial {
 public:
  using Monomial = std::vector<int>;

  static Polynomial constant(std::int64_t c) {
    Polynomial p;
    p.add_term({}, c);
    return p;
  }
  static Polynomial var(int v) {
    Polynomial p;
    p.add_term({v}, 1);
    return p;
  }

  void add_term(Monomial m, std::int64_t c) {
    std::sort(m.begin(), m.end());
    auto& slot = terms_[m];
    slot += c;
    if (slot == 0) terms_.erase(m);
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial p;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m = ma;
        m.insert(m.end(), mb.begin(), mb.end());
        p.add_term(std::move(m), ca * cb);
      }
    return p;
  }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.size()));
    return d;
  }

  const std::map<Monomial, std::int64_t>& terms() const { return terms_; }

  template <class T>
  T evaluate(const std::vector<T>& x) const {
    T sum = T(0);
    for (const auto& [m, c] : terms_) {
      T term = T(c);
      for (int v : m) term = term * x[v];
      sum = sum + term;
    }
    return sum;
  }

 private:
  std::map<Monomial, std::int64_t> terms_;
};

struct EmbeddingPolynomial {
  std::vector<std::string> names;
  std::vector<std::string> legend;
  Polynomial poly;

  int num_vars() const { return static_cast<int>(names.size()); }
  std::string to_text() const;
};

/// Sum of squared residuals, zero exactly at embeddings of g:
///   (x_v^2 + y_v^2 + z_v^2 - 1)^2                         unit length
///   (p_v q_v - 1)^2 + (p_v^2 - z_v)^2                      z_v > 0
///   (u . v)^2                                              per edge
///   (s_uv - |u - v|^2)^2 + (s_uv w_uv - 1)^2              u != v, per non-edge
/// With every z positive, distinct vectors are distinct directions.
inline EmbeddingPolynomial export_polynomial(const Graph& g) {
  EmbeddingPolynomial out;
  auto add_var = [&](std::string name, std::string what) {
    out.names.push_back(std::move(name));
    out.legend.push_back(std::move(what));
    return static_cast<int>(out.names.size()) - 1;
  };
  std::vector<std::array<int, 3>> coord(g.n());
  for (int v = 0; v < g.n(); ++v) {
    const std::string s = std::to_string(v);
    coord[v] = {add_var("x" + s, "x-coordinate of vertex " + s),
                add_var("y" + s, "y-coordinate of vertex " + s),
                add_var("z" + s, "z-coordinate of vertex " + s)};
    const int p = add_var("p" + s, "auxiliary: p" + s + "^2 = z" + s);
    const int q = add_var("q" + s, "auxiliary: p" + s + "*q" + s + " = 1");
    const auto one = Polynomial::constant(1);
    Polynomial norm = Polynomial::constant(-1);
    for (int k : coord[v]) norm += Polynomial::var(k) * Polynomial::var(k);
    out.poly += norm * norm;
    const auto pq = Polynomial::var(p) * Polynomial::var(q) - one;
    const auto pz = Polynomial::var(p) * Polynomial::var(p) - Polynomial::var(coord[v][2]);
    out.poly += pq * pq + pz * pz;
  }
  for (int u = 0; u < g.n(); ++u)
    for (int v = u + 1; v < g.n(); ++v) {
      if (g.has_edge(u, v)) {
        Polynomial d;
        for (int k = 0; k < 3; ++k) d += Polynomial::var(coord[u][k]) * Polynomial::var(coord[v][k]);
        out.poly += d * d;
      } else {
        const std::string tag = std::to_string(u) + "_" + std::to_string(v);
        const int s = add_var("s" + tag, "auxiliary: s" + tag + " = |v" + std::to_string(u) + " - v" +
                                             std::to_string(v) + "|^2");
        const int w = add_var("w" + tag, "auxiliary: s" + tag + "*w" + tag + " = 1");
        Polynomial r = Polynomial::var(s);
        for (int k = 0; k < 3; ++k) {
          const auto diff = Polynomial::var(coord[u][k]) - Polynomial::var(coord[v][k]);
          r -= diff * diff;
        }
        const auto sw = Polynomial::var(s) * Polynomial::var(w) - Polynomial::constant(1);
        out.poly += r * r + sw * sw;
      }
    }
  return out;
}

/// Text form:
///   # <name>: <meaning>            one legend line per variable
///   P = <term> <sign> <term> ...   one term per line after the first
/// where a term is  <coef> | [<coef>*]<name>[^<k>]{*<name>[^<k>]}.
inline std::string EmbeddingPolynomial::to_text() const {
  std::ostringstream os;
  os << "# embedding polynomial, " << num_vars() << " variables, degree " << poly.degree() << '\n';
  for (int i = 0; i < num_vars(); ++i) os << "# " << names[i] << ": " << legend[i] << '\n';
  os << "P =";
  bool first = true;
  // Highest degree first, then lexicographic.
  std::vector<std::pair<Polynomial::Monomial, std::int64_t>> order(poly.terms().begin(), poly.terms().end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  for (const auto& [m, c] : order) {
    if (first) os << ' ' << (c < 0 ? "-" : "");
    else os << "\n    " << (c < 0 ? '-' : '+') << ' ';
    first = false;
    const std::int64_t a = c < 0 ? -c : c;
    bool need_star = false;
    if (a != 1 || m.empty()) {
      os << a;
      need_star = true;
    }
    for (std::size_t i = 0; i < m.size();) {
      std::size_t j = i;
      while (j < m.size() && m[j] == m[i]) ++j;
      if (need_star) os << '*';
      os << names[m[i]];
      if (j - i > 1) os << '^' << j - i;
      need_star = true;
      i = j;
    }
  }
  if (first) os << " 0";
  os << '\n';
  return os.str();
}

}  // namespace kss
