#pragma once

// Exact truncated power series over Q, independent of the p-adic engine.

#include <gmpxx.h>

#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "fgdyn/tuple_series.hpp"

namespace oracle {

using Exps = std::vector<int>;

struct QSeries {
  int nvars = 1;
  int cap = 2;
  std::map<Exps, mpq_class> c;

  QSeries(int n, int d) : nvars(n), cap(d) {}

  static QSeries var(int n, int d, int i) {
    QSeries out(n, d);
    Exps e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    out.c[e] = 1;
    return out;
  }

  static QSeries constant(int n, int d, const mpq_class& a) {
    QSeries out(n, d);
    if (a != 0) out.c[Exps(static_cast<std::size_t>(n), 0)] = a;
    return out;
  }

  mpq_class at(const Exps& e) const {
    auto it = c.find(e);
    return it == c.end() ? mpq_class(0) : it->second;
  }

  void add(const Exps& e, const mpq_class& a) {
    mpq_class& slot = c[e];
    slot += a;
    if (slot == 0) c.erase(e);
  }
};

inline int degree(const Exps& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

inline QSeries operator+(QSeries a, const QSeries& b) {
  for (const auto& [e, v] : b.c) a.add(e, v);
  return a;
}

inline QSeries operator*(const mpq_class& k, QSeries a) {
  if (k == 0) return QSeries(a.nvars, a.cap);
  for (auto& [e, v] : a.c) v *= k;
  return a;
}

inline QSeries operator-(const QSeries& a, const QSeries& b) { return a + mpq_class(-1) * b; }

inline QSeries operator*(const QSeries& a, const QSeries& b) {
  QSeries out(a.nvars, a.cap);
  for (const auto& [ea, va] : a.c) {
    for (const auto& [eb, vb] : b.c) {
      Exps e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      if (degree(e) <= a.cap) out.add(e, va * vb);
    }
  }
  return out;
}

inline QSeries power(const QSeries& a, int k) {
  QSeries out = QSeries::constant(a.nvars, a.cap, 1);
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

// f(g_0, ..., g_{k-1}); the g_i share nvars and cap.
inline QSeries compose(const QSeries& f, const std::vector<QSeries>& g) {
  QSeries out(g.front().nvars, g.front().cap);
  std::vector<std::vector<QSeries>> powers(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) powers[i].push_back(QSeries::constant(out.nvars, out.cap, 1));
  for (const auto& [e, v] : f.c) {
    QSeries term = QSeries::constant(out.nvars, out.cap, v);
    for (std::size_t i = 0; i < g.size(); ++i) {
      while (static_cast<int>(powers[i].size()) <= e[i]) powers[i].push_back(powers[i].back() * g[i]);
      term = term * powers[i][static_cast<std::size_t>(e[i])];
    }
    out = out + term;
  }
  return out;
}

inline std::vector<QSeries> compose(const std::vector<QSeries>& f, const std::vector<QSeries>& g) {
  std::vector<QSeries> out;
  for (const auto& fi : f) out.push_back(compose(fi, g));
  return out;
}

// Linear coefficient matrix J[i][j] = d f_i / d x_j (0).
inline std::vector<std::vector<mpq_class>> jacobian(const std::vector<QSeries>& f) {
  const int n = f.front().nvars;
  std::vector<std::vector<mpq_class>> j(f.size(), std::vector<mpq_class>(static_cast<std::size_t>(n)));
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (int v = 0; v < n; ++v) {
      Exps e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(v)] = 1;
      j[i][static_cast<std::size_t>(v)] = f[i].at(e);
    }
  }
  return j;
}

inline std::vector<std::vector<mpq_class>> invert(std::vector<std::vector<mpq_class>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<mpq_class>> inv(n, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw std::domain_error("singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const mpq_class d = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const mpq_class f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

inline mpq_class determinant(std::vector<std::vector<mpq_class>> a) {
  const std::size_t n = a.size();
  mpq_class det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const mpq_class f = a[r][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return det;
}

// Compositional inverse by the fixed point g = J^-1 (X - N(g)), h = J X + N.
inline std::vector<QSeries> inverse(const std::vector<QSeries>& h) {
  const int n = h.front().nvars;
  const int cap = h.front().cap;
  const auto jinv = invert(jacobian(h));
  std::vector<QSeries> nonlinear;
  for (const auto& hi : h) {
    QSeries r(n, cap);
    for (const auto& [e, v] : hi.c) {
      if (degree(e) >= 2) r.c[e] = v;
    }
    nonlinear.push_back(r);
  }
  std::vector<QSeries> g;
  for (int i = 0; i < n; ++i) g.push_back(QSeries::var(n, cap, i));
  std::vector<QSeries> x = g;
  for (int round = 0; round < cap; ++round) {
    const auto nl = compose(nonlinear, g);
    std::vector<QSeries> next;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      QSeries s(n, cap);
      for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) s = s + jinv[i][j] * (x[j] - nl[j]);
      next.push_back(s);
    }
    g = next;
  }
  return g;
}

inline int valuation(const mpz_class& z, unsigned p) {
  if (z == 0) return INT32_MAX;
  mpz_class a = z;
  int v = 0;
  while (mpz_divisible_ui_p(a.get_mpz_t(), p)) {
    a /= p;
    ++v;
  }
  return v;
}

inline int valuation(const mpq_class& q, unsigned p) {
  if (q == 0) return INT32_MAX;
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

inline fgdyn::PadicScalar to_padic(const fgdyn::PrecisionContext& ctx, const mpq_class& q) {
  return fgdyn::PadicScalar::from_rational(ctx, q.get_num(), q.get_den());
}

inline fgdyn::MultiSeries to_library(const fgdyn::PrecisionContext& ctx, const QSeries& q) {
  std::vector<fgdyn::Term> terms;
  for (const auto& [e, v] : q.c) terms.push_back(fgdyn::Term{fgdyn::Exponent::from_vector(e), to_padic(ctx, v)});
  return fgdyn::MultiSeries::from_terms(ctx, q.nvars, std::move(terms));
}

inline fgdyn::TupleSeries to_library(const fgdyn::PrecisionContext& ctx, const std::vector<QSeries>& q) {
  std::vector<fgdyn::MultiSeries> comps;
  for (const auto& qi : q) comps.push_back(to_library(ctx, qi));
  return fgdyn::TupleSeries(std::move(comps));
}

// Every coefficient up to the cap agrees at working precision.
inline bool agrees(const fgdyn::MultiSeries& lib, const QSeries& q) {
  for (const auto& t : lib.terms()) {
    if (!(t.coeff == to_padic(lib.context(), q.at(t.exp.to_vector(q.nvars))))) return false;
  }
  for (const auto& [e, v] : q.c) {
    if (!(lib.coeff(fgdyn::Exponent::from_vector(e)) == to_padic(lib.context(), v))) return false;
  }
  return true;
}

inline bool agrees(const fgdyn::TupleSeries& lib, const std::vector<QSeries>& q) {
  if (lib.size() != static_cast<int>(q.size())) return false;
  for (int i = 0; i < lib.size(); ++i) {
    if (!agrees(lib[i], q[static_cast<std::size_t>(i)])) return false;
  }
  return true;
}

inline mpz_class binomial(long n, unsigned long k) {
  mpz_class out;
  if (n >= 0) {
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), k);
  } else {
    mpz_bin_ui(out.get_mpz_t(), mpz_class(n).get_mpz_t(), k);
  }
  return out;
}

// (1 + x)^a - 1 truncated at cap, from the binomial theorem.
inline QSeries multiplicative_power(long a, int cap) {
  QSeries out(1, cap);
  for (int k = 1; k <= cap; ++k) out.add({k}, mpq_class(binomial(a, static_cast<unsigned long>(k))));
  return out;
}

// A random series in n variables with integer coefficients in [-bound, bound].
inline QSeries random_series(std::mt19937_64& rng, int n, int cap, int min_degree, int max_terms, long bound) {
  QSeries out(n, cap);
  std::uniform_int_distribution<int> exp(0, cap);
  std::uniform_int_distribution<long> coeff(-bound, bound);
  for (int t = 0; t < max_terms; ++t) {
    Exps e(static_cast<std::size_t>(n));
    for (auto& x : e) x = exp(rng);
    const int d = degree(e);
    if (d < min_degree || d > cap) continue;
    out.add(e, mpq_class(coeff(rng)));
  }
  return out;
}

// L over Q by unrolling L1 = x1 + L2(x^{p^h1})/p, L2 = x2 + L1(x^{p^h2})/p.
inline std::vector<QSeries> lt2_logarithm(unsigned p, int h1, int h2, int cap) {
  const QSeries x1 = QSeries::var(2, cap, 0);
  const QSeries x2 = QSeries::var(2, cap, 1);
  const auto frob = [&](int h) {
    int q = 1;
    for (int i = 0; i < h; ++i) q *= static_cast<int>(p);
    return std::vector<QSeries>{power(x1, q), power(x2, q)};
  };
  std::vector<QSeries> l{x1, x2};
  const mpq_class inv(1, p);
  for (int round = 0; round <= cap; ++round) {
    l = {x1 + inv * compose(l[1], frob(h1)), x2 + inv * compose(l[0], frob(h2))};
  }
  return l;
}

// F = L^-1(L(X) + L(Y)) in four variables.
inline std::vector<QSeries> lt2_law(unsigned p, int h1, int h2, int cap) {
  const auto l = lt2_logarithm(p, h1, h2, cap);
  const auto linv = inverse(l);
  const std::vector<QSeries> x{QSeries::var(4, cap, 0), QSeries::var(4, cap, 1)};
  const std::vector<QSeries> y{QSeries::var(4, cap, 2), QSeries::var(4, cap, 3)};
  const auto lx = compose(l, x);
  const auto ly = compose(l, y);
  return compose(linv, std::vector<QSeries>{lx[0] + ly[0], lx[1] + ly[1]});
}

// [p]_F = L^-1(p L(X)).
inline std::vector<QSeries> lt2_p_series(unsigned p, int h1, int h2, int cap) {
  const auto l = lt2_logarithm(p, h1, h2, cap);
  return compose(inverse(l), std::vector<QSeries>{mpq_class(p) * l[0], mpq_class(p) * l[1]});
}

}  // namespace oracle
