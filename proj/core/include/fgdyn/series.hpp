#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fgdyn/padic.hpp"

namespace fgdyn {

__extension__ using ExponentKey = unsigned __int128;

/// Multi-index packed one byte per variable, variable 0 in the most
/// significant byte, so that key order is lexicographic order.
class Exponent {
 public:
  static constexpr int kMaxVars = 16;

  Exponent() = default;
  explicit Exponent(ExponentKey key) : key_(key) {}

  static Exponent from_vector(const std::vector<int>& exps);
  static Exponent variable(int var, int power = 1);

  ExponentKey key() const noexcept { return key_; }
  int operator[](int var) const noexcept {
    return static_cast<int>((key_ >> (8 * (kMaxVars - 1 - var))) & 0xffU);
  }
  int degree() const noexcept;
  Exponent with(int var, int value) const;
  std::vector<int> to_vector(int nvars) const;
  /// Renders as x1^2*x3 (1-based names); "1" for the zero exponent.
  std::string to_string(int nvars) const;

  /// Caller guarantees the summed degree stays within 255.
  friend Exponent operator+(Exponent a, Exponent b) noexcept { return Exponent(a.key_ + b.key_); }
  friend bool operator==(Exponent a, Exponent b) noexcept { return a.key_ == b.key_; }
  friend bool operator<(Exponent a, Exponent b) noexcept { return a.key_ < b.key_; }

 private:
  ExponentKey key_ = 0;
};

struct Term {
  Exponent exp;
  PadicScalar coeff;
};

/// Truncated power series in m variables: terms of total degree <= D, sorted
/// by exponent, with no stored zero coefficients. A coefficient that cancels
/// at finite precision leaves a per-degree floor: every absent coefficient of
/// that degree is then only known to be zero modulo p^floor.
class MultiSeries {
 public:
  MultiSeries(const PrecisionContext& ctx, int nvars);

  static MultiSeries constant(const PrecisionContext& ctx, int nvars, const PadicScalar& c);
  static MultiSeries variable(const PrecisionContext& ctx, int nvars, int var);
  static MultiSeries monomial(const PrecisionContext& ctx, int nvars, Exponent e, const PadicScalar& c);
  /// Combines duplicate exponents, drops zeros and terms beyond degree D.
  static MultiSeries from_terms(const PrecisionContext& ctx, int nvars, std::vector<Term> terms);

  const PrecisionContext& context() const noexcept { return ctx_; }
  int nvars() const noexcept { return nvars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Stored coefficient; absent ones are zero at the floor of their degree.
  PadicScalar coeff(Exponent e) const;
  /// Known precision of absent coefficients of this degree; INT32_MAX when
  /// they are exactly zero.
  int absent_precision(int degree) const noexcept;
  bool has_absent_floor() const noexcept { return !floor_.empty(); }
  /// Lower bound on the valuation of every coefficient of this degree,
  /// present or absent (INT32_MAX when all are exactly zero).
  int degree_valuation_bound(int degree) const noexcept;
  PadicScalar constant_term() const { return coeff(Exponent()); }
  /// Lowest total degree present; INT32_MAX for the zero series.
  int min_degree() const noexcept;
  int max_degree() const noexcept;
  /// Smallest known precision among coefficients and floors (N for an exact zero series).
  int min_precision() const noexcept;
  /// Smallest coefficient valuation (INT32_MAX for the zero series).
  int min_valuation() const noexcept;
  bool is_integral() const noexcept { return min_valuation() >= 0; }

  MultiSeries operator-() const;
  friend MultiSeries operator+(const MultiSeries& a, const MultiSeries& b);
  friend MultiSeries operator-(const MultiSeries& a, const MultiSeries& b);
  friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b);
  friend MultiSeries operator*(const PadicScalar& c, const MultiSeries& f);

  /// Coefficientwise equality at working precision.
  friend bool operator==(const MultiSeries& a, const MultiSeries& b);
  /// Same exponents and canonically identical coefficients.
  bool identical(const MultiSeries& other) const;

  MultiSeries truncated(int degree) const;
  MultiSeries homogeneous_part(int degree) const;
  MultiSeries derivative(int var) const;
  MultiSeries pow(unsigned e) const;
  /// Lowers stored coefficients and existing floors to precision k; exactly
  /// zero absent coefficients stay exact.
  MultiSeries with_precision(int k) const;
  /// Coefficients of the given degree, present and absent, known at most modulo p^k.
  MultiSeries lowered(int degree, int k) const;
  /// Reduction modulo p: integral coefficients whose residue is nonzero, as exact residues.
  MultiSeries mod_p() const;
  /// Substitutes x_i -> x_i^q for every variable; terms beyond D are dropped.
  MultiSeries frobenius(int q) const;
  /// Moves variable i to position offset + i inside a series of total_vars variables.
  MultiSeries embed(int total_vars, int offset) const;
  /// Variable i of this series becomes variable target_of_var[i] of a series
  /// in total_vars variables.
  MultiSeries remap(int total_vars, const std::vector<int>& target_of_var) const;
  /// Drops every term containing one of the listed variables.
  MultiSeries without_variables(const std::vector<int>& vars) const;

  std::string to_string() const;

 private:
  friend class MultiSeriesBuilder;
  // Records a coefficient of the given degree that vanished at precision k.
  void lower_floor(int degree, long k);
  // Clamps stored coefficients of each degree to floor[degree] and merges
  // it into the absent floor.
  void impose_floor(const std::vector<long>& floor);

  PrecisionContext ctx_;
  int nvars_;
  std::vector<Term> terms_;
  std::vector<int> floor_;  // empty, or D+1 entries with INT32_MAX for exact
};

/// Product truncated at total degree cap (<= D).
MultiSeries multiply(const MultiSeries& a, const MultiSeries& b, int cap);

}  // namespace fgdyn
