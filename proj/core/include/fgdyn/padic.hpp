#pragma once

#include <gmpxx.h>

#include <climits>
#include <string>

#include "fgdyn/errors.hpp"
#include "fgdyn/precision.hpp"

namespace fgdyn {

/// p^k as a GMP integer, from a per-thread cache.
const mpz_class& power_of(std::uint32_t p, int k);

/// An element p^v * u of Q_p known modulo p^precision.
///
/// Computed values store the unit as a residue in [0, p^(precision - v)).
/// Constants built from integers, or from rationals whose denominator is a
/// power of p, are flagged exact: they keep their integer unit unreduced and
/// count as infinitely precise inside arithmetic, and they report the working
/// precision N as their known precision.
class PadicScalar {
 public:
  static constexpr int kInfiniteValuation = INT_MAX;

  /// Exact zero.
  explicit PadicScalar(const PrecisionContext& ctx);

  static PadicScalar zero(const PrecisionContext& ctx) { return PadicScalar(ctx); }
  /// Zero known only modulo p^precision.
  static PadicScalar zero(const PrecisionContext& ctx, int precision);
  static PadicScalar from_integer(const PrecisionContext& ctx, const mpz_class& n);
  static PadicScalar from_integer(const PrecisionContext& ctx, long n) { return from_integer(ctx, mpz_class(n)); }
  /// num/den. Exact when the p-free part of den is 1; otherwise reduced at precision N.
  static PadicScalar from_rational(const PrecisionContext& ctx, const mpz_class& num, const mpz_class& den);
  /// p^valuation * unit known modulo p^precision; unit need not be reduced or coprime to p.
  static PadicScalar from_parts(const PrecisionContext& ctx, int valuation, const mpz_class& unit, int precision);

  const PrecisionContext& context() const noexcept { return ctx_; }

  /// True when the value is zero modulo its known precision.
  bool is_zero() const noexcept { return valuation_ == kInfiniteValuation; }
  bool is_exact() const noexcept { return exact_; }
  /// Absolute precision; N for exact values.
  int precision() const noexcept { return exact_ ? ctx_.precision : precision_; }
  int relative_precision() const noexcept { return precision() - valuation_; }
  /// Valuation as stored: kInfiniteValuation for zero.
  int raw_valuation() const noexcept { return valuation_; }
  const mpz_class& unit() const noexcept { return unit_; }

  /// Exact valuation; +inf for zero at working precision N. Throws
  /// ImpreciseValuation for a zero known only below N.
  Valuation valuation() const;

  bool is_integral() const noexcept { return valuation_ >= 0; }
  bool is_unit() const noexcept { return valuation_ == 0; }
  /// Residue modulo p of an integral element.
  std::uint32_t residue() const;
  /// Representative in [0, p^k) of an integral element, k <= precision.
  mpz_class to_integer(int k) const;

  PadicScalar operator-() const;
  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b);
  PadicScalar& operator+=(const PadicScalar& b) { return *this = *this + b; }
  PadicScalar& operator-=(const PadicScalar& b) { return *this = *this - b; }
  PadicScalar& operator*=(const PadicScalar& b) { return *this = *this * b; }

  /// Multiplication by p^k (k may be negative). Exact shift: division by p^k
  /// lowers the known precision by exactly k.
  PadicScalar shifted(int k) const;
  PadicScalar pow(unsigned long e) const;
  PadicScalar inverse() const;
  /// The same value with precision lowered to min(precision, k).
  PadicScalar with_precision(int k) const;

  /// Equality at working precision: the difference is zero at its known precision.
  friend bool operator==(const PadicScalar& a, const PadicScalar& b);
  friend bool operator!=(const PadicScalar& a, const PadicScalar& b) { return !(a == b); }

  /// Same valuation, unit and precision (the canonical stored form).
  bool identical(const PadicScalar& other) const;

  /// Human-readable form p^v*u + O(p^k).
  std::string to_string() const;

  // Raw constructor used by arithmetic kernels in the series code.
  static PadicScalar normalize(const PrecisionContext& ctx, mpz_class num, long valuation, long precision);
  // num * p^valuation at the given precision, or exact when the flag is set.
  static PadicScalar assemble(const PrecisionContext& ctx, mpz_class num, long valuation, long precision, bool exact) {
    return make(ctx, std::move(num), valuation, precision, exact);
  }

  static constexpr long kExactPrecision = LONG_MAX / 4;
  /// Precision used inside arithmetic: kExactPrecision for exact values.
  long tracking_precision() const noexcept { return exact_ ? kExactPrecision : precision_; }

 private:

  PadicScalar(const PrecisionContext& ctx, int valuation, mpz_class unit, int precision, bool exact)
      : ctx_(ctx), valuation_(valuation), precision_(precision), exact_(exact), unit_(std::move(unit)) {}

  static PadicScalar make(const PrecisionContext& ctx, mpz_class num, long valuation, long precision, bool exact);
  long valuation_bound() const noexcept { return is_zero() ? tracking_precision() : valuation_; }

  PrecisionContext ctx_;
  int valuation_ = kInfiniteValuation;
  int precision_ = 0;
  bool exact_ = true;
  mpz_class unit_;
};

/// The (p-1)-th root of unity congruent to r modulo p (0 for r = 0), to precision N.
PadicScalar teichmuller(std::uint32_t r, const PrecisionContext& ctx);

}  // namespace fgdyn
