#pragma once

#include <string>
#include <vector>

#include "fgdyn/formal_group.hpp"

namespace fgdyn {

struct LubinTate2Params {
  std::uint32_t p = 2;
  int h1 = 1;
  int h2 = 1;
  int degree = 8;
  int precision = 0;  // 0 starts at default_precision() and doubles on exhaustion

  /// Validates p prime, h1, h2 >= 1 with gcd 1, and p^{min(h1,h2)} <= D <= 255.
  void validate() const;
  /// Exponent of the deepest 1/p^k coefficient of L below degree D plus a
  /// safety margin for the inversion and composition steps.
  int default_precision() const;
};

struct CongruenceReport {
  bool linear_ok = false;     // [p]_F = (p x1, p x2) mod degree 2
  bool frobenius_ok = false;  // [p]_F = (x2^{p^h1}, x1^{p^h2}) mod p
  /// Expected residue monomials; absent when beyond the degree cap.
  std::optional<Exponent> expected[2];
  std::string detail;
};

struct LubinTate2 {
  /// Exact logarithm L = (L1, L2).
  TupleSeries logarithm;
  FormalGroupLaw group;
  EndoSeries p_series;
  CongruenceReport congruences;
  /// Largest k with a 1/p^k coefficient in L up to degree D.
  int denominator_depth = 0;
  int precision = 0;
};

/// Unrolls L1 = x1 + L2(x^{p^h1}) / p, L2 = x2 + L1(x^{p^h2}) / p to degree D,
/// forms F = L^{-1}(L(X) + L(Y)) and [p]_F = L^{-1}(p L), validates F, checks
/// [p]_F as an endomorphism and tests both congruences. Throws
/// PrecisionExhausted when N cannot absorb the 1/p^k denominators; with the
/// default precision N is doubled up to three times first.
LubinTate2 lt2_build(const LubinTate2Params& params);

/// The logarithm alone (exact coefficients).
TupleSeries lt2_logarithm(const PrecisionContext& ctx, int h1, int h2, int* depth = nullptr);

}  // namespace fgdyn
