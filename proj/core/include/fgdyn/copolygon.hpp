#pragma once

#include <vector>

#include "fgdyn/evaluate.hpp"

namespace fgdyn {

/// i xi1 + j xi2 + c for the support monomial x1^i x2^j with c = v(a_ij).
struct Plane {
  int i = 0;
  int j = 0;
  int c = 0;
};

/// Pointwise minimum of the planes of a two-variable series.
class Copolygon {
 public:
  /// Throws InvalidArgument unless f is a nonzero series in two variables.
  static Copolygon build(const MultiSeries& f);

  const std::vector<Plane>& planes() const noexcept { return planes_; }

  struct Value {
    Valuation value;
    /// Indices into planes() attaining the minimum.
    std::vector<std::size_t> achieving;
  };
  /// Coordinates may be +inf; a plane with i = 0 ignores xi1, and likewise for j.
  Value evaluate(const Valuation& xi1, const Valuation& xi2) const;

 private:
  std::vector<Plane> planes_;
};

/// V_f(xi1, xi2) as an exact rational.
Copolygon::Value copolygon_build_eval(const MultiSeries& f, const Rational& xi1, const Rational& xi2);

struct BoundCheck {
  /// v(f(theta)); a lower bound when the value vanishes at its certified precision.
  Valuation value_valuation;
  bool value_certified = true;
  Valuation bound;
  bool holds = false;
  bool strict = false;
  Rational certified;
};

/// Compares v(f(theta)) with V_f(v(theta1), v(theta2)), evaluating the
/// stored terms of f as a polynomial. Throws DivergentPoint for coordinates
/// of valuation <= 0.
BoundCheck valuation_bound_check(const MultiSeries& f, const PointTuple& theta);

}  // namespace fgdyn
