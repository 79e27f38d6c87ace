#pragma once

#include <string>
#include <vector>

#include "fgdyn/evaluate.hpp"

namespace fgdyn {

struct OrbitRecord {
  enum class Status { Periodic, Preperiodic, ValuationEscape, Inconclusive };

  /// theta_0, theta_1, ... as computed, each at its certified precision.
  std::vector<PointTuple> iterates;
  /// Certified valuation of each iterate; for the escaping iterate, the
  /// precision at which it vanishes.
  std::vector<Valuation> valuations;
  Status status = Status::Inconclusive;
  int tail = 0;
  int period = 0;
  /// Precision certifying the final zero, for ValuationEscape.
  Rational escape_precision{0};
  int budget = 0;
  /// J0(map) is invertible over Z_p.
  bool invertible = false;
  /// Strict growth v(theta_{k+1}) > v(theta_k) is checked for noninvertible stable maps.
  bool growth_checked = false;
  /// Steps k at which v(theta_{k+1}) <= v(theta_k) despite the check.
  std::vector<int> growth_violations;

  std::string status_string() const;
};

/// Iterates map from theta0 until an iterate equals an earlier one at
/// certified precision (Periodic when it returns to theta0, Preperiodic
/// otherwise), an iterate vanishes at a precision above the previous
/// valuation (ValuationEscape), or budget steps pass (Inconclusive).
/// Throws PrecisionExhausted when a match or a zero cannot be told apart
/// from the point's own valuation.
OrbitRecord orbit_analyze(const TupleSeries& map, const PointTuple& theta0, int budget,
                          EvalMode mode = EvalMode::Series);

}  // namespace fgdyn
