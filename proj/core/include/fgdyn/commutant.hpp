#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgdyn/formal_group.hpp"

namespace fgdyn {

struct StabilityVerdict {
  enum class Reason { None, ZeroJacobian, RootOfUnity, SingularDifference };

  Reason reason = Reason::None;
  /// k with J0(u)^k = Id, for RootOfUnity.
  int order = 0;
  /// m with J0(u)^{m+1} - J0(u) singular, for SingularDifference.
  int degree = 0;

  bool stable() const noexcept { return reason == Reason::None; }
  std::string to_string() const;
};

/// Stable when J0(u) != 0, no J0(u)^k = Id with k <= root_bound, and
/// J0(u)^{m+1} - J0(u) has certified nonzero determinant for 1 <= m <= D-1.
StabilityVerdict stability_classify(const TupleSeries& u, int degree_cap = -1, int root_bound = 64);

struct ReconstructionStep {
  int degree = 0;
  /// Largest determinant valuation among the blocks solved at this degree.
  Valuation determinant_valuation;
  /// Smallest coefficient valuation of the correction; +inf when it vanished.
  Valuation correction_valuation = Valuation::infinity();
};

struct ReconstructionTrace {
  std::vector<ReconstructionStep> steps;
  /// Degrees whose right-hand side was nonzero, so that a solve took place.
  std::vector<int> inverted_degrees;
  /// Sum over degrees of the determinant valuations, checked against N.
  int budget = 0;
  TupleSeries result;
};

/// Dense difference operators above this many unknowns raise Unsupported.
inline constexpr std::size_t kDenseOperatorLimit = 400;

/// The unique H (d components in k variables, H(0) = 0, J0(H) = target)
/// with outer o H = H o inner mod degree D+1, where outer is d-in-d and
/// inner is k-in-k. Degree n solves D o (A_in X) - A_out D = [outer o H - H o inner]_n.
/// Throws NonCommutingTarget unless A_out target = target A_in, SingularStep
/// at the first degree whose operator is singular, PrecisionExhausted when
/// the summed determinant valuations reach N, and VerificationFailure when
/// the final commutation check fails.
ReconstructionTrace commutant_solve(const TupleSeries& outer, const TupleSeries& inner, const PadicMatrix& target);

/// h with J0(h) = j0_target commuting with u.
ReconstructionTrace commutant_reconstruct(const TupleSeries& u, const PadicMatrix& j0_target);

/// H in 2d variables with dH/dX(0) = b1, dH/dY(0) = b2 and
/// u o H = H o (u(X), u(Y)).
ReconstructionTrace group_from_jacobian(const TupleSeries& u, const PadicMatrix& b1, const PadicMatrix& b2);

struct EqualityVerdict {
  enum class Outcome { Equal, Different };
  Outcome outcome = Outcome::Different;
  std::string reason;
  /// Reconstruction from u and the shared Jacobian blocks, when it ran.
  std::optional<TupleSeries> reconstruction;
};

/// Decides F = G for two certified laws sharing the endomorphism u: u must be
/// an endomorphism of both, and the law rebuilt from u and the Jacobian
/// blocks must agree with each.
EqualityVerdict group_equality(const FormalGroupLaw& f, const FormalGroupLaw& g, const TupleSeries& u);

}  // namespace fgdyn
