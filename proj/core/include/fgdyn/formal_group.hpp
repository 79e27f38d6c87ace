#pragma once

#include <memory>
#include <optional>
#include <string>

#include "fgdyn/tuple_series.hpp"

namespace fgdyn {

/// Which axioms were verified, and up to which total degree.
struct AxiomCertificate {
  int degree = 0;
  bool commutative = false;
};

/// A d-dimensional formal group law F(X, Y) in 2d variables (X block first).
/// Only fg_validate creates instances.
class FormalGroupLaw {
 public:
  int dimension() const noexcept { return law_.size(); }
  const PrecisionContext& context() const noexcept { return law_.context(); }
  const TupleSeries& law() const noexcept { return law_; }
  /// iota with F(X, iota(X)) = 0.
  const TupleSeries& negation() const noexcept { return negation_; }
  const AxiomCertificate& certificate() const noexcept { return certificate_; }

 private:
  FormalGroupLaw(TupleSeries law, TupleSeries negation, AxiomCertificate certificate)
      : law_(std::move(law)), negation_(std::move(negation)), certificate_(certificate) {}
  friend FormalGroupLaw fg_validate(const TupleSeries& candidate);

  TupleSeries law_;
  TupleSeries negation_;
  AxiomCertificate certificate_;
};

/// Checks F = X + Y mod degree 2, the unit axiom, associativity, builds iota
/// and records commutativity, all modulo degree D+1. Throws AxiomViolation
/// naming the first failing axiom, its degree and a witness monomial.
FormalGroupLaw fg_validate(const TupleSeries& candidate);

/// The formal inverse iota of a certified law.
TupleSeries fg_negation(const FormalGroupLaw& group);

/// F(a(X), b(X)) for d-in-d tuples a, b.
TupleSeries fg_add(const FormalGroupLaw& group, const TupleSeries& a, const TupleSeries& b);

/// A d-in-d series together with the group it is meant to be an endomorphism of.
struct EndoSeries {
  TupleSeries series;
  std::shared_ptr<const FormalGroupLaw> group;
  /// Degree up to which f o F = F o (f, f) is known to hold.
  std::optional<int> certified_degree;
};

/// [n]_F by doubling and F-addition; negative n through iota.
EndoSeries fg_multiplication_map(const FormalGroupLaw& group, const mpz_class& n);
EndoSeries fg_multiplication_map(const FormalGroupLaw& group, long n);
/// [a]_F for a in Z_p, from the digit truncation [a mod p^M]_F with M the
/// known precision of a. Coefficient precision is lowered to the level at
/// which [a mod p^M]_F and [a mod p^M + p^M]_F agree; StabilizationFailure
/// when some coefficient does not stabilize at all.
EndoSeries fg_multiplication_map(const FormalGroupLaw& group, const PadicScalar& a);

/// Verifies f o F = F o (f(X), f(Y)) mod degree D+1; throws NotEndomorphism.
EndoSeries endo_verify(const FormalGroupLaw& group, const TupleSeries& f);

struct HeightReport {
  /// nullopt for infinite height.
  std::optional<int> height;
  int level = 1;
  /// p^{h n}; nullopt for infinite height.
  std::optional<mpz_class> kernel_count;
  /// Weierstrass degree (d = 1) or monomial-basis rank (d = 2).
  std::optional<mpz_class> rank;
  std::string method;
};

/// Height and kernel size |ker [p^n]_F| = p^{h n}. Dimension 1 uses the
/// Weierstrass degree of [p]_F; dimension 2 requires [p]_F mod p to be a pair
/// of pure powers of distinct variables. Other cases throw Unsupported.
HeightReport height_and_kernel_count(const FormalGroupLaw& group, int level,
                                     const TupleSeries* p_series = nullptr);

}  // namespace fgdyn
