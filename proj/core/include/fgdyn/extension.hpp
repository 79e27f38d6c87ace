#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fgdyn/padic.hpp"

namespace fgdyn {

enum class ModulusKind { Eisenstein, Unramified };

std::string_view to_string(ModulusKind kind);

/// O_K = Z_p[t]/(e(t)) for a monic modulus e, tagged Eisenstein (totally
/// ramified, v(t) = 1/deg e) or unramified (irreducible modulo p).
class Extension {
 public:
  /// coeffs are e_0, ..., e_{n-1}, 1 (low degree first, monic).
  /// Throws BadModulus when the tag's criterion fails.
  static std::shared_ptr<const Extension> create(const PrecisionContext& ctx, std::vector<PadicScalar> coeffs,
                                                 ModulusKind kind);
  static std::shared_ptr<const Extension> create(const PrecisionContext& ctx, const std::vector<long>& coeffs,
                                                 ModulusKind kind);
  /// Z_p itself, as Z_p[t]/(t).
  static std::shared_ptr<const Extension> base(const PrecisionContext& ctx);
  /// Phi_{p^n}(1 + t), Eisenstein of degree p^{n-1}(p-1); t maps to zeta_{p^n} - 1.
  static std::shared_ptr<const Extension> cyclotomic(const PrecisionContext& ctx, int n);

  const PrecisionContext& context() const noexcept { return ctx_; }
  ModulusKind kind() const noexcept { return kind_; }
  int degree() const noexcept { return static_cast<int>(modulus_.size()) - 1; }
  /// e: degree for Eisenstein moduli, 1 otherwise.
  int ramification_index() const noexcept { return kind_ == ModulusKind::Eisenstein ? degree() : 1; }
  /// f: 1 for Eisenstein moduli, degree otherwise.
  int residue_degree() const noexcept { return kind_ == ModulusKind::Eisenstein ? 1 : degree(); }
  const std::vector<PadicScalar>& modulus() const noexcept { return modulus_; }
  const std::string& label() const noexcept { return label_; }

  bool same_as(const Extension& other) const;
  std::string to_string() const;

 private:
  Extension(const PrecisionContext& ctx, std::vector<PadicScalar> modulus, ModulusKind kind, std::string label)
      : ctx_(ctx), modulus_(std::move(modulus)), kind_(kind), label_(std::move(label)) {}

  PrecisionContext ctx_;
  std::vector<PadicScalar> modulus_;
  ModulusKind kind_;
  std::string label_;
};

using ExtensionPtr = std::shared_ptr<const Extension>;

/// Element sum c_i t^i of an extension, i < deg e.
class ExtScalar {
 public:
  explicit ExtScalar(ExtensionPtr ext);
  ExtScalar(ExtensionPtr ext, std::vector<PadicScalar> coeffs);

  static ExtScalar from_scalar(ExtensionPtr ext, const PadicScalar& c);
  static ExtScalar from_integers(ExtensionPtr ext, const std::vector<long>& coeffs);
  /// The class of t.
  static ExtScalar generator(ExtensionPtr ext);

  const ExtensionPtr& extension() const noexcept { return ext_; }
  const PrecisionContext& context() const noexcept { return ext_->context(); }
  const std::vector<PadicScalar>& coeffs() const noexcept { return coeffs_; }

  /// Every coefficient is zero at its known precision.
  bool is_zero() const;
  /// Valuation in units where v(p) = 1; +inf for zero at working precision.
  /// Throws ImpreciseValuation when unknown digits could lower it.
  Valuation valuation() const;
  /// The certified valuation, or the known precision when the element is zero there.
  Rational valuation_lower_bound() const;
  /// min_i (precision(c_i) + i v(t)): the element is known modulo this valuation.
  Rational precision() const;
  ExtScalar with_precision(const Rational& bound) const;

  ExtScalar operator-() const;
  friend ExtScalar operator+(const ExtScalar& a, const ExtScalar& b);
  friend ExtScalar operator-(const ExtScalar& a, const ExtScalar& b);
  friend ExtScalar operator*(const ExtScalar& a, const ExtScalar& b);
  friend ExtScalar operator*(const PadicScalar& c, const ExtScalar& a);
  /// Throws DivisionByZero when b is zero at its precision.
  friend ExtScalar operator/(const ExtScalar& a, const ExtScalar& b);
  ExtScalar& operator+=(const ExtScalar& b) { return *this = *this + b; }
  ExtScalar& operator*=(const ExtScalar& b) { return *this = *this * b; }
  ExtScalar pow(unsigned long e) const;
  ExtScalar inverse() const;

  /// The difference is zero at its known precision.
  friend bool operator==(const ExtScalar& a, const ExtScalar& b);
  friend bool operator!=(const ExtScalar& a, const ExtScalar& b) { return !(a == b); }

  std::string to_string() const;

 private:
  ExtensionPtr ext_;
  std::vector<PadicScalar> coeffs_;
};

/// A d-tuple of elements of one extension.
class PointTuple {
 public:
  explicit PointTuple(std::vector<ExtScalar> coords);

  int size() const noexcept { return static_cast<int>(coords_.size()); }
  const ExtScalar& operator[](int i) const { return coords_.at(static_cast<std::size_t>(i)); }
  const std::vector<ExtScalar>& coords() const noexcept { return coords_; }
  const ExtensionPtr& extension() const noexcept { return coords_.front().extension(); }

  /// min over coordinates.
  Valuation valuation() const;
  Rational valuation_lower_bound() const;
  Rational precision() const;
  bool is_zero() const;
  PointTuple with_precision(const Rational& bound) const;

  friend bool operator==(const PointTuple& a, const PointTuple& b);
  std::string to_string() const;

 private:
  std::vector<ExtScalar> coords_;
};

}  // namespace fgdyn
