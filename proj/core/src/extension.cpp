#include "fgdyn/extension.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "fgdyn/matrix.hpp"

namespace fgdyn {

std::string_view to_string(ModulusKind kind) {
  return kind == ModulusKind::Eisenstein ? "eisenstein" : "unramified";
}

namespace {

using Poly = std::vector<std::uint64_t>;  // coefficients mod p, low degree first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  mpz_class x(static_cast<unsigned long>(a));
  mpz_class m(static_cast<unsigned long>(p));
  mpz_class r;
  mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r.get_ui();
}

Poly poly_mod(Poly a, const Poly& m, std::uint64_t p) {
  trim(a);
  const std::size_t n = m.size() - 1;
  const std::uint64_t lead_inv = inv_mod(m.back(), p);
  while (a.size() > n) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - n;
    for (std::size_t i = 0; i <= n; ++i) a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  }
  return poly_mod(std::move(out), m, p);
}

Poly poly_powmod(Poly base, mpz_class e, const Poly& m, std::uint64_t p) {
  Poly result{1};
  base = poly_mod(std::move(base), m, p);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t()) != 0) result = poly_mulmod(result, base, m, p);
    e >>= 1;
    if (e > 0) base = poly_mulmod(base, base, m, p);
  }
  return result;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin's irreducibility test over F_p.
bool irreducible_mod_p(const Poly& f, std::uint64_t p) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n <= 1) return n == 1;
  const Poly x{0, 1};
  auto frob = [&](int k) {
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    Poly r = poly_powmod(x, e, f, p);
    r.resize(std::max<std::size_t>(r.size(), 2), 0);
    r[1] = (r[1] + p - 1) % p;
    trim(r);
    return r;
  };
  if (!frob(n).empty()) return false;
  for (int q = 2; q <= n; ++q) {
    if (n % q != 0 || !is_prime(static_cast<std::uint64_t>(q))) continue;
    Poly g = poly_gcd(f, frob(n / q), p);
    if (g.size() != 1) return false;
  }
  return true;
}

Rational ceil_rational(const Rational& r) {
  const auto n = r.numerator();
  const auto d = r.denominator();
  return Rational(n >= 0 ? (n + d - 1) / d : -((-n) / d));
}

}  // namespace

ExtensionPtr Extension::create(const PrecisionContext& ctx, std::vector<PadicScalar> coeffs, ModulusKind kind) {
  if (coeffs.size() < 2) throw Error(ErrorCode::BadModulus, "modulus must have degree at least 1");
  for (const auto& c : coeffs) require_same_context(ctx, c.context());
  const PadicScalar one = PadicScalar::from_integer(ctx, 1L);
  if (coeffs.back() != one) throw Error(ErrorCode::BadModulus, "modulus must be monic");
  for (const auto& c : coeffs) {
    if (!c.is_integral()) throw Error(ErrorCode::BadModulus, "modulus coefficients must be integral");
  }
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (kind == ModulusKind::Eisenstein) {
    for (int i = 0; i < n; ++i) {
      if (coeffs[static_cast<std::size_t>(i)].raw_valuation() < 1) {
        throw Error(ErrorCode::BadModulus, "Eisenstein criterion fails: coefficient of t^" + std::to_string(i) +
                                               " is a unit");
      }
    }
    if (coeffs.front().raw_valuation() != 1) {
      throw Error(ErrorCode::BadModulus, "Eisenstein criterion fails: constant term must have valuation exactly 1");
    }
  } else {
    Poly f;
    for (const auto& c : coeffs) f.push_back(c.residue());
    if (!irreducible_mod_p(f, ctx.p)) {
      throw Error(ErrorCode::BadModulus, "unramified modulus is not irreducible modulo p");
    }
  }
  std::ostringstream label;
  label << fgdyn::to_string(kind) << "[";
  for (std::size_t i = 0; i < coeffs.size(); ++i) label << (i ? "," : "") << coeffs[i].to_integer(ctx.precision).get_str();
  label << "]";
  return ExtensionPtr(new Extension(ctx, std::move(coeffs), kind, label.str()));
}

ExtensionPtr Extension::create(const PrecisionContext& ctx, const std::vector<long>& coeffs, ModulusKind kind) {
  std::vector<PadicScalar> cs;
  for (long c : coeffs) cs.push_back(PadicScalar::from_integer(ctx, c));
  return create(ctx, std::move(cs), kind);
}

ExtensionPtr Extension::base(const PrecisionContext& ctx) {
  return create(ctx, std::vector<long>{0, 1}, ModulusKind::Unramified);
}

ExtensionPtr Extension::cyclotomic(const PrecisionContext& ctx, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "cyclotomic level must be positive");
  mpz_class step;
  mpz_ui_pow_ui(step.get_mpz_t(), ctx.p, static_cast<unsigned long>(n - 1));
  const unsigned long q = step.get_ui();
  const unsigned long degree = q * (ctx.p - 1);
  if (degree > 4096) throw Error(ErrorCode::Unsupported, "cyclotomic extension too large");
  // Phi_{p^n}(1+t) = sum_{k < p} (1+t)^{k p^{n-1}}.
  std::vector<mpz_class> coeffs(degree + 1, 0);
  for (unsigned long k = 0; k < ctx.p; ++k) {
    const unsigned long e = k * q;
    mpz_class binom = 1;
    for (unsigned long j = 0; j <= e; ++j) {
      coeffs[j] += binom;
      binom = binom * (e - j) / (j + 1);
    }
  }
  std::vector<PadicScalar> cs;
  for (const auto& c : coeffs) cs.push_back(PadicScalar::from_integer(ctx, c));
  auto ext = create(ctx, std::move(cs), ModulusKind::Eisenstein);
  const_cast<Extension&>(*ext).label_ = "cyclotomic:" + std::to_string(n);
  return ext;
}

bool Extension::same_as(const Extension& other) const {
  if (this == &other) return true;
  if (!(ctx_ == other.ctx_) || kind_ != other.kind_ || modulus_.size() != other.modulus_.size()) return false;
  for (std::size_t i = 0; i < modulus_.size(); ++i) {
    if (modulus_[i] != other.modulus_[i]) return false;
  }
  return true;
}

std::string Extension::to_string() const { return label_; }

namespace {

void require_same_extension(const ExtScalar& a, const ExtScalar& b) {
  if (!a.extension()->same_as(*b.extension())) throw Error(ErrorCode::MixedContext, "elements of different extensions");
}

}  // namespace

ExtScalar::ExtScalar(ExtensionPtr ext) : ext_(std::move(ext)) {
  coeffs_.assign(static_cast<std::size_t>(ext_->degree()), PadicScalar(ext_->context()));
}

ExtScalar::ExtScalar(ExtensionPtr ext, std::vector<PadicScalar> coeffs) : ext_(std::move(ext)) {
  const auto n = static_cast<std::size_t>(ext_->degree());
  for (const auto& c : coeffs) require_same_context(ext_->context(), c.context());
  // Reduce modulo the monic modulus.
  const auto& m = ext_->modulus();
  while (coeffs.size() > n) {
    const PadicScalar lead = coeffs.back();
    coeffs.pop_back();
    if (lead.is_zero() && lead.is_exact()) continue;
    const std::size_t shift = coeffs.size() - n;
    for (std::size_t i = 0; i < n; ++i) coeffs[shift + i] -= lead * m[i];
  }
  coeffs.resize(n, PadicScalar(ext_->context()));
  coeffs_ = std::move(coeffs);
}

ExtScalar ExtScalar::from_scalar(ExtensionPtr ext, const PadicScalar& c) {
  return ExtScalar(std::move(ext), std::vector<PadicScalar>{c});
}

ExtScalar ExtScalar::from_integers(ExtensionPtr ext, const std::vector<long>& coeffs) {
  std::vector<PadicScalar> cs;
  for (long c : coeffs) cs.push_back(PadicScalar::from_integer(ext->context(), c));
  return ExtScalar(std::move(ext), std::move(cs));
}

ExtScalar ExtScalar::generator(ExtensionPtr ext) { return from_integers(std::move(ext), {0, 1}); }

bool ExtScalar::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const PadicScalar& c) { return c.is_zero(); });
}

Valuation ExtScalar::valuation() const {
  const int e = ext_->ramification_index();
  const bool ramified = ext_->kind() == ModulusKind::Eisenstein;
  std::optional<Rational> best;
  std::optional<Rational> unknown;
  bool all_exact_zero = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const PadicScalar& c = coeffs_[i];
    const Rational shift = ramified ? Rational(static_cast<std::int64_t>(i), e) : Rational(0);
    if (c.is_zero()) {
      if (!c.is_exact() && c.precision() < context().precision) all_exact_zero = false;
      const Rational bound = Rational(c.precision()) + shift;
      if (!c.is_exact() && (!unknown || bound < *unknown)) unknown = bound;
      continue;
    }
    all_exact_zero = false;
    const Rational v = Rational(c.raw_valuation()) + shift;
    if (!best || v < *best) best = v;
  }
  if (!best) {
    if (all_exact_zero) return Valuation::infinity();
    throw Error(ErrorCode::ImpreciseValuation, "element is zero only modulo its known precision");
  }
  if (unknown && *unknown <= *best) {
    throw Error(ErrorCode::ImpreciseValuation, "unknown digits could lower the valuation");
  }
  return Valuation(*best);
}

Rational ExtScalar::valuation_lower_bound() const {
  try {
    const Valuation v = valuation();
    if (!v.is_infinite()) return v.value();
  } catch (const Error& err) {
    if (err.code() != ErrorCode::ImpreciseValuation) throw;
  }
  return std::min(precision(), [&] {
    // Smallest valuation among digits that are known to be nonzero.
    const int e = ext_->ramification_index();
    const bool ramified = ext_->kind() == ModulusKind::Eisenstein;
    Rational out = precision();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i].is_zero()) continue;
      const Rational shift = ramified ? Rational(static_cast<std::int64_t>(i), e) : Rational(0);
      out = std::min(out, Rational(coeffs_[i].raw_valuation()) + shift);
    }
    return out;
  }());
}

Rational ExtScalar::precision() const {
  const int e = ext_->ramification_index();
  const bool ramified = ext_->kind() == ModulusKind::Eisenstein;
  Rational out(context().precision + 1);
  bool any = false;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Rational shift = ramified ? Rational(static_cast<std::int64_t>(i), e) : Rational(0);
    const Rational here = Rational(coeffs_[i].precision()) + shift;
    if (!any || here < out) out = here;
    any = true;
  }
  return out;
}

ExtScalar ExtScalar::with_precision(const Rational& bound) const {
  const int e = ext_->ramification_index();
  const bool ramified = ext_->kind() == ModulusKind::Eisenstein;
  std::vector<PadicScalar> out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Rational shift = ramified ? Rational(static_cast<std::int64_t>(i), e) : Rational(0);
    const Rational need = ceil_rational(bound - shift);
    const auto k = need.numerator();
    if (k < 1) throw Error(ErrorCode::PrecisionExhausted, "certified precision too small to keep a digit");
    out.push_back(coeffs_[i].with_precision(static_cast<int>(std::min<std::int64_t>(k, context().precision))));
  }
  return ExtScalar(ext_, std::move(out));
}

ExtScalar ExtScalar::operator-() const {
  std::vector<PadicScalar> out;
  for (const auto& c : coeffs_) out.push_back(-c);
  return ExtScalar(ext_, std::move(out));
}

ExtScalar operator+(const ExtScalar& a, const ExtScalar& b) {
  require_same_extension(a, b);
  std::vector<PadicScalar> out;
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out.push_back(a.coeffs_[i] + b.coeffs_[i]);
  return ExtScalar(a.ext_, std::move(out));
}

ExtScalar operator-(const ExtScalar& a, const ExtScalar& b) { return a + (-b); }

ExtScalar operator*(const ExtScalar& a, const ExtScalar& b) {
  require_same_extension(a, b);
  const std::size_t n = a.coeffs_.size();
  std::vector<PadicScalar> out(2 * n - 1, PadicScalar(a.context()));
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coeffs_[i].is_zero() && a.coeffs_[i].is_exact()) continue;
    for (std::size_t j = 0; j < n; ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return ExtScalar(a.ext_, std::move(out));
}

ExtScalar operator*(const PadicScalar& c, const ExtScalar& a) {
  std::vector<PadicScalar> out;
  for (const auto& x : a.coeffs_) out.push_back(c * x);
  return ExtScalar(a.ext_, std::move(out));
}

ExtScalar operator/(const ExtScalar& a, const ExtScalar& b) {
  require_same_extension(a, b);
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by an extension element that is zero");
  const std::size_t n = b.coeffs_.size();
  PadicMatrix m(b.context(), n, n);
  ExtScalar column = b;
  const ExtScalar t = ExtScalar::generator(b.ext_);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) m(i, j) = column.coeffs_[i];
    if (j + 1 < n) column = column * t;
  }
  auto x = solve(m, a.coeffs_);
  if (!x) throw Error(ErrorCode::DivisionByZero, "divisor is not invertible at working precision");
  return ExtScalar(a.ext_, std::move(*x));
}

ExtScalar ExtScalar::pow(unsigned long e) const {
  ExtScalar result = from_scalar(ext_, PadicScalar::from_integer(context(), 1L));
  ExtScalar base = *this;
  while (e > 0) {
    if (e & 1UL) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

ExtScalar ExtScalar::inverse() const { return from_scalar(ext_, PadicScalar::from_integer(context(), 1L)) / *this; }

bool operator==(const ExtScalar& a, const ExtScalar& b) {
  if (!a.ext_->same_as(*b.ext_)) return false;
  return (a - b).is_zero();
}

std::string ExtScalar::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    out << (first ? "" : " + ") << "(" << coeffs_[i].to_string() << ")";
    if (i > 0) out << "*t" << (i > 1 ? "^" + std::to_string(i) : "");
    first = false;
  }
  if (first) out << "0 + O(" << fgdyn::to_string(precision()) << ")";
  return out.str();
}

PointTuple::PointTuple(std::vector<ExtScalar> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw Error(ErrorCode::InvalidArgument, "point needs at least one coordinate");
  for (const auto& c : coords_) {
    if (!c.extension()->same_as(*coords_.front().extension())) {
      throw Error(ErrorCode::MixedContext, "point coordinates lie in different extensions");
    }
  }
}

Valuation PointTuple::valuation() const {
  Valuation out = Valuation::infinity();
  for (const auto& c : coords_) out = min(out, c.valuation());
  return out;
}

Rational PointTuple::valuation_lower_bound() const {
  Rational out = coords_.front().valuation_lower_bound();
  for (const auto& c : coords_) out = std::min(out, c.valuation_lower_bound());
  return out;
}

Rational PointTuple::precision() const {
  Rational out = coords_.front().precision();
  for (const auto& c : coords_) out = std::min(out, c.precision());
  return out;
}

bool PointTuple::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const ExtScalar& c) { return c.is_zero(); });
}

PointTuple PointTuple::with_precision(const Rational& bound) const {
  std::vector<ExtScalar> out;
  for (const auto& c : coords_) out.push_back(c.with_precision(bound));
  return PointTuple(std::move(out));
}

bool operator==(const PointTuple& a, const PointTuple& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

std::string PointTuple::to_string() const {
  std::ostringstream out;
  out << "(";
  for (int i = 0; i < size(); ++i) out << (i ? "; " : "") << (*this)[i].to_string();
  out << ")";
  return out.str();
}

}  // namespace fgdyn
