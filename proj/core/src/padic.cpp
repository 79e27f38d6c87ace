#include "fgdyn/padic.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace fgdyn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::MixedContext: return "MixedContext";
    case ErrorCode::ImpreciseValuation: return "ImpreciseValuation";
    case ErrorCode::BadModulus: return "BadModulus";
    case ErrorCode::NonzeroConstantTerm: return "NonzeroConstantTerm";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::DivergentPoint: return "DivergentPoint";
    case ErrorCode::AxiomViolation: return "AxiomViolation";
    case ErrorCode::NotEndomorphism: return "NotEndomorphism";
    case ErrorCode::StabilizationFailure: return "StabilizationFailure";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::SingularStep: return "SingularStep";
    case ErrorCode::NonCommutingTarget: return "NonCommutingTarget";
    case ErrorCode::VerificationFailure: return "VerificationFailure";
    case ErrorCode::LiftDivergence: return "LiftDivergence";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
  }
  return "Unknown";
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

const Rational& Valuation::value() const {
  if (infinite_) throw Error(ErrorCode::InvalidArgument, "valuation is infinite");
  return value_;
}

std::string Valuation::to_string() const { return infinite_ ? "inf" : fgdyn::to_string(value_); }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

PrecisionContext PrecisionContext::make(std::uint32_t p, int precision, int degree_cap) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, "p = " + std::to_string(p) + " is not prime");
  if (precision < 1) throw Error(ErrorCode::InvalidArgument, "precision must be >= 1");
  if (degree_cap < 2 || degree_cap > 255) throw Error(ErrorCode::InvalidArgument, "degree cap must lie in [2, 255]");
  return PrecisionContext{p, precision, degree_cap};
}

std::string PrecisionContext::to_string() const {
  return "p=" + std::to_string(p) + " N=" + std::to_string(precision) + " D=" + std::to_string(degree_cap);
}

void require_same_context(const PrecisionContext& a, const PrecisionContext& b) {
  if (!(a == b)) throw Error(ErrorCode::MixedContext, "mixed contexts: " + a.to_string() + " vs " + b.to_string());
}

const mpz_class& power_of(std::uint32_t p, int k) {
  thread_local std::unordered_map<std::uint32_t, std::deque<mpz_class>> cache;
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent in power_of");
  auto& table = cache[p];
  if (table.empty()) table.emplace_back(1);
  while (static_cast<int>(table.size()) <= k) table.push_back(table.back() * p);
  return table[static_cast<std::size_t>(k)];
}

namespace {

int strip_p(mpz_class& num, std::uint32_t p) {
  if (mpz_divisible_ui_p(num.get_mpz_t(), p) == 0) return 0;
  mpz_class prime(p);
  return static_cast<int>(mpz_remove(num.get_mpz_t(), num.get_mpz_t(), prime.get_mpz_t()));
}

}  // namespace

PadicScalar::PadicScalar(const PrecisionContext& ctx) : ctx_(ctx) {}

PadicScalar PadicScalar::make(const PrecisionContext& ctx, mpz_class num, long valuation, long precision,
                              bool exact) {
  if (exact) {
    if (num == 0) return PadicScalar(ctx);
    const int k = strip_p(num, ctx.p);
    return PadicScalar(ctx, static_cast<int>(valuation + k), std::move(num), ctx.precision, true);
  }
  precision = std::min<long>(precision, ctx.precision);
  if (precision < 1) {
    throw Error(ErrorCode::PrecisionExhausted,
                "known precision dropped to " + std::to_string(precision) + " (" + ctx.to_string() + ")");
  }
  if (num == 0 || valuation >= precision) {
    return PadicScalar(ctx, kInfiniteValuation, mpz_class(0), static_cast<int>(precision), false);
  }
  valuation += strip_p(num, ctx.p);
  if (valuation >= precision) {
    return PadicScalar(ctx, kInfiniteValuation, mpz_class(0), static_cast<int>(precision), false);
  }
  mpz_class unit;
  mpz_fdiv_r(unit.get_mpz_t(), num.get_mpz_t(), power_of(ctx.p, static_cast<int>(precision - valuation)).get_mpz_t());
  return PadicScalar(ctx, static_cast<int>(valuation), std::move(unit), static_cast<int>(precision), false);
}

PadicScalar PadicScalar::normalize(const PrecisionContext& ctx, mpz_class num, long valuation, long precision) {
  return make(ctx, std::move(num), valuation, precision, false);
}

PadicScalar PadicScalar::zero(const PrecisionContext& ctx, int precision) {
  return make(ctx, mpz_class(0), 0, precision, false);
}

PadicScalar PadicScalar::from_integer(const PrecisionContext& ctx, const mpz_class& n) {
  return make(ctx, n, 0, kExactPrecision, true);
}

PadicScalar PadicScalar::from_rational(const PrecisionContext& ctx, const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
  mpz_class d = den;
  const int k = strip_p(d, ctx.p);
  PadicScalar n = from_integer(ctx, num);
  if (d == 1 || d == -1) return from_integer(ctx, num * d).shifted(-k);
  return (n / from_integer(ctx, d)).shifted(-k);
}

PadicScalar PadicScalar::from_parts(const PrecisionContext& ctx, int valuation, const mpz_class& unit,
                                    int precision) {
  return make(ctx, unit, valuation, precision, false);
}

Valuation PadicScalar::valuation() const {
  if (!is_zero()) return Valuation(static_cast<std::int64_t>(valuation_));
  if (exact_ || precision_ >= ctx_.precision) return Valuation::infinity();
  throw Error(ErrorCode::ImpreciseValuation,
              "zero modulo p^" + std::to_string(precision_) + " only; exact zero is not certified");
}

std::uint32_t PadicScalar::residue() const {
  if (is_zero() || valuation_ > 0) return 0;
  if (valuation_ < 0) throw Error(ErrorCode::InvalidArgument, "residue of a non-integral element");
  return static_cast<std::uint32_t>(mpz_fdiv_ui(unit_.get_mpz_t(), ctx_.p));
}

mpz_class PadicScalar::to_integer(int k) const {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative digit count");
  if (is_zero() || valuation_ >= k) return 0;
  if (valuation_ < 0) throw Error(ErrorCode::InvalidArgument, "to_integer of a non-integral element");
  mpz_class out = unit_ * power_of(ctx_.p, valuation_);
  mpz_fdiv_r(out.get_mpz_t(), out.get_mpz_t(), power_of(ctx_.p, k).get_mpz_t());
  return out;
}

PadicScalar PadicScalar::operator-() const {
  if (is_zero()) return *this;
  return make(ctx_, -unit_, valuation_, tracking_precision(), exact_);
}

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
  require_same_context(a.ctx_, b.ctx_);
  const bool exact = a.exact_ && b.exact_;
  const long precision = std::min(a.tracking_precision(), b.tracking_precision());
  if (a.is_zero() && b.is_zero()) {
    return exact ? PadicScalar(a.ctx_) : PadicScalar::make(a.ctx_, mpz_class(0), 0, precision, false);
  }
  if (a.is_zero()) return PadicScalar::make(b.ctx_, b.unit_, b.valuation_, precision, exact);
  if (b.is_zero()) return PadicScalar::make(a.ctx_, a.unit_, a.valuation_, precision, exact);
  const PadicScalar& lo = a.valuation_ <= b.valuation_ ? a : b;
  const PadicScalar& hi = a.valuation_ <= b.valuation_ ? b : a;
  const long gap = static_cast<long>(hi.valuation_) - lo.valuation_;
  mpz_class num = lo.unit_;
  if (exact || hi.valuation_ < precision) {
    num += hi.unit_ * power_of(a.ctx_.p, static_cast<int>(gap));
  }
  return PadicScalar::make(a.ctx_, std::move(num), lo.valuation_, precision, exact);
}

PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }

PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
  require_same_context(a.ctx_, b.ctx_);
  if ((a.is_zero() && a.exact_) || (b.is_zero() && b.exact_)) return PadicScalar(a.ctx_);
  const bool exact = a.exact_ && b.exact_;
  const long precision =
      std::min(a.tracking_precision() + b.valuation_bound(), b.tracking_precision() + a.valuation_bound());
  if (a.is_zero() || b.is_zero()) return PadicScalar::make(a.ctx_, mpz_class(0), 0, precision, false);
  const long valuation = static_cast<long>(a.valuation_) + b.valuation_;
  if (!exact && valuation >= std::min<long>(precision, a.ctx_.precision)) {
    return PadicScalar::make(a.ctx_, mpz_class(0), 0, precision, false);
  }
  return PadicScalar::make(a.ctx_, a.unit_ * b.unit_, valuation, precision, exact);
}

PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
  require_same_context(a.ctx_, b.ctx_);
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by a scalar that is zero at working precision");
  if (a.is_zero() && a.exact_) return PadicScalar(a.ctx_);
  if (a.is_zero()) return PadicScalar::make(a.ctx_, mpz_class(0), 0, a.tracking_precision() - b.valuation_, false);
  const long valuation = static_cast<long>(a.valuation_) - b.valuation_;
  if (a.exact_ && b.exact_ && (b.unit_ == 1 || b.unit_ == -1)) {
    return PadicScalar::make(a.ctx_, a.unit_ * b.unit_, valuation, 0, true);
  }
  long relative = std::min(a.tracking_precision() - a.valuation_, b.tracking_precision() - b.valuation_);
  long precision = valuation + relative;
  if (precision > a.ctx_.precision) {
    precision = a.ctx_.precision;
    relative = precision - valuation;
  }
  if (precision < 1) {
    throw Error(ErrorCode::PrecisionExhausted, "division leaves precision " + std::to_string(precision));
  }
  if (relative <= 0) return PadicScalar::make(a.ctx_, mpz_class(0), 0, precision, false);
  const mpz_class& modulus = power_of(a.ctx_.p, static_cast<int>(relative));
  mpz_class inv;
  mpz_class bu;
  mpz_fdiv_r(bu.get_mpz_t(), b.unit_.get_mpz_t(), modulus.get_mpz_t());
  mpz_invert(inv.get_mpz_t(), bu.get_mpz_t(), modulus.get_mpz_t());
  return PadicScalar::make(a.ctx_, a.unit_ * inv, valuation, precision, false);
}

PadicScalar PadicScalar::shifted(int k) const {
  if (is_zero()) {
    if (exact_) return *this;
    return make(ctx_, mpz_class(0), 0, static_cast<long>(precision_) + k, false);
  }
  return make(ctx_, unit_, static_cast<long>(valuation_) + k, tracking_precision() + (exact_ ? 0 : k), exact_);
}

PadicScalar PadicScalar::pow(unsigned long e) const {
  PadicScalar result = from_integer(ctx_, 1L);
  PadicScalar base = *this;
  while (e > 0) {
    if (e & 1UL) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

PadicScalar PadicScalar::inverse() const { return from_integer(ctx_, 1L) / *this; }

PadicScalar PadicScalar::with_precision(int k) const {
  const long precision = std::min<long>(k, this->precision());
  if (is_zero()) return make(ctx_, mpz_class(0), 0, precision, false);
  return make(ctx_, unit_, valuation_, precision, false);
}

bool operator==(const PadicScalar& a, const PadicScalar& b) {
  if (!(a.ctx_ == b.ctx_)) return false;
  return (a - b).is_zero();
}

bool PadicScalar::identical(const PadicScalar& other) const {
  if (!(ctx_ == other.ctx_)) return false;
  if (is_zero() != other.is_zero()) return false;
  if (precision() != other.precision()) return false;
  if (is_zero()) return true;
  if (valuation_ != other.valuation_) return false;
  const mpz_class& m = power_of(ctx_.p, precision() - valuation_);
  mpz_class x;
  mpz_class y;
  mpz_fdiv_r(x.get_mpz_t(), unit_.get_mpz_t(), m.get_mpz_t());
  mpz_fdiv_r(y.get_mpz_t(), other.unit_.get_mpz_t(), m.get_mpz_t());
  return x == y;
}

std::string PadicScalar::to_string() const {
  std::ostringstream out;
  const std::string p = std::to_string(ctx_.p);
  if (is_zero()) {
    out << "0";
  } else {
    if (valuation_ != 0) out << p << "^" << valuation_ << "*";
    out << unit_.get_str();
  }
  if (exact_) {
    out << " (exact)";
  } else {
    out << " + O(" << p << "^" << precision_ << ")";
  }
  return out.str();
}

PadicScalar teichmuller(std::uint32_t r, const PrecisionContext& ctx) {
  if (r >= ctx.p) throw Error(ErrorCode::InvalidArgument, "teichmuller residue must lie in [0, p)");
  if (r == 0) return PadicScalar(ctx);
  PadicScalar x = PadicScalar::from_integer(ctx, static_cast<long>(r)).with_precision(ctx.precision);
  // x <- x^p converges to the root of unity in at most N steps.
  for (int i = 0; i <= ctx.precision; ++i) {
    PadicScalar next = x.pow(ctx.p);
    if (next.identical(x)) return x;
    x = std::move(next);
  }
  return x;
}

}  // namespace fgdyn
