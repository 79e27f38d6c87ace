#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace fgdyn {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);

// Additive valuation: an exact rational or +infinity.
class Valuation {
 public:
  Valuation() = default;
  Valuation(Rational value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Valuation(std::int64_t value) : value_(value) {}  // NOLINT(google-explicit-constructor)

  static Valuation infinity() {
    Valuation v;
    v.infinite_ = true;
    return v;
  }

  bool is_infinite() const noexcept { return infinite_; }
  // Throws InvalidArgument for +infinity.
  const Rational& value() const;

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend bool operator<(const Valuation& a, const Valuation& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator>(const Valuation& a, const Valuation& b) { return b < a; }
  friend bool operator<=(const Valuation& a, const Valuation& b) { return !(b < a); }
  friend bool operator>=(const Valuation& a, const Valuation& b) { return !(a < b); }
  friend Valuation operator+(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return Valuation(a.value_ + b.value_);
  }
  friend Valuation operator*(std::int64_t k, const Valuation& a) {
    if (a.infinite_) return infinity();
    return Valuation(a.value_ * k);
  }

  std::string to_string() const;

 private:
  bool infinite_ = false;
  Rational value_{0};
};

inline Valuation min(const Valuation& a, const Valuation& b) { return b < a ? b : a; }

// Shared parameters of a computation: the prime, the absolute precision N
// (coefficients known modulo p^N) and the total-degree cap D of series.
struct PrecisionContext {
  std::uint32_t p = 2;
  int precision = 1;
  int degree_cap = 2;

  // Validates p prime, N >= 1 and 2 <= D <= 255.
  static PrecisionContext make(std::uint32_t p, int precision, int degree_cap);

  PrecisionContext with_degree(int degree_cap) const { return make(p, precision, degree_cap); }

  friend bool operator==(const PrecisionContext&, const PrecisionContext&) = default;

  std::string to_string() const;
};

bool is_prime(std::uint64_t n);

// Throws MixedContext when the contexts differ.
void require_same_context(const PrecisionContext& a, const PrecisionContext& b);

}  // namespace fgdyn
