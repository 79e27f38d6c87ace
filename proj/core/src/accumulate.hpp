#pragma once

// Accumulation kernels shared by series multiplication and composition.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "fgdyn/series.hpp"

namespace fgdyn {

class MultiSeriesBuilder {
 public:
  // Terms must be sorted by exponent, nonzero and within degree D.
  static MultiSeries adopt(const PrecisionContext& ctx, int nvars, std::vector<Term> terms) {
    MultiSeries out(ctx, nvars);
    out.terms_ = std::move(terms);
    return out;
  }
  static void lower_floor(MultiSeries& s, int degree, long k) { s.lower_floor(degree, k); }
  static void impose_floor(MultiSeries& s, const std::vector<long>& floor) { s.impose_floor(floor); }
};

namespace detail {

// Running sum num * p^base known modulo p^prec.
struct Accumulator {
  mpz_class num;
  long base = 0;
  long prec = PadicScalar::kExactPrecision;
  bool exact = true;
  bool empty = true;
};

inline mpz_class& scratch() {
  thread_local mpz_class tmp;
  return tmp;
}

// acc += a * b
inline void add_product(Accumulator& acc, const PadicScalar& a, const PadicScalar& b, std::uint32_t p) {
  const long va = a.raw_valuation();
  const long vb = b.raw_valuation();
  const bool exact = a.is_exact() && b.is_exact();
  const long prec = exact ? PadicScalar::kExactPrecision
                          : std::min(a.tracking_precision() + vb, b.tracking_precision() + va);
  acc.prec = std::min(acc.prec, prec);
  acc.exact = acc.exact && exact;
  const long v = va + vb;
  if (!acc.exact && v >= acc.prec) return;
  if (acc.empty) {
    mpz_mul(acc.num.get_mpz_t(), a.unit().get_mpz_t(), b.unit().get_mpz_t());
    acc.base = v;
    acc.empty = false;
    return;
  }
  if (v >= acc.base) {
    if (v == acc.base) {
      mpz_addmul(acc.num.get_mpz_t(), a.unit().get_mpz_t(), b.unit().get_mpz_t());
    } else {
      mpz_class& t = scratch();
      mpz_mul(t.get_mpz_t(), a.unit().get_mpz_t(), b.unit().get_mpz_t());
      mpz_addmul(acc.num.get_mpz_t(), t.get_mpz_t(), power_of(p, static_cast<int>(v - acc.base)).get_mpz_t());
    }
  } else {
    mpz_mul(acc.num.get_mpz_t(), acc.num.get_mpz_t(), power_of(p, static_cast<int>(acc.base - v)).get_mpz_t());
    mpz_addmul(acc.num.get_mpz_t(), a.unit().get_mpz_t(), b.unit().get_mpz_t());
    acc.base = v;
  }
}

// acc += a
inline void add_scalar(Accumulator& acc, const PadicScalar& a, std::uint32_t p) {
  acc.prec = std::min(acc.prec, a.tracking_precision());
  acc.exact = acc.exact && a.is_exact();
  if (a.is_zero()) return;
  const long v = a.raw_valuation();
  if (!acc.exact && v >= acc.prec) return;
  if (acc.empty) {
    acc.num = a.unit();
    acc.base = v;
    acc.empty = false;
  } else if (v >= acc.base) {
    mpz_addmul(acc.num.get_mpz_t(), a.unit().get_mpz_t(), power_of(p, static_cast<int>(v - acc.base)).get_mpz_t());
  } else {
    mpz_mul(acc.num.get_mpz_t(), acc.num.get_mpz_t(), power_of(p, static_cast<int>(acc.base - v)).get_mpz_t());
    acc.num += a.unit();
    acc.base = v;
  }
}

inline PadicScalar finish(const PrecisionContext& ctx, Accumulator& acc) {
  if (acc.exact) {
    if (acc.empty) return PadicScalar(ctx);
    return PadicScalar::assemble(ctx, std::move(acc.num), acc.base, 0, true);
  }
  if (acc.empty) return PadicScalar::zero(ctx, static_cast<int>(std::min<long>(acc.prec, ctx.precision)));
  return PadicScalar::assemble(ctx, std::move(acc.num), acc.base, acc.prec, false);
}

// Open-addressing map from exponent keys to accumulators.
class AccumulatorTable {
 public:
  explicit AccumulatorTable(std::size_t expected = 16) {
    std::size_t size = 16;
    while (size < expected * 2) size *= 2;
    rehash(size);
  }

  Accumulator& at(ExponentKey key) {
    if ((accs_.size() + 1) * 2 > slots_.size()) rehash(slots_.size() * 2);
    std::size_t mask = slots_.size() - 1;
    std::size_t i = hash(key) & mask;
    while (slots_[i] >= 0) {
      if (keys_[static_cast<std::size_t>(slots_[i])] == key) return accs_[static_cast<std::size_t>(slots_[i])];
      i = (i + 1) & mask;
    }
    slots_[i] = static_cast<std::int32_t>(accs_.size());
    keys_.push_back(key);
    accs_.emplace_back();
    return accs_.back();
  }

  bool empty() const noexcept { return accs_.empty(); }

  // Finalizes into sorted nonzero terms; cancelled inexact sums lower the floor.
  MultiSeries to_series(const PrecisionContext& ctx, int nvars) {
    std::vector<std::size_t> order(keys_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys_[a] < keys_[b]; });
    std::vector<Term> terms;
    terms.reserve(order.size());
    std::vector<std::pair<int, long>> lost;
    for (std::size_t i : order) {
      PadicScalar c = finish(ctx, accs_[i]);
      if (!c.is_zero()) {
        terms.push_back(Term{Exponent(keys_[i]), std::move(c)});
      } else if (!c.is_exact()) {
        lost.emplace_back(Exponent(keys_[i]).degree(), c.tracking_precision());
      }
    }
    MultiSeries out = MultiSeriesBuilder::adopt(ctx, nvars, std::move(terms));
    for (const auto& [degree, k] : lost) MultiSeriesBuilder::lower_floor(out, degree, k);
    return out;
  }

 private:
  static std::size_t hash(ExponentKey key) noexcept {
    std::uint64_t x = static_cast<std::uint64_t>(key) ^ (static_cast<std::uint64_t>(key >> 64) * 0x9E3779B97F4A7C15ULL);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return static_cast<std::size_t>(x);
  }

  void rehash(std::size_t size) {
    slots_.assign(size, -1);
    const std::size_t mask = size - 1;
    for (std::size_t k = 0; k < keys_.size(); ++k) {
      std::size_t i = hash(keys_[k]) & mask;
      while (slots_[i] >= 0) i = (i + 1) & mask;
      slots_[i] = static_cast<std::int32_t>(k);
    }
  }

  std::vector<std::int32_t> slots_;
  std::vector<ExponentKey> keys_;
  std::vector<Accumulator> accs_;
};

}  // namespace detail
}  // namespace fgdyn
