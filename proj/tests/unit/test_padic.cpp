#include <doctest.h>

#include <random>

#include "fgdyn/extension.hpp"
#include "oracle.hpp"

using namespace fgdyn;

namespace {

PadicScalar at_precision(const PrecisionContext& ctx, long n) {
  return PadicScalar::from_integer(ctx, n).with_precision(ctx.precision);
}

// n mod p^k as a nonnegative integer.
mpz_class reduce(const mpz_class& n, unsigned p, int k) {
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), p, static_cast<unsigned long>(k));
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace

TEST_CASE("precision context validation") {
  CHECK_THROWS_AS(PrecisionContext::make(4, 10, 4), Error);
  CHECK_THROWS_AS(PrecisionContext::make(3, 0, 4), Error);
  CHECK_THROWS_AS(PrecisionContext::make(3, 10, 1), Error);
  CHECK_NOTHROW(PrecisionContext::make(3, 10, 2));
}

TEST_CASE("inverse pair (1/p) * p is 1") {
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    const auto ctx = PrecisionContext::make(p, 8, 4);
    const PadicScalar inv = PadicScalar::from_rational(ctx, 1, p);
    const PadicScalar one = inv * PadicScalar::from_integer(ctx, static_cast<long>(p));
    CHECK(one.identical(PadicScalar::from_integer(ctx, 1L)));
    CHECK(inv.valuation() == Valuation(-1));
  }
}

TEST_CASE("geometric series 1/(1-5) in Q_5 at N = 6") {
  const auto ctx = PrecisionContext::make(5, 6, 4);
  const PadicScalar x = at_precision(ctx, 1) / at_precision(ctx, 1 - 5);
  CHECK(x.to_integer(6) == mpz_class(1 + 5 + 25 + 125 + 625 + 3125));
  CHECK(x * at_precision(ctx, -4) == at_precision(ctx, 1));
}

TEST_CASE("division by p^k lowers the known precision by k") {
  const auto ctx = PrecisionContext::make(3, 10, 4);
  const PadicScalar a = at_precision(ctx, 9 * 7);
  CHECK(a.precision() == 10);
  const PadicScalar b = a / at_precision(ctx, 9);
  CHECK(b.precision() == 8);
  CHECK(b.to_integer(8) == mpz_class(7));
  CHECK(a.shifted(-2).precision() == 8);
}

TEST_CASE("precision exhaustion and division by zero") {
  const auto ctx = PrecisionContext::make(2, 4, 4);
  const PadicScalar a = at_precision(ctx, 1);
  CHECK_THROWS_WITH_AS(a.shifted(-4), doctest::Contains("precision"), Error);
  try {
    (void)a.shifted(-4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PrecisionExhausted);
  }
  try {
    (void)(a / PadicScalar::zero(ctx));
    FAIL("expected DivisionByZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivisionByZero);
  }
}

TEST_CASE("mixed contexts are rejected") {
  const auto a = PadicScalar::from_integer(PrecisionContext::make(3, 10, 4), 1L);
  const auto b = PadicScalar::from_integer(PrecisionContext::make(3, 11, 4), 1L);
  try {
    (void)(a + b);
    FAIL("expected MixedContext");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MixedContext);
  }
}

TEST_CASE("valuations and imprecise zeros") {
  const auto ctx = PrecisionContext::make(5, 6, 4);
  CHECK(at_precision(ctx, 5).valuation() == Valuation(1));
  CHECK(PadicScalar::zero(ctx).valuation().is_infinite());
  const PadicScalar z = at_precision(ctx, 25) - at_precision(ctx, 25);
  CHECK(z.is_zero());
  const PadicScalar low = PadicScalar::zero(ctx, 3);
  try {
    (void)low.valuation();
    FAIL("expected ImpreciseValuation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ImpreciseValuation);
  }
}

TEST_CASE("arithmetic agrees with integer arithmetic modulo p^N") {
  std::mt19937_64 rng(7);
  for (unsigned p : {2u, 3u, 5u}) {
    const int n = 12;
    const auto ctx = PrecisionContext::make(p, n, 4);
    std::uniform_int_distribution<long> dist(-100000, 100000);
    for (int trial = 0; trial < 200; ++trial) {
      const long a = dist(rng);
      const long b = dist(rng);
      const PadicScalar pa = at_precision(ctx, a);
      const PadicScalar pb = at_precision(ctx, b);
      CHECK((pa + pb).to_integer(n) == reduce(mpz_class(a + b), p, n));
      CHECK((pa - pb).to_integer(n) == reduce(mpz_class(a - b), p, n));
      CHECK((pa * pb).to_integer(n) == reduce(mpz_class(a) * b, p, n));
      if (a != 0 && b != 0) {
        const int va = oracle::valuation(mpz_class(a), p);
        const int vb = oracle::valuation(mpz_class(b), p);
        if (va + vb < n) CHECK((pa * pb).valuation() == Valuation(va + vb));
        if (va < n && vb < n && va != vb) CHECK((pa + pb).valuation() == Valuation(std::min(va, vb)));
        if (vb == 0) {
          const PadicScalar q = pa / pb;
          CHECK(q * pb == pa);
        }
      }
    }
  }
}

TEST_CASE("teichmuller lifts") {
  const auto ctx = PrecisionContext::make(5, 10, 4);
  const PadicScalar w = teichmuller(2, ctx);
  CHECK(w.to_integer(2) == mpz_class(7));
  CHECK(w.pow(4) == PadicScalar::from_integer(ctx, 1L));
  CHECK(teichmuller(1, ctx) == PadicScalar::from_integer(ctx, 1L));
  CHECK(teichmuller(0, ctx).is_zero());
  for (unsigned p : {3u, 7u, 11u}) {
    const auto c = PrecisionContext::make(p, 8, 4);
    for (unsigned r = 1; r < p; ++r) {
      const PadicScalar t = teichmuller(r, c);
      CHECK(t.residue() == r);
      CHECK(t.pow(p - 1) == PadicScalar::from_integer(c, 1L));
    }
  }
}
