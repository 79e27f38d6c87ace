#include <doctest.h>

#include "fgdyn/fixtures.hpp"
#include "fgdyn/formal_group.hpp"
#include "oracle.hpp"

using namespace fgdyn;

namespace {

PadicScalar integer(const PrecisionContext& ctx, long n) { return PadicScalar::from_integer(ctx, n); }

TupleSeries one(MultiSeries f) { return TupleSeries(std::vector<MultiSeries>{std::move(f)}); }

TupleSeries example_two_dimensional(const PrecisionContext& ctx) {
  const auto v = [&](int i) { return MultiSeries::variable(ctx, 4, i); };
  return TupleSeries(std::vector<MultiSeries>{v(0) + v(2) + v(1) * v(3), v(1) + v(3)});
}

}  // namespace

TEST_CASE("certified laws") {
  const auto ctx = PrecisionContext::make(3, 20, 10);
  const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
  CHECK(m.dimension() == 1);
  CHECK(m.certificate().degree == 10);
  CHECK(m.certificate().commutative);
  const FormalGroupLaw e = fg_validate(example_two_dimensional(ctx));
  CHECK(e.dimension() == 2);
  CHECK(e.certificate().commutative);
}

TEST_CASE("unit axiom failure names the axiom, degree and witness") {
  const auto ctx = PrecisionContext::make(3, 20, 6);
  const MultiSeries x = MultiSeries::variable(ctx, 2, 0);
  const MultiSeries y = MultiSeries::variable(ctx, 2, 1);
  try {
    (void)fg_validate(one(x + y + x * x));
    FAIL("expected AxiomViolation");
  } catch (const AxiomViolation& e) {
    CHECK(e.axiom().find("unit") != std::string::npos);
    CHECK(e.degree() == 2);
    CHECK(!e.witness().empty());
  }
  CHECK_THROWS_AS(fg_validate(one(x + y + x * x * y)), AxiomViolation);
  CHECK_THROWS_AS(fg_validate(one(x + integer(ctx, 2) * y)), AxiomViolation);
}

TEST_CASE("negations") {
  const auto ctx = PrecisionContext::make(5, 20, 9);
  const MultiSeries x = MultiSeries::variable(ctx, 1, 0);
  CHECK(fg_negation(fg_validate(additive_law(ctx))).identical(one(-x)));

  MultiSeries expected(ctx, 1);
  for (int k = 1; k <= 9; ++k) expected = expected + integer(ctx, k % 2 == 1 ? -1 : 1) * x.pow(static_cast<unsigned>(k));
  CHECK(fg_negation(fg_validate(multiplicative_law(ctx))).identical(one(expected)));

  const MultiSeries x1 = MultiSeries::variable(ctx, 2, 0);
  const MultiSeries x2 = MultiSeries::variable(ctx, 2, 1);
  const TupleSeries iota(std::vector<MultiSeries>{-x1 + x2 * x2, -x2});
  const FormalGroupLaw e = fg_validate(example_two_dimensional(ctx));
  CHECK(fg_negation(e).identical(iota));
  CHECK(fg_add(e, TupleSeries::identity(ctx, 2), iota).is_zero());
  CHECK(fg_add(e, iota, TupleSeries::identity(ctx, 2)).is_zero());
}

TEST_CASE("integer multiplication maps of M match the binomial oracle") {
  for (unsigned p : {2u, 3u, 5u}) {
    const auto ctx = PrecisionContext::make(p, 24, 10);
    const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
    CHECK(fg_multiplication_map(m, 1L).series.identical(TupleSeries::identity(ctx, 1)));
    CHECK(fg_multiplication_map(m, 0L).series.is_zero());
    for (long n : {2L, 3L, 7L, -1L, -4L}) {
      const EndoSeries e = fg_multiplication_map(m, n);
      CHECK(oracle::agrees(e.series[0], oracle::multiplicative_power(n, 10)));
      CHECK(jacobian_at_zero(e.series) == PadicMatrix::scalar(ctx, 1, integer(ctx, n)));
    }
    const MultiSeries x = MultiSeries::variable(ctx, 1, 0);
    const MultiSeries two = integer(ctx, 2) * x + x * x;
    CHECK(fg_multiplication_map(m, 2L).series.identical(one(two)));
    // [p]_M = x^p mod p.
    const TupleSeries pm = fg_multiplication_map(m, static_cast<long>(p)).series;
    CHECK(pm.mod_p().identical(one(x.pow(p)).mod_p()));
  }
}

TEST_CASE("multiplication maps compose and add") {
  const auto ctx = PrecisionContext::make(3, 24, 9);
  for (const TupleSeries& law : {multiplicative_law(ctx), twisted_multiplicative_law(ctx), example_two_dimensional(ctx)}) {
    const FormalGroupLaw g = fg_validate(law);
    for (long m : {2L, -1L, 3L}) {
      for (long n : {2L, 4L, -3L}) {
        const TupleSeries fm = fg_multiplication_map(g, m).series;
        const TupleSeries fn = fg_multiplication_map(g, n).series;
        CHECK(compose(fm, fn) == fg_multiplication_map(g, m * n).series);
        CHECK(fg_add(g, fm, fn) == fg_multiplication_map(g, m + n).series);
      }
    }
  }
}

TEST_CASE("p-adic multiplication maps") {
  const auto ctx = PrecisionContext::make(3, 16, 8);
  const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
  const PadicScalar a = PadicScalar::from_integer(ctx, 4L).with_precision(16);
  const EndoSeries e = fg_multiplication_map(m, a);
  CHECK(jacobian_at_zero(e.series) == PadicMatrix::scalar(ctx, 1, a));
  CHECK(e.series == fg_multiplication_map(m, 4L).series);
  // -1/2 in Z_3.
  const PadicScalar half = PadicScalar::from_rational(ctx, -1, 2);
  const EndoSeries h = fg_multiplication_map(m, half);
  CHECK(jacobian_at_zero(h.series) == PadicMatrix::scalar(ctx, 1, half));
  CHECK(compose(fg_multiplication_map(m, -2L).series, h.series) == TupleSeries::identity(ctx, 1));
}

TEST_CASE("endomorphism verification") {
  const auto ctx = PrecisionContext::make(3, 20, 8);
  const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
  CHECK(endo_verify(m, TupleSeries::identity(ctx, 1)).certified_degree == 8);
  CHECK(endo_verify(m, fg_multiplication_map(m, 3L).series).certified_degree == 8);
  const MultiSeries x = MultiSeries::variable(ctx, 1, 0);
  try {
    (void)endo_verify(m, one(x * x));
    FAIL("expected NotEndomorphism");
  } catch (const NotEndomorphism& e) {
    CHECK(e.degree() == 2);
  }
}

TEST_CASE("heights and kernel counts") {
  for (unsigned p : {2u, 3u, 5u}) {
    const auto ctx = PrecisionContext::make(p, 20, 30);
    const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
    for (int n : {1, 2}) {
      const HeightReport r = height_and_kernel_count(m, n);
      REQUIRE(r.height.has_value());
      CHECK(*r.height == 1);
      mpz_class expected;
      mpz_ui_pow_ui(expected.get_mpz_t(), p, static_cast<unsigned long>(n));
      CHECK(*r.kernel_count == expected);
    }
    const HeightReport a = height_and_kernel_count(fg_validate(additive_law(ctx)), 1);
    CHECK(!a.height.has_value());
    CHECK(!a.kernel_count.has_value());
  }
  const auto ctx = PrecisionContext::make(3, 20, 6);
  // [3] = (3 x1 + 3 x2^2, 3 x2) vanishes mod 3.
  CHECK(!height_and_kernel_count(fg_validate(example_two_dimensional(ctx)), 1).height.has_value());
}
