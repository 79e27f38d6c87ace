#include <doctest.h>

#include <random>

#include "fgdyn/copolygon.hpp"
#include "oracle.hpp"

using namespace fgdyn;

namespace {

MultiSeries sample(const PrecisionContext& ctx) {
  const MultiSeries x1 = MultiSeries::variable(ctx, 2, 0);
  const MultiSeries x2 = MultiSeries::variable(ctx, 2, 1);
  return MultiSeries::constant(ctx, 2, PadicScalar::from_integer(ctx, static_cast<long>(ctx.p))) + x1 + x1 * x2 * x2;
}

PointTuple base_point(const PrecisionContext& ctx, long a, long b) {
  const auto ext = Extension::base(ctx);
  return PointTuple(std::vector<ExtScalar>{ExtScalar::from_integers(ext, {a}), ExtScalar::from_integers(ext, {b})});
}

}  // namespace

TEST_CASE("copolygon values") {
  const auto ctx = PrecisionContext::make(3, 20, 6);
  const MultiSeries f = sample(ctx);
  const Copolygon::Value at_one = copolygon_build_eval(f, 1, 1);
  CHECK(at_one.value == Valuation(1));
  CHECK(at_one.achieving.size() == 2);
  CHECK(copolygon_build_eval(f, 0, 0).value == Valuation(0));
  const MultiSeries x1 = MultiSeries::variable(ctx, 2, 0);
  for (const Rational xi : {Rational(0), Rational(1, 3), Rational(7, 2)}) {
    CHECK(copolygon_build_eval(x1, xi, Rational(5)).value == Valuation(xi));
  }
  const Copolygon c = Copolygon::build(f);
  CHECK(c.planes().size() == 3);
  CHECK(c.evaluate(Valuation(1), Valuation::infinity()).value == Valuation(1));
  CHECK_THROWS_AS(Copolygon::build(MultiSeries(ctx, 2)), Error);
  CHECK_THROWS_AS(Copolygon::build(MultiSeries::variable(ctx, 3, 0)), Error);
}

TEST_CASE("copolygons are concave on sampled segments") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> num(0, 40);
  std::uniform_int_distribution<int> den(1, 9);
  for (unsigned p : {2u, 3u, 5u}) {
    const auto ctx = PrecisionContext::make(p, 20, 8);
    for (int trial = 0; trial < 30; ++trial) {
      oracle::QSeries q = oracle::random_series(rng, 2, 8, 0, 7, 300);
      if (q.c.empty()) continue;
      const MultiSeries f = oracle::to_library(ctx, q);
      const Copolygon c = Copolygon::build(f);
      const Rational a1(num(rng), den(rng));
      const Rational a2(num(rng), den(rng));
      const Rational b1(num(rng), den(rng));
      const Rational b2(num(rng), den(rng));
      const Rational t(den(rng) - 1, 9);
      const Valuation mid = c.evaluate(t * a1 + (1 - t) * b1, t * a2 + (1 - t) * b2).value;
      const Rational va = c.evaluate(a1, a2).value.value();
      const Rational vb = c.evaluate(b1, b2).value.value();
      CHECK(mid >= Valuation(t * va + (1 - t) * vb));
    }
  }
}

TEST_CASE("valuation bound examples") {
  for (unsigned p : {2u, 3u, 5u}) {
    const auto ctx = PrecisionContext::make(p, 20, 6);
    const long pl = static_cast<long>(p);
    const MultiSeries x1 = MultiSeries::variable(ctx, 2, 0);
    const BoundCheck single = valuation_bound_check(x1, base_point(ctx, pl * pl * 7, pl));
    CHECK(single.value_valuation == Valuation(2));
    CHECK(single.bound == Valuation(2));
    CHECK(single.holds);
    CHECK(!single.strict);

    const BoundCheck s = valuation_bound_check(sample(ctx), base_point(ctx, pl, pl));
    CHECK(s.bound == Valuation(1));
    CHECK(s.holds);
    CHECK(s.value_valuation == Valuation(p == 2 ? 2 : 1));
    CHECK(s.strict == (p == 2));

    const MultiSeries x2 = MultiSeries::variable(ctx, 2, 1);
    const BoundCheck cancel = valuation_bound_check(x1 + x2, base_point(ctx, pl, -pl));
    CHECK(cancel.value_valuation.is_infinite());
    CHECK(cancel.bound == Valuation(1));
    CHECK(cancel.holds);
    CHECK(cancel.strict);

    try {
      (void)valuation_bound_check(x1, base_point(ctx, 1, pl));
      FAIL("expected DivergentPoint");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DivergentPoint);
    }
  }
}

TEST_CASE("valuation bound over ramified points") {
  const auto ctx = PrecisionContext::make(3, 24, 8);
  const auto ext = Extension::cyclotomic(ctx, 1);
  const ExtScalar pi = ExtScalar::generator(ext);
  const MultiSeries x1 = MultiSeries::variable(ctx, 2, 0);
  const MultiSeries x2 = MultiSeries::variable(ctx, 2, 1);
  const MultiSeries f = x1 * x1 + PadicScalar::from_integer(ctx, 3L) * x2;
  const BoundCheck r = valuation_bound_check(f, PointTuple(std::vector<ExtScalar>{pi, pi}));
  CHECK(r.bound == Valuation(Rational(1)));
  CHECK(r.value_valuation == Valuation(Rational(1)));
  CHECK(r.holds);
  CHECK(!r.strict);
}
