#include <doctest.h>

#include "fgdyn/dynamics.hpp"
#include "fgdyn/fixtures.hpp"
#include "fgdyn/torsion.hpp"

using namespace fgdyn;

namespace {

TupleSeries mul(const FormalGroupLaw& g, long n) { return fg_multiplication_map(g, n).series; }

PointTuple point(const ExtScalar& x) { return PointTuple(std::vector<ExtScalar>{x}); }

}  // namespace

TEST_CASE("the origin is fixed") {
  const auto ctx = PrecisionContext::make(3, 20, 9);
  const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
  const auto ext = Extension::base(ctx);
  for (long n : {3L, 4L, 2L}) {
    const OrbitRecord r = orbit_analyze(mul(m, n), point(ExtScalar(ext)), 8);
    CHECK(r.status == OrbitRecord::Status::Periodic);
    CHECK(r.period == 1);
    CHECK(r.tail == 0);
  }
}

TEST_CASE("cyclotomic orbits") {
  for (unsigned p : {2u, 3u, 5u}) {
    const auto ctx = PrecisionContext::make(p, 24, static_cast<int>(p * p) + 3);
    const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
    const long pl = static_cast<long>(p);
    const auto level1 = Extension::cyclotomic(ctx, 1);
    const OrbitRecord fixed = orbit_analyze(mul(m, 1 + pl), point(ExtScalar::generator(level1)), 8);
    CHECK(fixed.status == OrbitRecord::Status::Periodic);
    CHECK(fixed.period == 1);
    CHECK(fixed.invertible);

    const auto level2 = Extension::cyclotomic(ctx, 2);
    const OrbitRecord escape = orbit_analyze(mul(m, pl), point(ExtScalar::generator(level2)), 8);
    CHECK(escape.status == OrbitRecord::Status::ValuationEscape);
    REQUIRE(escape.valuations.size() == 3);
    CHECK(escape.valuations[0] == Valuation(Rational(1, pl * (pl - 1))));
    CHECK(escape.valuations[1] == Valuation(Rational(1, pl - 1)));
    CHECK(escape.growth_checked);
    CHECK(escape.growth_violations.empty());
    CHECK(!escape.invertible);

    // zeta_{p^2}^{1+p} runs through a cycle of length p.
    const OrbitRecord cycle = orbit_analyze(mul(m, 1 + pl), point(ExtScalar::generator(level2)), 3 * pl);
    CHECK(cycle.status == OrbitRecord::Status::Periodic);
    CHECK(cycle.period == pl);
    CHECK(cycle.tail == 0);
  }
}

TEST_CASE("invertible orbits never show a tail") {
  const auto ctx = PrecisionContext::make(3, 24, 12);
  const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
  const auto ext = Extension::cyclotomic(ctx, 2);
  const std::vector<long> units{-1, 2, 4, 5, 7, 10};
  const TorsionLevelSet tors = torsion_probe_dim1(m, 2, ext);
  for (long a : units) {
    const TupleSeries u = mul(m, a);
    for (const TorsionRoot& root : tors.roots) {
      const OrbitRecord r = orbit_analyze(u, root.point, 12);
      CHECK(r.invertible);
      CHECK(r.status == OrbitRecord::Status::Periodic);
      CHECK(r.tail == 0);
    }
  }
}

TEST_CASE("roots of a noninvertible map collapse under a commuting map") {
  const auto ctx = PrecisionContext::make(2, 24, 16);
  const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
  const auto ext = Extension::cyclotomic(ctx, 3);
  const TorsionLevelSet roots_of_g = torsion_probe_dim1(m, 2, ext);
  REQUIRE(roots_of_g.roots.size() == 4);
  for (const TupleSeries& f : {mul(m, 2), mul(m, 6), mul(m, -2)}) {
    for (const TorsionRoot& root : roots_of_g.roots) {
      const OrbitRecord r = orbit_analyze(f, root.point, 6);
      const bool collapses = r.status == OrbitRecord::Status::ValuationEscape ||
                             (root.valuation.is_infinite() && r.status == OrbitRecord::Status::Periodic);
      CHECK(collapses);
      CHECK(r.growth_violations.empty());
    }
  }
}

TEST_CASE("fixed points of u are roots of f and u permutes the roots of f") {
  for (unsigned p : {2u, 3u}) {
    const auto ctx = PrecisionContext::make(p, 24, static_cast<int>(p * p) + 2);
    const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
    const long pl = static_cast<long>(p);
    const TupleSeries u = mul(m, 1 + pl);
    const TupleSeries f = mul(m, pl);
    const auto ext = Extension::cyclotomic(ctx, 1);
    const RootSearch fixed = positive_valuation_roots(u[0] - MultiSeries::variable(ctx, 1, 0), ext);
    CHECK(fixed.failures.empty());
    CHECK(fixed.roots.size() == p);
    for (const TorsionRoot& root : fixed.roots) {
      const OrbitRecord r = orbit_analyze(f, root.point, 4);
      const bool reaches_zero = r.status == OrbitRecord::Status::ValuationEscape || root.valuation.is_infinite();
      CHECK(reaches_zero);
    }
    const auto level2 = Extension::cyclotomic(ctx, 2);
    const TorsionLevelSet tors = torsion_probe_dim1(m, 2, level2);
    const auto perm = root_permutation(u, tors.roots);
    REQUIRE(perm.has_value());
    std::vector<std::size_t> sorted = *perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
  }
}

TEST_CASE("orbit input checks") {
  const auto ctx = PrecisionContext::make(3, 20, 6);
  const auto ext = Extension::base(ctx);
  const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
  try {
    (void)orbit_analyze(mul(m, 3), point(ExtScalar::from_integers(ext, {1})), 4);
    FAIL("expected DivergentPoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivergentPoint);
  }
  const OrbitRecord slow = orbit_analyze(mul(m, 1 + 3), point(ExtScalar::from_integers(ext, {3})), 2);
  CHECK(slow.status == OrbitRecord::Status::Inconclusive);
  CHECK(slow.budget == 2);
}
