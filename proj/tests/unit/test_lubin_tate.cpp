#include <doctest.h>

#include "fgdyn/lubin_tate.hpp"
#include "oracle.hpp"

using namespace fgdyn;

namespace {

mpz_class pow_p(unsigned p, int e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(e));
  return r;
}

}  // namespace

TEST_CASE("parameter validation") {
  LubinTate2Params bad;
  bad.h1 = 2;
  bad.h2 = 2;
  CHECK_THROWS_AS(bad.validate(), Error);
  LubinTate2Params low;
  low.p = 3;
  low.degree = 2;
  CHECK_THROWS_AS(low.validate(), Error);
  LubinTate2Params composite;
  composite.p = 6;
  CHECK_THROWS_AS(composite.validate(), Error);
  CHECK_NOTHROW(LubinTate2Params{}.validate());
}

TEST_CASE("logarithm leading coefficients") {
  for (unsigned p : {2u, 3u}) {
    for (auto [h1, h2] : {std::pair{1, 1}, std::pair{1, 2}}) {
      const int cap = static_cast<int>(pow_p(p, h1 + h2).get_si());
      const auto ctx = PrecisionContext::make(p, 30, cap);
      const TupleSeries l = lt2_logarithm(ctx, h1, h2);
      const int q1 = static_cast<int>(pow_p(p, h1).get_si());
      CHECK(l[0].coeff(Exponent::variable(1, q1)) == PadicScalar::from_rational(ctx, 1, p));
      CHECK(l[0].coeff(Exponent::variable(0, cap)) == PadicScalar::from_rational(ctx, 1, p * p));
      CHECK(l[0].coeff(Exponent::variable(1, q1)).is_exact());
      CHECK(oracle::agrees(l, oracle::lt2_logarithm(p, h1, h2, cap)));
    }
  }
}

TEST_CASE("two-dimensional Lubin-Tate laws") {
  struct Case {
    unsigned p;
    int h1;
    int h2;
    int degree;
  };
  for (const Case c : {Case{2, 1, 1, 4}, Case{2, 1, 2, 8}, Case{3, 1, 1, 9}}) {
    LubinTate2Params params;
    params.p = c.p;
    params.h1 = c.h1;
    params.h2 = c.h2;
    params.degree = c.degree;
    const LubinTate2 lt = lt2_build(params);
    const PrecisionContext& ctx = lt.group.context();
    CHECK(lt.congruences.linear_ok);
    CHECK(lt.congruences.frobenius_ok);
    CHECK(lt.group.certificate().degree == c.degree);
    CHECK(lt.group.certificate().commutative);
    CHECK(lt.p_series.certified_degree == c.degree);

    // L(F(X, Y)) = L(X) + L(Y).
    const TupleSeries lx = lt.logarithm.embed(4, 0);
    const TupleSeries ly = lt.logarithm.embed(4, 2);
    CHECK(compose(lt.logarithm, lt.group.law()) == lx + ly);

    // [p]_F from the rational oracle: L^{-1}(p L(X)).
    const auto lq = oracle::lt2_logarithm(c.p, c.h1, c.h2, c.degree);
    const auto linv = oracle::inverse(lq);
    std::vector<oracle::QSeries> pl;
    for (const auto& s : lq) pl.push_back(mpq_class(c.p) * s);
    CHECK(oracle::agrees(lt.p_series.series, oracle::compose(linv, pl)));

    const HeightReport h = height_and_kernel_count(lt.group, 1, &lt.p_series.series);
    REQUIRE(h.height.has_value());
    CHECK(*h.height == c.h1 + c.h2);
    CHECK(*h.kernel_count == pow_p(c.p, c.h1 + c.h2));
    (void)ctx;
  }
}

TEST_CASE("insufficient explicit precision is reported") {
  LubinTate2Params params;
  params.p = 2;
  params.degree = 8;
  params.precision = 2;
  try {
    (void)lt2_build(params);
    FAIL("expected PrecisionExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PrecisionExhausted);
  }
}
