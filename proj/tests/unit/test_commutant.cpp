#include <doctest.h>

#include "fgdyn/commutant.hpp"
#include "fgdyn/fixtures.hpp"
#include "oracle.hpp"

using namespace fgdyn;

namespace {

PadicScalar integer(const PrecisionContext& ctx, long n) { return PadicScalar::from_integer(ctx, n); }

PadicMatrix scalar(const PrecisionContext& ctx, std::size_t d, long n) { return PadicMatrix::scalar(ctx, d, integer(ctx, n)); }

TupleSeries p_series_of_m(const PrecisionContext& ctx) {
  return fg_multiplication_map(fg_validate(multiplicative_law(ctx)), static_cast<long>(ctx.p)).series;
}

}  // namespace

TEST_CASE("stability verdicts") {
  const auto ctx = PrecisionContext::make(5, 20, 8);
  const MultiSeries x = MultiSeries::variable(ctx, 2, 0);
  const MultiSeries y = MultiSeries::variable(ctx, 2, 1);
  CHECK(stability_classify(TupleSeries::linear(scalar(ctx, 2, 5))).stable());
  const StabilityVerdict zero = stability_classify(TupleSeries(std::vector<MultiSeries>{x * y, x * x}));
  CHECK(zero.reason == StabilityVerdict::Reason::ZeroJacobian);
  const StabilityVerdict gamma = stability_classify(teichmuller_diagonal(ctx, 2));
  CHECK(gamma.reason == StabilityVerdict::Reason::RootOfUnity);
  CHECK(gamma.order == 4);
  const StabilityVerdict id = stability_classify(TupleSeries::identity(ctx, 2));
  CHECK(id.reason == StabilityVerdict::Reason::RootOfUnity);
  CHECK(id.order == 1);
  const StabilityVerdict mixed = stability_classify(TupleSeries(std::vector<MultiSeries>{integer(ctx, 5) * x, y}));
  CHECK(mixed.reason == StabilityVerdict::Reason::SingularDifference);
  CHECK(mixed.degree == 1);
}

TEST_CASE("reconstruction of multiplication maps") {
  for (unsigned p : {2u, 3u, 5u}) {
    const auto ctx = PrecisionContext::make(p, 30, 10);
    const TupleSeries u = p_series_of_m(ctx);
    const ReconstructionTrace id = commutant_reconstruct(u, PadicMatrix::identity(ctx, 1));
    CHECK(id.result.identical(TupleSeries::identity(ctx, 1)));
    CHECK(id.inverted_degrees.empty());
    for (long a : {2L, 3L, static_cast<long>(1 + p)}) {
      const ReconstructionTrace t = commutant_reconstruct(u, scalar(ctx, 1, a));
      CHECK(oracle::agrees(t.result[0], oracle::multiplicative_power(a, 10)));
      const ReconstructionTrace again = commutant_reconstruct(u, scalar(ctx, 1, a));
      CHECK(t.result.identical(again.result));
      REQUIRE(t.steps.size() == 9);
      CHECK(t.steps.front().degree == 2);
    }
  }
}

TEST_CASE("group laws from Jacobian blocks") {
  const auto ctx = PrecisionContext::make(3, 30, 10);
  const PadicMatrix one = PadicMatrix::identity(ctx, 1);
  const MultiSeries x = MultiSeries::variable(ctx, 1, 0);
  const ReconstructionTrace additive = group_from_jacobian(TupleSeries(std::vector<MultiSeries>{integer(ctx, 3) * x}), one, one);
  CHECK(additive.result.identical(additive_law(ctx)));
  const ReconstructionTrace mult = group_from_jacobian(p_series_of_m(ctx), one, one);
  CHECK(mult.result == multiplicative_law(ctx));
  CHECK(mult.result.min_precision() >= 30 - mult.budget);
}

TEST_CASE("root-of-unity Jacobian blocks the recursion") {
  const auto ctx = PrecisionContext::make(5, 20, 8);
  const TupleSeries u = teichmuller_diagonal(ctx, 2);
  try {
    (void)commutant_reconstruct(u, PadicMatrix::identity(ctx, 2));
    FAIL("expected SingularStep");
  } catch (const SingularStep& e) {
    CHECK(e.degree() == 5);
  }
  const auto small = PrecisionContext::make(5, 20, 4);
  CHECK(commutant_reconstruct(teichmuller_diagonal(small, 2), PadicMatrix::identity(small, 2)).result.identical(TupleSeries::identity(small, 2)));
}

TEST_CASE("invalid targets and budgets") {
  const auto ctx = PrecisionContext::make(3, 20, 6);
  const MultiSeries x = MultiSeries::variable(ctx, 2, 0);
  const MultiSeries y = MultiSeries::variable(ctx, 2, 1);
  const TupleSeries u(std::vector<MultiSeries>{integer(ctx, 3) * x, integer(ctx, 9) * y + x * x});
  try {
    (void)commutant_reconstruct(u, PadicMatrix::from_integers(ctx, {{0, 1}, {1, 0}}));
    FAIL("expected NonCommutingTarget");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonCommutingTarget);
  }
  const auto tight = PrecisionContext::make(3, 4, 8);
  try {
    (void)commutant_reconstruct(p_series_of_m(tight), scalar(tight, 1, 2));
    FAIL("expected PrecisionExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PrecisionExhausted);
  }
}

TEST_CASE("non-diagonal Jacobian uses the general operator") {
  const auto ctx = PrecisionContext::make(3, 40, 5);
  const MultiSeries x = MultiSeries::variable(ctx, 2, 0);
  const MultiSeries y = MultiSeries::variable(ctx, 2, 1);
  const TupleSeries u(std::vector<MultiSeries>{integer(ctx, 3) * x + integer(ctx, 3) * y + x * y, integer(ctx, 3) * y + x * x});
  REQUIRE(stability_classify(u).stable());
  const ReconstructionTrace t = commutant_reconstruct(u, PadicMatrix::identity(ctx, 2));
  CHECK(t.result.identical(TupleSeries::identity(ctx, 2)));
  const ReconstructionTrace self = commutant_reconstruct(u, jacobian_at_zero(u));
  CHECK(self.result == u);
}

TEST_CASE("equality engine") {
  const auto ctx = PrecisionContext::make(3, 30, 9);
  const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
  const TupleSeries u = p_series_of_m(ctx);
  const EqualityVerdict same = group_equality(m, fg_validate(multiplicative_law(ctx)), u);
  CHECK(same.outcome == EqualityVerdict::Outcome::Equal);
  REQUIRE(same.reconstruction.has_value());
  CHECK(*same.reconstruction == m.law());
  const EqualityVerdict twisted = group_equality(m, fg_validate(twisted_multiplicative_law(ctx)), u);
  CHECK(twisted.outcome == EqualityVerdict::Outcome::Different);
  CHECK(twisted.reason.find("not an endomorphism") != std::string::npos);
}
