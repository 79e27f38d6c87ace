#include <doctest.h>

#include "fgdyn/extension.hpp"

using namespace fgdyn;

TEST_CASE("tuple valuation is the minimum over coordinates") {
  const auto ctx = PrecisionContext::make(5, 8, 4);
  const auto base = Extension::base(ctx);
  const PointTuple pt(std::vector<ExtScalar>{ExtScalar::from_integers(base, {25}), ExtScalar::from_integers(base, {5})});
  CHECK(pt.valuation() == Valuation(1));
}

TEST_CASE("uniformizer of the cyclotomic extension") {
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    const auto ctx = PrecisionContext::make(p, 10, 4);
    const auto ext = Extension::cyclotomic(ctx, 1);
    CHECK(ext->ramification_index() == static_cast<int>(p - 1));
    const ExtScalar pi = ExtScalar::generator(ext);
    CHECK(pi.valuation() == Valuation(Rational(1, p - 1)));
    // (1 + pi)^p = 1
    const ExtScalar one = ExtScalar::from_integers(ext, {1});
    CHECK((one + pi).pow(p) == one);
    const auto ext2 = Extension::cyclotomic(ctx, 2);
    CHECK(ExtScalar::generator(ext2).valuation() == Valuation(Rational(1, p * (p - 1))));
  }
}

TEST_CASE("modulus t - 1 embeds the base field") {
  const auto ctx = PrecisionContext::make(3, 8, 4);
  const auto ext = Extension::create(ctx, std::vector<long>{-1, 1}, ModulusKind::Unramified);
  CHECK(ExtScalar::from_integers(ext, {1}).valuation() == Valuation(0));
  CHECK(ExtScalar::generator(ext) == ExtScalar::from_integers(ext, {1}));
}

TEST_CASE("moduli failing their tag are rejected") {
  const auto ctx = PrecisionContext::make(3, 8, 4);
  for (const std::vector<long>& bad : {std::vector<long>{1, 0, 1}, std::vector<long>{9, 0, 1}, std::vector<long>{3, 1, 1}}) {
    try {
      (void)Extension::create(ctx, bad, ModulusKind::Eisenstein);
      FAIL("expected BadModulus");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BadModulus);
    }
  }
  try {
    (void)Extension::create(ctx, std::vector<long>{1, 0, 1, 0, 1}, ModulusKind::Unramified);
    FAIL("expected BadModulus for a reducible residue polynomial");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadModulus);
  }
  CHECK_NOTHROW(Extension::create(ctx, std::vector<long>{1, 0, 1}, ModulusKind::Unramified));
}

TEST_CASE("unramified arithmetic round trips") {
  const auto ctx = PrecisionContext::make(2, 12, 4);
  const auto ext = Extension::create(ctx, std::vector<long>{1, 1, 1}, ModulusKind::Unramified);
  const ExtScalar t = ExtScalar::generator(ext);
  const ExtScalar one = ExtScalar::from_integers(ext, {1});
  CHECK(t * t + t + one == ExtScalar(ext));
  CHECK(t.pow(3) == one);
  const ExtScalar a = ExtScalar::from_integers(ext, {3, 5});
  const ExtScalar b = ExtScalar::from_integers(ext, {1, 2});
  CHECK((a / b) * b == a);
  CHECK((a * b).valuation() == a.valuation() + b.valuation());
  CHECK(ExtScalar::from_integers(ext, {4, 8}).valuation() == Valuation(2));
}
