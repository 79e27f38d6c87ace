#include "fgdyn/lubin_tate.hpp"

#include <numeric>

namespace fgdyn {

namespace {

long ipow(long base, int e) {
  long out = 1;
  for (int i = 0; i < e; ++i) {
    out *= base;
    if (out > 1L << 20) return out;
  }
  return out;
}

}  // namespace

void LubinTate2Params::validate() const {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, "p must be prime");
  if (h1 < 1 || h2 < 1) throw Error(ErrorCode::InvalidArgument, "h1 and h2 must be positive");
  if (std::gcd(h1, h2) != 1) throw Error(ErrorCode::InvalidArgument, "gcd(h1, h2) must be 1");
  if (degree > 255) throw Error(ErrorCode::InvalidArgument, "D must be at most 255");
  if (ipow(p, std::min(h1, h2)) > degree) {
    throw Error(ErrorCode::InvalidArgument, "D must be at least p^min(h1, h2) to expose a logarithm term");
  }
  if (precision < 0) throw Error(ErrorCode::InvalidArgument, "precision must be positive");
}

int LubinTate2Params::default_precision() const {
  const PrecisionContext ctx = PrecisionContext::make(p, 1, std::max(degree, 2));
  int depth = 0;
  lt2_logarithm(ctx, h1, h2, &depth);
  return 4 * depth + 8;
}

TupleSeries lt2_logarithm(const PrecisionContext& ctx, int h1, int h2, int* depth) {
  const int q1 = static_cast<int>(std::min<long>(ipow(ctx.p, h1), ctx.degree_cap + 1L));
  const int q2 = static_cast<int>(std::min<long>(ipow(ctx.p, h2), ctx.degree_cap + 1L));
  const PadicScalar inv_p = PadicScalar::from_rational(ctx, 1, ctx.p);
  const MultiSeries x1 = MultiSeries::variable(ctx, 2, 0);
  const MultiSeries x2 = MultiSeries::variable(ctx, 2, 1);
  MultiSeries l1 = x1;
  MultiSeries l2 = x2;
  int steps = 0;
  for (;;) {
    MultiSeries n1 = x1 + inv_p * l2.frobenius(q1);
    MultiSeries n2 = x2 + inv_p * l1.frobenius(q2);
    const bool settled = n1.identical(l1) && n2.identical(l2);
    l1 = std::move(n1);
    l2 = std::move(n2);
    if (settled) break;
    ++steps;
  }
  if (depth) *depth = -std::min(l1.min_valuation(), l2.min_valuation());
  (void)steps;
  return TupleSeries(std::vector<MultiSeries>{l1, l2});
}

namespace {

LubinTate2 build_at(const LubinTate2Params& params, int n) {
  const PrecisionContext ctx = PrecisionContext::make(params.p, n, params.degree);
  int depth = 0;
  const TupleSeries log = lt2_logarithm(ctx, params.h1, params.h2, &depth);
  if (n <= 2 * depth) {
    throw Error(ErrorCode::PrecisionExhausted, "N = " + std::to_string(n) + " cannot absorb the 1/p^" +
                                                   std::to_string(depth) + " denominators; need N > " +
                                                   std::to_string(2 * depth));
  }
  TupleSeries group_law(ctx, 4, 2);
  TupleSeries p_series(ctx, 2, 2);
  try {
    const TupleSeries reduced = log.with_precision(n);
    const TupleSeries inv = compositional_inverse(reduced);
    const TupleSeries sum = reduced.embed(4, 0) + reduced.embed(4, 2);
    group_law = compose(inv, sum);
    p_series = compose(inv, PadicScalar::from_integer(ctx, static_cast<long>(params.p)) * reduced);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::PrecisionExhausted) throw;
    throw Error(ErrorCode::PrecisionExhausted, std::string("logarithm inversion ran out of precision: ") + err.what());
  }
  for (const TupleSeries* s : {&group_law, &p_series}) {
    if (s->min_valuation() < 0 || s->min_precision() < 1) {
      throw Error(ErrorCode::PrecisionExhausted,
                  "integrality of F and [p]_F is not certified at N = " + std::to_string(n));
    }
  }
  FormalGroupLaw group = fg_validate(group_law);
  EndoSeries endo = endo_verify(group, p_series);

  CongruenceReport report;
  const PadicMatrix j0 = jacobian_at_zero(p_series);
  report.linear_ok = j0 == PadicMatrix::scalar(ctx, 2, PadicScalar::from_integer(ctx, static_cast<long>(params.p))) &&
                     p_series.homogeneous_part(1) == TupleSeries::linear(j0);
  const long q1 = ipow(params.p, params.h1);
  const long q2 = ipow(params.p, params.h2);
  if (q1 <= params.degree) report.expected[0] = Exponent::variable(1, static_cast<int>(q1));
  if (q2 <= params.degree) report.expected[1] = Exponent::variable(0, static_cast<int>(q2));
  const TupleSeries residues = p_series.mod_p();
  report.frobenius_ok = true;
  for (int c = 0; c < 2; ++c) {
    MultiSeries expected(ctx, 2);
    if (report.expected[c]) {
      expected = MultiSeries::monomial(ctx, 2, *report.expected[c], PadicScalar::from_integer(ctx, 1L));
    }
    if (!residues[c].identical(expected)) {
      report.frobenius_ok = false;
      report.detail += "component " + std::to_string(c + 1) + " mod p is " + residues[c].to_string() + "; ";
    }
  }
  if (report.detail.empty()) report.detail = "both congruences hold";
  return LubinTate2{log, std::move(group), std::move(endo), report, depth, n};
}

constexpr int kPrecisionRetries = 3;

}  // namespace

LubinTate2 lt2_build(const LubinTate2Params& params) {
  params.validate();
  if (params.precision > 0) return build_at(params, params.precision);
  int n = params.default_precision();
  for (int attempt = 0;; ++attempt, n *= 2) {
    try {
      return build_at(params, n);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::PrecisionExhausted || attempt == kPrecisionRetries) throw;
    }
  }
}

}  // namespace fgdyn
