#include "fgdyn/fixtures.hpp"

#include <charconv>

#include "fgdyn/lubin_tate.hpp"

namespace fgdyn {

namespace {

MultiSeries var(const PrecisionContext& ctx, int n, int i) { return MultiSeries::variable(ctx, n, i); }

PadicScalar integer(const PrecisionContext& ctx, long n) { return PadicScalar::from_integer(ctx, n); }

PadicScalar inverse_power(const PrecisionContext& ctx, int k) { return integer(ctx, 1).shifted(-k); }

unsigned pow_capped(std::uint32_t p, int e, int cap) {
  unsigned out = 1;
  for (int i = 0; i < e && out <= static_cast<unsigned>(cap); ++i) out *= p;
  return out;
}

// x^e when e <= D, else zero.
MultiSeries power_or_zero(const PrecisionContext& ctx, int n, int i, unsigned e) {
  if (e > static_cast<unsigned>(ctx.degree_cap)) return MultiSeries(ctx, n);
  return MultiSeries::monomial(ctx, n, Exponent::variable(i, static_cast<int>(e)), integer(ctx, 1));
}

std::pair<int, int> parse_heights(const std::string& name, std::size_t at) {
  int h1 = 0;
  int h2 = 0;
  const char* s = name.data() + at;
  const char* end = name.data() + name.size();
  auto r1 = std::from_chars(s, end, h1);
  if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != ',') {
    throw Error(ErrorCode::InvalidArgument, "expected " + name.substr(0, at) + "<h1>,<h2>");
  }
  auto r2 = std::from_chars(r1.ptr + 1, end, h2);
  if (r2.ec != std::errc() || r2.ptr != end) throw Error(ErrorCode::InvalidArgument, "expected " + name.substr(0, at) + "<h1>,<h2>");
  return {h1, h2};
}

}  // namespace

TupleSeries multiplicative_law(const PrecisionContext& ctx) {
  const MultiSeries x = var(ctx, 2, 0);
  const MultiSeries y = var(ctx, 2, 1);
  return TupleSeries(std::vector<MultiSeries>{x + y + x * y});
}

TupleSeries additive_law(const PrecisionContext& ctx, int d) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  std::vector<MultiSeries> comps;
  for (int i = 0; i < d; ++i) comps.push_back(var(ctx, 2 * d, i) + var(ctx, 2 * d, d + i));
  return TupleSeries(std::move(comps));
}

TupleSeries twisted_multiplicative_law(const PrecisionContext& ctx) {
  const MultiSeries x = var(ctx, 1, 0);
  const TupleSeries phi(std::vector<MultiSeries>{x + integer(ctx, static_cast<long>(ctx.p)) * x * x});
  const TupleSeries inv = compositional_inverse(phi);
  const TupleSeries inner = TupleSeries::concat(inv.embed(2, 0), inv.embed(2, 1));
  return compose(phi, compose(multiplicative_law(ctx), inner));
}

TupleSeries teichmuller_diagonal(const PrecisionContext& ctx, std::uint32_t r) {
  const PadicScalar g = teichmuller(r, ctx);
  const unsigned long p3 = static_cast<unsigned long>(ctx.p) * ctx.p * ctx.p;
  return TupleSeries(std::vector<MultiSeries>{g * var(ctx, 2, 0), g.pow(p3) * var(ctx, 2, 1)});
}

TupleSeries alternating_companion(const PrecisionContext& ctx) {
  const unsigned p1 = pow_capped(ctx.p, 1, ctx.degree_cap);
  const unsigned p2 = pow_capped(ctx.p, 2, ctx.degree_cap);
  const PadicScalar inv_p = inverse_power(ctx, 1);
  const PadicScalar inv_p2 = inverse_power(ctx, 2);
  MultiSeries h1 = var(ctx, 2, 0) + inv_p * power_or_zero(ctx, 2, 1, p1) + inv_p2 * power_or_zero(ctx, 2, 0, p2);
  MultiSeries h2 = var(ctx, 2, 1) + inv_p * power_or_zero(ctx, 2, 0, p1) + inv_p2 * power_or_zero(ctx, 2, 1, p2);
  return TupleSeries(std::vector<MultiSeries>{std::move(h1), std::move(h2)});
}

std::vector<std::string> fixture_names() {
  return {"M", "A", "A2", "M-twisted", "pM", "gamma", "gamma-companion", "lt2:<h1>,<h2>", "lt2-p:<h1>,<h2>"};
}

SeriesDocument named_fixture(const PrecisionContext& ctx, const std::string& name) {
  if (name == "M") return make_document(multiplicative_law(ctx), DocumentKind::GroupLaw);
  if (name == "A") return make_document(additive_law(ctx, 1), DocumentKind::GroupLaw);
  if (name == "A2") return make_document(additive_law(ctx, 2), DocumentKind::GroupLaw);
  if (name == "M-twisted") return make_document(twisted_multiplicative_law(ctx), DocumentKind::GroupLaw);
  if (name == "pM") {
    const FormalGroupLaw m = fg_validate(multiplicative_law(ctx));
    return make_document(fg_multiplication_map(m, static_cast<long>(ctx.p)).series, DocumentKind::Endo);
  }
  if (name == "gamma") return make_document(teichmuller_diagonal(ctx, 2 % ctx.p), DocumentKind::Endo);
  if (name == "gamma-companion") return make_document(alternating_companion(ctx), DocumentKind::Endo);
  for (const std::string prefix : {"lt2:", "lt2-p:"}) {
    if (name.rfind(prefix, 0) != 0) continue;
    const auto [h1, h2] = parse_heights(name, prefix.size());
    LubinTate2Params params;
    params.p = ctx.p;
    params.h1 = h1;
    params.h2 = h2;
    params.degree = ctx.degree_cap;
    params.precision = ctx.precision;
    const LubinTate2 lt = lt2_build(params);
    if (prefix == "lt2:") return make_document(lt.group.law(), DocumentKind::GroupLaw);
    return make_document(lt.p_series.series, DocumentKind::Endo);
  }
  std::string known;
  for (const auto& n : fixture_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + name + "' (known: " + known + ")");
}

}  // namespace fgdyn
