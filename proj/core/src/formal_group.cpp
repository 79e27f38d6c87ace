#include "fgdyn/formal_group.hpp"

#include <numeric>

namespace fgdyn {

namespace {

void fail_if_nonzero(const TupleSeries& diff, const std::string& axiom) {
  if (auto w = diff.first_nonzero()) throw AxiomViolation(axiom, w->degree, w->to_string(diff.nvars()));
}

// The d coordinate functions of block b inside a series in nblocks*d variables.
TupleSeries block(const PrecisionContext& ctx, int d, int nblocks, int b) {
  return TupleSeries::identity(ctx, d).embed(d * nblocks, d * b);
}

TupleSeries solve_negation(const TupleSeries& law, int d) {
  const PrecisionContext& ctx = law.context();
  const TupleSeries x = TupleSeries::identity(ctx, d);
  TupleSeries iota = PadicScalar::from_integer(ctx, -1L) * x;
  for (int n = 2; n <= ctx.degree_cap; ++n) {
    const TupleSeries err = compose(law, TupleSeries::concat(x, iota), n).homogeneous_part(n);
    if (!err.is_zero()) iota = iota - err;
  }
  return iota;
}

}  // namespace

FormalGroupLaw fg_validate(const TupleSeries& candidate) {
  const PrecisionContext& ctx = candidate.context();
  const int d = candidate.size();
  if (candidate.nvars() != 2 * d) {
    throw Error(ErrorCode::InvalidArgument, "a d-dimensional law needs d components in 2d variables");
  }
  if (!candidate.has_zero_constant_term()) {
    throw Error(ErrorCode::NonzeroConstantTerm, "group law candidate has a constant term");
  }
  const TupleSeries x = block(ctx, d, 2, 0);
  const TupleSeries y = block(ctx, d, 2, 1);

  fail_if_nonzero(candidate.homogeneous_part(1) - (x + y), "F = X + Y mod degree 2");

  std::vector<int> x_vars(static_cast<std::size_t>(d));
  std::vector<int> y_vars(static_cast<std::size_t>(d));
  std::iota(x_vars.begin(), x_vars.end(), 0);
  std::iota(y_vars.begin(), y_vars.end(), d);
  TupleSeries at_y_zero = candidate;
  TupleSeries at_x_zero = candidate;
  for (int i = 0; i < d; ++i) {
    at_y_zero[i] = candidate[i].without_variables(y_vars);
    at_x_zero[i] = candidate[i].without_variables(x_vars);
  }
  fail_if_nonzero(at_y_zero - x, "unit: F(X, 0) = X");
  fail_if_nonzero(at_x_zero - y, "unit: F(0, Y) = Y");

  // F(F(X, Y), Z) against F(X, F(Y, Z)) in 3d variables.
  const TupleSeries xy = candidate.embed(3 * d, 0);
  const TupleSeries yz = candidate.embed(3 * d, d);
  const TupleSeries left = compose(candidate, TupleSeries::concat(xy, block(ctx, d, 3, 2)));
  const TupleSeries right = compose(candidate, TupleSeries::concat(block(ctx, d, 3, 0), yz));
  fail_if_nonzero(left - right, "associativity");

  const TupleSeries iota = solve_negation(candidate, d);
  const TupleSeries xd = TupleSeries::identity(ctx, d);
  fail_if_nonzero(compose(candidate, TupleSeries::concat(xd, iota)), "inverse: F(X, iota(X)) = 0");
  fail_if_nonzero(compose(candidate, TupleSeries::concat(iota, xd)), "inverse: F(iota(X), X) = 0");

  std::vector<int> swap(static_cast<std::size_t>(2 * d));
  for (int i = 0; i < d; ++i) {
    swap[static_cast<std::size_t>(i)] = d + i;
    swap[static_cast<std::size_t>(d + i)] = i;
  }
  const bool commutative = candidate.remap(2 * d, swap) == candidate;
  return FormalGroupLaw(candidate, iota, AxiomCertificate{ctx.degree_cap, commutative});
}

TupleSeries fg_negation(const FormalGroupLaw& group) { return group.negation(); }

TupleSeries fg_add(const FormalGroupLaw& group, const TupleSeries& a, const TupleSeries& b) {
  return compose(group.law(), TupleSeries::concat(a, b));
}

namespace {

TupleSeries multiply_by(const FormalGroupLaw& group, const mpz_class& n) {
  const PrecisionContext& ctx = group.context();
  const int d = group.dimension();
  if (n == 0) return TupleSeries(ctx, d, d);
  const mpz_class m = abs(n);
  const TupleSeries x = TupleSeries::identity(ctx, d);
  TupleSeries r = x;
  for (long bit = static_cast<long>(mpz_sizeinbase(m.get_mpz_t(), 2)) - 2; bit >= 0; --bit) {
    r = fg_add(group, r, r);
    if (mpz_tstbit(m.get_mpz_t(), static_cast<mp_bitcnt_t>(bit)) != 0) r = fg_add(group, r, x);
  }
  if (n < 0) r = compose(group.negation(), r);
  return r;
}

std::optional<int> certified_for(const FormalGroupLaw& group) {
  if (group.certificate().commutative) return group.certificate().degree;
  return std::nullopt;
}

}  // namespace

EndoSeries fg_multiplication_map(const FormalGroupLaw& group, const mpz_class& n) {
  return EndoSeries{multiply_by(group, n), std::make_shared<const FormalGroupLaw>(group), certified_for(group)};
}

EndoSeries fg_multiplication_map(const FormalGroupLaw& group, long n) { return fg_multiplication_map(group, mpz_class(n)); }

EndoSeries fg_multiplication_map(const FormalGroupLaw& group, const PadicScalar& a) {
  const PrecisionContext& ctx = group.context();
  require_same_context(ctx, a.context());
  if (!a.is_integral()) throw Error(ErrorCode::InvalidArgument, "[a]_F needs a in Z_p");
  if (a.is_exact()) {
    mpz_class n = a.is_zero() ? mpz_class(0) : a.unit() * power_of(ctx.p, a.raw_valuation());
    return fg_multiplication_map(group, n);
  }
  const int m = a.precision();
  const mpz_class r = a.to_integer(m);
  const TupleSeries low = multiply_by(group, r);
  const TupleSeries high = multiply_by(group, r + power_of(ctx.p, m));
  std::vector<MultiSeries> comps;
  for (int c = 0; c < low.size(); ++c) {
    const MultiSeries diff = low[c] - high[c];
    std::vector<Term> terms;
    auto agreement = [&](Exponent e) {
      const PadicScalar delta = diff.coeff(e);
      return delta.is_zero() ? delta.precision() : delta.raw_valuation();
    };
    for (const auto& t : low[c].terms()) {
      const int k = std::min(t.coeff.precision(), agreement(t.exp));
      if (k < 1) {
        throw Error(ErrorCode::StabilizationFailure,
                    "[a]_F does not stabilize at " + t.exp.to_string(low.nvars()) + "; raise N or lower D");
      }
      terms.push_back(Term{t.exp, t.coeff.with_precision(k)});
    }
    for (const auto& t : high[c].terms()) {
      if (!low[c].coeff(t.exp).is_zero()) continue;
      if (agreement(t.exp) < 1) {
        throw Error(ErrorCode::StabilizationFailure,
                    "[a]_F does not stabilize at " + t.exp.to_string(low.nvars()) + "; raise N or lower D");
      }
    }
    comps.push_back(MultiSeries::from_terms(ctx, low.nvars(), std::move(terms)));
  }
  return EndoSeries{TupleSeries(std::move(comps)), std::make_shared<const FormalGroupLaw>(group), certified_for(group)};
}

EndoSeries endo_verify(const FormalGroupLaw& group, const TupleSeries& f) {
  const int d = group.dimension();
  if (f.size() != d || f.nvars() != d) throw Error(ErrorCode::InvalidArgument, "endomorphism candidate must be d-in-d");
  if (!f.has_zero_constant_term()) throw Error(ErrorCode::NonzeroConstantTerm, "endomorphism candidate has a constant term");
  const TupleSeries lhs = compose(f, group.law());
  const TupleSeries rhs = compose(group.law(), TupleSeries::concat(f.embed(2 * d, 0), f.embed(2 * d, d)));
  if (auto w = (lhs - rhs).first_nonzero()) throw NotEndomorphism(w->degree, w->to_string(2 * d));
  return EndoSeries{f, std::make_shared<const FormalGroupLaw>(group), group.certificate().degree};
}

namespace {

std::optional<int> log_p(const mpz_class& w, std::uint32_t p) {
  mpz_class x = w;
  int k = 0;
  while (x > 1 && mpz_divisible_ui_p(x.get_mpz_t(), p) != 0) {
    x /= p;
    ++k;
  }
  if (x != 1) return std::nullopt;
  return k;
}

HeightReport finish_report(int h, int level, std::uint32_t p, const mpz_class& rank, const std::string& method) {
  HeightReport out;
  out.height = h;
  out.level = level;
  out.rank = rank;
  mpz_class count;
  mpz_ui_pow_ui(count.get_mpz_t(), p, static_cast<unsigned long>(h) * static_cast<unsigned long>(level));
  out.kernel_count = count;
  out.method = method;
  return out;
}

}  // namespace

HeightReport height_and_kernel_count(const FormalGroupLaw& group, int level, const TupleSeries* p_series) {
  const PrecisionContext& ctx = group.context();
  const int d = group.dimension();
  if (level < 1) throw Error(ErrorCode::InvalidArgument, "level must be positive");
  if (d > 2) throw Error(ErrorCode::Unsupported, "height is computed for dimension 1 and 2 only");
  const TupleSeries ps = p_series ? *p_series : fg_multiplication_map(group, static_cast<long>(ctx.p)).series;
  if (!(ps.min_valuation() >= 0)) throw Error(ErrorCode::InvalidArgument, "[p]_F is not integral");
  const TupleSeries reduced = ps.mod_p();
  if (reduced.is_zero()) {
    HeightReport out;
    out.level = level;
    out.method = "[p]_F = 0 mod p up to degree " + std::to_string(ctx.degree_cap);
    return out;
  }
  if (d == 1) {
    int w = -1;
    for (const auto& t : reduced[0].terms()) {
      if (w < 0 || t.exp.degree() < w) w = t.exp.degree();
    }
    const auto h = log_p(mpz_class(w), ctx.p);
    if (!h) throw Error(ErrorCode::Unsupported, "Weierstrass degree " + std::to_string(w) + " is not a power of p");
    return finish_report(*h, level, ctx.p, mpz_class(w), "weierstrass degree");
  }
  // d == 2: each component must be c * x_i^a with i distinct.
  int var[2] = {-1, -1};
  int power[2] = {0, 0};
  for (int c = 0; c < 2; ++c) {
    if (reduced[c].size() != 1) throw Error(ErrorCode::Unsupported, "[p]_F mod p is not a monomial pair");
    const Exponent e = reduced[c].terms().front().exp;
    for (int i = 0; i < 2; ++i) {
      if (e[i] == 0) continue;
      if (var[c] >= 0) throw Error(ErrorCode::Unsupported, "[p]_F mod p has a mixed monomial");
      var[c] = i;
      power[c] = e[i];
    }
  }
  if (var[0] == var[1]) throw Error(ErrorCode::Unsupported, "[p]_F mod p powers share a variable");
  const mpz_class rank = mpz_class(power[0]) * power[1];
  const auto h = log_p(rank, ctx.p);
  if (!h) throw Error(ErrorCode::Unsupported, "monomial basis rank is not a power of p");
  return finish_report(*h, level, ctx.p, rank, "monomial basis count");
}

}  // namespace fgdyn
