#include "fgdyn/copolygon.hpp"

namespace fgdyn {

Copolygon Copolygon::build(const MultiSeries& f) {
  if (f.nvars() != 2) throw Error(ErrorCode::InvalidArgument, "copolygons are defined for two variables");
  if (f.is_zero()) throw Error(ErrorCode::InvalidArgument, "the zero series has no copolygon");
  Copolygon out;
  for (const auto& t : f.terms()) out.planes_.push_back(Plane{t.exp[0], t.exp[1], t.coeff.raw_valuation()});
  return out;
}

Copolygon::Value Copolygon::evaluate(const Valuation& xi1, const Valuation& xi2) const {
  Value out{Valuation::infinity(), {}};
  for (std::size_t k = 0; k < planes_.size(); ++k) {
    const Plane& pl = planes_[k];
    Valuation v(static_cast<std::int64_t>(pl.c));
    if (pl.i > 0) v = v + pl.i * xi1;
    if (pl.j > 0) v = v + pl.j * xi2;
    if (v < out.value) {
      out.value = v;
      out.achieving.clear();
    }
    if (v == out.value) out.achieving.push_back(k);
  }
  return out;
}

Copolygon::Value copolygon_build_eval(const MultiSeries& f, const Rational& xi1, const Rational& xi2) {
  if (xi1 < 0 || xi2 < 0) throw Error(ErrorCode::InvalidArgument, "copolygon arguments must be nonnegative");
  return Copolygon::build(f).evaluate(Valuation(xi1), Valuation(xi2));
}

BoundCheck valuation_bound_check(const MultiSeries& f, const PointTuple& theta) {
  if (theta.size() != 2) throw Error(ErrorCode::InvalidArgument, "bound check needs a point in two coordinates");
  const Copolygon poly = Copolygon::build(f);
  const EvalResult r = ms_eval(f, theta, EvalMode::Polynomial);
  BoundCheck out;
  out.bound = poly.evaluate(theta[0].valuation(), theta[1].valuation()).value;
  out.certified = r.certified;
  if (r.value.is_zero()) {
    try {
      out.value_valuation = r.value.valuation();
    } catch (const Error& err) {
      if (err.code() != ErrorCode::ImpreciseValuation) throw;
      out.value_valuation = Valuation(r.certified);
      out.value_certified = false;
    }
  } else {
    out.value_valuation = r.value.valuation();
  }
  out.holds = out.value_valuation >= out.bound;
  out.strict = out.value_valuation > out.bound;
  if (!out.value_certified && !out.holds) {
    throw Error(ErrorCode::PrecisionExhausted, "f(theta) vanishes at precision " + fgdyn::to_string(r.certified) +
                                                   " below the copolygon value " + out.bound.to_string());
  }
  return out;
}

}  // namespace fgdyn
