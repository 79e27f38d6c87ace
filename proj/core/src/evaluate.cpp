#include "fgdyn/evaluate.hpp"

#include <algorithm>

namespace fgdyn {

namespace {

class PowerCache {
 public:
  PowerCache(const PointTuple& theta, int degree) {
    const ExtScalar one = ExtScalar::from_scalar(theta.extension(), PadicScalar::from_integer(theta[0].context(), 1L));
    for (const auto& x : theta.coords()) {
      std::vector<ExtScalar> row{one};
      row.reserve(static_cast<std::size_t>(degree) + 1);
      for (int e = 1; e <= degree; ++e) row.push_back(row.back() * x);
      powers_.push_back(std::move(row));
    }
  }

  ExtScalar monomial(Exponent e, int nvars, const ExtScalar& one) const {
    ExtScalar out = one;
    bool first = true;
    for (int i = 0; i < nvars; ++i) {
      const int k = e[i];
      if (k == 0) continue;
      if (first) {
        out = powers_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        first = false;
      } else {
        out = out * powers_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      }
    }
    return out;
  }

 private:
  std::vector<std::vector<ExtScalar>> powers_;
};

Valuation tail_for(const PointTuple& theta, int degree_cap, EvalMode mode) {
  Rational lowest = theta.valuation_lower_bound();
  if (theta.is_zero()) {
    try {
      if (theta.valuation().is_infinite()) return Valuation::infinity();
    } catch (const Error&) {
    }
  }
  if (lowest <= 0) throw Error(ErrorCode::DivergentPoint, "point has a coordinate of valuation <= 0");
  if (mode == EvalMode::Polynomial) return Valuation::infinity();
  return Valuation(lowest * (degree_cap + 1));
}

// Contribution of absent coefficients known only modulo p^floor.
Valuation floor_tail(const MultiSeries& f, const PointTuple& theta, Valuation tail) {
  if (!f.has_absent_floor()) return tail;
  const Rational lowest = theta.valuation_lower_bound();
  for (int n = 0; n <= f.context().degree_cap; ++n) {
    const int k = f.absent_precision(n);
    if (k == INT32_MAX) continue;
    tail = min(tail, Valuation(Rational(k) + lowest * n));
  }
  return tail;
}

ExtScalar evaluate(const MultiSeries& f, const PowerCache& cache, const ExtScalar& one) {
  ExtScalar acc(one.extension());
  for (const auto& t : f.terms()) acc += t.coeff * cache.monomial(t.exp, f.nvars(), one);
  return acc;
}

Rational certify(const Rational& value_precision, const Valuation& tail) {
  if (tail.is_infinite()) return value_precision;
  return std::min(value_precision, tail.value());
}

}  // namespace

EvalResult ms_eval(const MultiSeries& f, const PointTuple& theta, EvalMode mode) {
  if (theta.size() != f.nvars()) throw Error(ErrorCode::InvalidArgument, "point dimension does not match the series");
  const Valuation tail = floor_tail(f, theta, tail_for(theta, f.context().degree_cap, mode));
  const ExtScalar one = ExtScalar::from_scalar(theta.extension(), PadicScalar::from_integer(f.context(), 1L));
  const PowerCache cache(theta, std::max(0, f.max_degree()));
  ExtScalar value = evaluate(f, cache, one);
  const Rational certified = certify(value.precision(), tail);
  if (certified < value.precision()) value = value.with_precision(certified);
  return EvalResult{value, tail, certified};
}

TupleEvalResult ms_eval(const TupleSeries& f, const PointTuple& theta, EvalMode mode) {
  if (theta.size() != f.nvars()) throw Error(ErrorCode::InvalidArgument, "point dimension does not match the series");
  Valuation tail = tail_for(theta, f.context().degree_cap, mode);
  for (const auto& c : f.components()) tail = floor_tail(c, theta, tail);
  const ExtScalar one = ExtScalar::from_scalar(theta.extension(), PadicScalar::from_integer(f.context(), 1L));
  int degree = 0;
  for (const auto& c : f.components()) degree = std::max(degree, c.max_degree());
  const PowerCache cache(theta, degree);
  std::vector<ExtScalar> coords;
  Rational certified = Rational(f.context().precision + 1);
  for (const auto& c : f.components()) {
    coords.push_back(evaluate(c, cache, one));
    certified = std::min(certified, certify(coords.back().precision(), tail));
  }
  for (auto& c : coords) {
    if (certified < c.precision()) c = c.with_precision(certified);
  }
  return TupleEvalResult{PointTuple(std::move(coords)), tail, certified};
}

}  // namespace fgdyn
