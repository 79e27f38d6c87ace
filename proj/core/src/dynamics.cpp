#include "fgdyn/dynamics.hpp"

#include "fgdyn/commutant.hpp"

namespace fgdyn {

std::string OrbitRecord::status_string() const {
  switch (status) {
    case Status::Periodic:
      return "periodic (period " + std::to_string(period) + ")";
    case Status::Preperiodic:
      return "preperiodic (tail " + std::to_string(tail) + ", period " + std::to_string(period) + ")";
    case Status::ValuationEscape:
      return "valuation escape (zero modulo valuation " + fgdyn::to_string(escape_precision) + ")";
    case Status::Inconclusive:
      return "inconclusive after " + std::to_string(budget) + " steps";
  }
  return "unknown";
}

namespace {

Valuation certified_valuation(const PointTuple& x) {
  try {
    return x.valuation();
  } catch (const Error& err) {
    if (err.code() != ErrorCode::ImpreciseValuation) throw;
    throw Error(ErrorCode::PrecisionExhausted, "iterate " + x.to_string() + " has no certified valuation");
  }
}

bool is_invertible(const PadicMatrix& j) {
  if (!j.is_integral()) return false;
  const Elimination el = eliminate(j);
  return !el.singular && el.determinant_valuation == Valuation(0);
}

}  // namespace

OrbitRecord orbit_analyze(const TupleSeries& map, const PointTuple& theta0, int budget, EvalMode mode) {
  if (map.size() != map.nvars() || map.nvars() != theta0.size()) {
    throw Error(ErrorCode::InvalidArgument, "orbit needs a d-in-d map and a point with d coordinates");
  }
  if (!map.has_zero_constant_term()) throw Error(ErrorCode::NonzeroConstantTerm, "map(0) != 0");
  if (budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be positive");
  OrbitRecord out;
  out.budget = budget;
  out.invertible = is_invertible(jacobian_at_zero(map));
  out.growth_checked = !out.invertible && stability_classify(map).stable();
  out.iterates.push_back(theta0);
  if (theta0.is_zero()) {
    out.valuations.push_back(Valuation(theta0.precision()));
    out.status = OrbitRecord::Status::Periodic;
    out.period = 1;
    return out;
  }
  out.valuations.push_back(certified_valuation(theta0));
  for (int k = 0; k < budget; ++k) {
    const PointTuple next = ms_eval(map, out.iterates.back(), mode).value;
    if (next.is_zero()) {
      const Rational at = next.precision();
      if (!(Valuation(at) > out.valuations.back())) {
        throw Error(ErrorCode::PrecisionExhausted, "iterate " + std::to_string(k + 1) + " vanishes only modulo valuation " +
                                                       fgdyn::to_string(at) + ", not above the previous valuation");
      }
      out.iterates.push_back(next);
      out.valuations.push_back(Valuation(at));
      out.status = OrbitRecord::Status::ValuationEscape;
      out.escape_precision = at;
      return out;
    }
    const Valuation v = certified_valuation(next);
    if (out.growth_checked && !(v > out.valuations.back())) out.growth_violations.push_back(k);
    for (std::size_t j = 0; j < out.iterates.size(); ++j) {
      if (!(next == out.iterates[j])) continue;
      const Rational agree = std::min(next.precision(), out.iterates[j].precision());
      if (!(Valuation(agree) > out.valuations[j])) {
        throw Error(ErrorCode::PrecisionExhausted, "iterate " + std::to_string(k + 1) + " matches iterate " +
                                                       std::to_string(j) + " only modulo valuation " +
                                                       fgdyn::to_string(agree));
      }
      out.iterates.push_back(next);
      out.valuations.push_back(v);
      out.tail = static_cast<int>(j);
      out.period = k + 1 - static_cast<int>(j);
      out.status = j == 0 ? OrbitRecord::Status::Periodic : OrbitRecord::Status::Preperiodic;
      return out;
    }
    out.iterates.push_back(next);
    out.valuations.push_back(v);
  }
  out.status = OrbitRecord::Status::Inconclusive;
  return out;
}

}  // namespace fgdyn
