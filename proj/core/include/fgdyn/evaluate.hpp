#pragma once

#include "fgdyn/extension.hpp"
#include "fgdyn/tuple_series.hpp"

namespace fgdyn {

/// Series: the stored terms stand for a power series truncated at degree D,
/// so the omitted tail contributes valuation at least (D+1) min v(theta_i).
/// Polynomial: the stored terms are the whole function.
enum class EvalMode { Series, Polynomial };

struct EvalResult {
  ExtScalar value;
  Valuation tail_bound;  // +inf in polynomial mode
  Rational certified;    // value known modulo this valuation
};

struct TupleEvalResult {
  PointTuple value;
  Valuation tail_bound;
  Rational certified;
};

/// Evaluates f at theta. Every coordinate must have positive valuation,
/// otherwise DivergentPoint.
EvalResult ms_eval(const MultiSeries& f, const PointTuple& theta, EvalMode mode = EvalMode::Series);
TupleEvalResult ms_eval(const TupleSeries& f, const PointTuple& theta, EvalMode mode = EvalMode::Series);

}  // namespace fgdyn
