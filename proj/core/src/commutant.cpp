#include "fgdyn/commutant.hpp"

#include <algorithm>
#include <climits>
#include <memory>

namespace fgdyn {

std::string StabilityVerdict::to_string() const {
  switch (reason) {
    case Reason::None:
      return "stable";
    case Reason::ZeroJacobian:
      return "not stable: zero Jacobian";
    case Reason::RootOfUnity:
      return "not stable: Jacobian is a root of unity of order " + std::to_string(order);
    case Reason::SingularDifference:
      return "not stable: J^" + std::to_string(degree + 1) + " - J is singular";
  }
  return "unknown";
}

StabilityVerdict stability_classify(const TupleSeries& u, int degree_cap, int root_bound) {
  const PrecisionContext& ctx = u.context();
  if (u.size() != u.nvars()) throw Error(ErrorCode::InvalidArgument, "stability needs a d-in-d series");
  if (!u.has_zero_constant_term()) throw Error(ErrorCode::NonzeroConstantTerm, "u(0) != 0");
  const int cap = degree_cap < 0 ? ctx.degree_cap : degree_cap;
  const PadicMatrix j = jacobian_at_zero(u);
  StabilityVerdict out;
  if (j.is_zero()) {
    out.reason = StabilityVerdict::Reason::ZeroJacobian;
    return out;
  }
  const PadicMatrix id = PadicMatrix::identity(ctx, j.rows());
  PadicMatrix power = j;
  for (int k = 1; k <= root_bound; ++k) {
    if (power == id) {
      out.reason = StabilityVerdict::Reason::RootOfUnity;
      out.order = k;
      return out;
    }
    power = power * j;
  }
  power = j;
  for (int m = 1; m <= cap - 1; ++m) {
    power = power * j;
    if (eliminate(power - j).singular) {
      out.reason = StabilityVerdict::Reason::SingularDifference;
      out.degree = m;
      return out;
    }
  }
  return out;
}

namespace {

void monomials_of_degree(int k, int n, int var, Exponent prefix, std::vector<Exponent>& out) {
  if (var == k - 1) {
    out.push_back(prefix.with(var, n));
    return;
  }
  for (int e = n; e >= 0; --e) monomials_of_degree(k, n - e, var + 1, prefix.with(var, e), out);
}

std::vector<Exponent> monomials_of_degree(int k, int n) {
  std::vector<Exponent> out;
  if (k > 0) monomials_of_degree(k, n, 0, Exponent(), out);
  std::sort(out.begin(), out.end());
  return out;
}

int min_entry_valuation(const PadicMatrix& m) {
  int out = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (!m(r, c).is_zero()) out = std::min(out, m(r, c).raw_valuation());
    }
  }
  return out;
}

// The difference operator D -> D o (A_in X) - A_out D on one homogeneous degree.
class DegreeOperator {
 public:
  virtual ~DegreeOperator() = default;
  // Largest determinant valuation; throws SingularStep.
  virtual Valuation scan() = 0;
  virtual TupleSeries solve(const TupleSeries& rhs) = 0;
};

class DiagonalOperator : public DegreeOperator {
 public:
  DiagonalOperator(const PadicMatrix& a_out, const std::vector<std::vector<PadicScalar>>& powers, int k, int n)
      : a_out_(a_out), powers_(powers), k_(k), n_(n), scalar_(all_equal(powers)) {}

  Valuation scan() override {
    Valuation worst(0);
    if (scalar_) return block(Exponent::variable(0, n_)).detval;
    for (const Exponent& e : monomials_of_degree(k_, n_)) worst = std::max(worst, block(e).detval);
    return worst;
  }

  TupleSeries solve(const TupleSeries& rhs) override {
    const PrecisionContext& ctx = rhs.context();
    const int d = rhs.size();
    std::vector<Exponent> present;
    int floor = INT32_MAX;
    for (const auto& c : rhs.components()) {
      for (const auto& t : c.terms()) present.push_back(t.exp);
      floor = std::min(floor, c.absent_precision(n_));
    }
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    std::vector<std::vector<Term>> terms(static_cast<std::size_t>(d));
    Valuation worst(0);
    int entry_val = 0;
    for (const Exponent& e : present) {
      const Block& b = block(e);
      worst = std::max(worst, b.detval);
      entry_val = std::min(entry_val, min_entry_valuation(b.m));
      std::vector<PadicScalar> v;
      for (int i = 0; i < d; ++i) v.push_back(rhs[i].coeff(e));
      const auto x = fgdyn::solve(b.m, v);
      if (!x) throw SingularStep(n_);
      for (int i = 0; i < d; ++i) terms[static_cast<std::size_t>(i)].push_back(Term{e, (*x)[static_cast<std::size_t>(i)]});
    }
    std::vector<MultiSeries> comps;
    for (int i = 0; i < d; ++i) {
      comps.push_back(MultiSeries::from_terms(ctx, rhs.nvars(), std::move(terms[static_cast<std::size_t>(i)])));
    }
    if (floor != INT32_MAX) {
      if (present.empty()) worst = scan();
      const long lost = static_cast<long>(worst.value().numerator()) - static_cast<long>(d - 1) * entry_val;
      for (auto& c : comps) c = c.lowered(n_, static_cast<int>(std::max<long>(floor - lost, 0)));
    }
    return TupleSeries(std::move(comps));
  }

 private:
  struct Block {
    PadicScalar mu;
    PadicMatrix m;
    Valuation detval;
  };

  static bool all_equal(const std::vector<std::vector<PadicScalar>>& powers) {
    for (const auto& row : powers) {
      if (!row[1].identical(powers.front()[1])) return false;
    }
    return true;
  }

  const Block& block(Exponent e) {
    const PrecisionContext& ctx = a_out_.context();
    PadicScalar mu = PadicScalar::from_integer(ctx, 1L);
    for (int l = 0; l < k_; ++l) mu = mu * powers_[static_cast<std::size_t>(l)][static_cast<std::size_t>(e[l])];
    for (const auto& b : blocks_) {
      if (b.mu.identical(mu)) return b;
    }
    PadicMatrix m = PadicMatrix::scalar(ctx, a_out_.rows(), mu) - a_out_;
    const Elimination el = eliminate(m);
    if (el.singular) throw SingularStep(n_);
    blocks_.push_back(Block{mu, std::move(m), el.determinant_valuation});
    return blocks_.back();
  }

  const PadicMatrix& a_out_;
  const std::vector<std::vector<PadicScalar>>& powers_;
  int k_;
  int n_;
  bool scalar_;
  std::vector<Block> blocks_;
};

class DenseOperator : public DegreeOperator {
 public:
  DenseOperator(const PadicMatrix& a_out, const PadicMatrix& a_in, const PrecisionContext& ctx, int n)
      : ctx_(ctx), n_(n), d_(static_cast<int>(a_out.rows())), k_(static_cast<int>(a_in.rows())),
        basis_(monomials_of_degree(k_, n)), op_(ctx, 0, 0) {
    const std::size_t size = static_cast<std::size_t>(d_) * basis_.size();
    if (size > kDenseOperatorLimit) {
      throw Error(ErrorCode::Unsupported, "difference operator at degree " + std::to_string(n) + " has " +
                                              std::to_string(size) + " unknowns; the dense limit is " +
                                              std::to_string(kDenseOperatorLimit));
    }
    op_ = PadicMatrix(ctx, size, size);
    std::vector<MultiSeries> forms;
    for (int l = 0; l < k_; ++l) {
      std::vector<Term> terms;
      for (int m = 0; m < k_; ++m) {
        terms.push_back(Term{Exponent::variable(m), a_in(static_cast<std::size_t>(l), static_cast<std::size_t>(m))});
      }
      forms.push_back(MultiSeries::from_terms(ctx, k_, std::move(terms)));
    }
    for (std::size_t col = 0; col < basis_.size(); ++col) {
      const Exponent e = basis_[col];
      MultiSeries image = MultiSeries::constant(ctx, k_, PadicScalar::from_integer(ctx, 1L));
      for (int l = 0; l < k_; ++l) {
        if (e[l] > 0) image = multiply(image, forms[static_cast<std::size_t>(l)].pow(static_cast<unsigned>(e[l])), n);
      }
      for (int j = 0; j < d_; ++j) {
        const std::size_t c = index(j, col);
        for (const auto& t : image.terms()) op_(index(j, position(t.exp)), c) += t.coeff;
        for (int i = 0; i < d_; ++i) op_(index(i, col), c) -= a_out(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
    }
  }

  Valuation scan() override {
    const Elimination el = eliminate(op_);
    if (el.singular) throw SingularStep(n_);
    detval_ = el.determinant_valuation;
    return detval_;
  }

  TupleSeries solve(const TupleSeries& rhs) override {
    std::vector<PadicScalar> b;
    b.reserve(op_.rows());
    for (int i = 0; i < d_; ++i) {
      for (const Exponent& e : basis_) b.push_back(rhs[i].coeff(e));
    }
    const auto x = fgdyn::solve(op_, b);
    if (!x) throw SingularStep(n_);
    std::vector<MultiSeries> comps;
    for (int i = 0; i < d_; ++i) {
      std::vector<Term> terms;
      for (std::size_t col = 0; col < basis_.size(); ++col) terms.push_back(Term{basis_[col], (*x)[index(i, col)]});
      comps.push_back(MultiSeries::from_terms(ctx_, k_, std::move(terms)));
    }
    return TupleSeries(std::move(comps));
  }

 private:
  std::size_t index(int component, std::size_t col) const {
    return static_cast<std::size_t>(component) * basis_.size() + col;
  }
  std::size_t position(Exponent e) const {
    return static_cast<std::size_t>(std::lower_bound(basis_.begin(), basis_.end(), e) - basis_.begin());
  }

  PrecisionContext ctx_;
  int n_;
  int d_;
  int k_;
  std::vector<Exponent> basis_;
  PadicMatrix op_;
  Valuation detval_;
};

Valuation correction_valuation(const TupleSeries& delta) {
  if (delta.is_zero()) return Valuation::infinity();
  return Valuation(static_cast<std::int64_t>(delta.min_valuation()));
}

}  // namespace

ReconstructionTrace commutant_solve(const TupleSeries& outer, const TupleSeries& inner, const PadicMatrix& target) {
  const PrecisionContext& ctx = outer.context();
  require_same_context(ctx, inner.context());
  require_same_context(ctx, target.context());
  const int d = outer.size();
  const int k = inner.size();
  if (outer.nvars() != d || inner.nvars() != k) throw Error(ErrorCode::InvalidArgument, "outer and inner maps must be square");
  if (target.rows() != static_cast<std::size_t>(d) || target.cols() != static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::InvalidArgument, "target Jacobian must be d x k");
  }
  if (!outer.has_zero_constant_term() || !inner.has_zero_constant_term()) {
    throw Error(ErrorCode::NonzeroConstantTerm, "commuting maps must fix 0");
  }
  const PadicMatrix a_out = jacobian_at_zero(outer);
  const PadicMatrix a_in = jacobian_at_zero(inner);
  if (!(a_out * target == target * a_in)) {
    throw Error(ErrorCode::NonCommutingTarget, "target Jacobian does not intertwine J0(outer) and J0(inner)");
  }

  std::vector<std::vector<PadicScalar>> powers;
  if (a_in.is_diagonal()) {
    for (int l = 0; l < k; ++l) {
      std::vector<PadicScalar> row{PadicScalar::from_integer(ctx, 1L)};
      for (int e = 1; e <= ctx.degree_cap; ++e) row.push_back(row.back() * a_in(static_cast<std::size_t>(l), static_cast<std::size_t>(l)));
      powers.push_back(std::move(row));
    }
  }
  std::vector<std::unique_ptr<DegreeOperator>> ops(static_cast<std::size_t>(ctx.degree_cap) + 1);
  ReconstructionTrace trace{{}, {}, 0, TupleSeries::linear(target)};
  for (int n = 2; n <= ctx.degree_cap; ++n) {
    auto& op = ops[static_cast<std::size_t>(n)];
    if (a_in.is_diagonal()) {
      op = std::make_unique<DiagonalOperator>(a_out, powers, k, n);
    } else {
      op = std::make_unique<DenseOperator>(a_out, a_in, ctx, n);
    }
    const Valuation v = op->scan();
    trace.steps.push_back(ReconstructionStep{n, v, Valuation::infinity()});
    trace.budget += static_cast<int>(v.value().numerator());
  }
  if (trace.budget >= ctx.precision) {
    throw Error(ErrorCode::PrecisionExhausted, "difference operators consume " + std::to_string(trace.budget) +
                                                   " digits of the " + std::to_string(ctx.precision) + " available");
  }

  TupleSeries& h = trace.result;
  for (int n = 2; n <= ctx.degree_cap; ++n) {
    const TupleSeries rhs = (compose(outer, h, n) - compose(h, inner, n)).homogeneous_part(n);
    bool floors = false;
    for (const auto& c : rhs.components()) floors = floors || c.absent_precision(n) != INT32_MAX;
    if (rhs.is_zero() && !floors) continue;
    const TupleSeries delta = ops[static_cast<std::size_t>(n)]->solve(rhs);
    trace.steps[static_cast<std::size_t>(n - 2)].correction_valuation = correction_valuation(delta);
    trace.inverted_degrees.push_back(n);
    h = h + delta;
  }
  if (auto w = (compose(outer, h) - compose(h, inner)).first_nonzero()) {
    throw Error(ErrorCode::VerificationFailure,
                "reconstructed series fails the commutation check at degree " + std::to_string(w->degree) +
                    " (" + w->to_string(h.nvars()) + ")");
  }
  return trace;
}

ReconstructionTrace commutant_reconstruct(const TupleSeries& u, const PadicMatrix& j0_target) {
  return commutant_solve(u, u, j0_target);
}

ReconstructionTrace group_from_jacobian(const TupleSeries& u, const PadicMatrix& b1, const PadicMatrix& b2) {
  const int d = u.size();
  const TupleSeries doubled = TupleSeries::concat(u.embed(2 * d, 0), u.embed(2 * d, d));
  return commutant_solve(u, doubled, PadicMatrix::hconcat(b1, b2));
}

EqualityVerdict group_equality(const FormalGroupLaw& f, const FormalGroupLaw& g, const TupleSeries& u) {
  require_same_context(f.context(), g.context());
  EqualityVerdict out;
  if (f.dimension() != g.dimension()) {
    out.reason = "dimensions differ";
    return out;
  }
  const int d = f.dimension();
  const TupleSeries* laws[2] = {&f.law(), &g.law()};
  const char* names[2] = {"F", "G"};
  for (int i = 0; i < 2; ++i) {
    try {
      endo_verify(i == 0 ? f : g, u);
    } catch (const NotEndomorphism& err) {
      out.reason = std::string("u is not an endomorphism of ") + names[i] + ": " + err.what();
      return out;
    }
  }
  const PadicMatrix b1 = jacobian_block_at_zero(*laws[0], 0, d);
  const PadicMatrix b2 = jacobian_block_at_zero(*laws[0], d, d);
  if (!(b1 == jacobian_block_at_zero(*laws[1], 0, d)) || !(b2 == jacobian_block_at_zero(*laws[1], d, d))) {
    out.reason = "Jacobian blocks differ";
    return out;
  }
  const ReconstructionTrace trace = group_from_jacobian(u, b1, b2);
  for (int i = 0; i < 2; ++i) {
    if (auto w = (trace.result - *laws[i]).first_nonzero()) {
      throw Error(ErrorCode::VerificationFailure, std::string("reconstruction from u disagrees with ") + names[i] +
                                                      " at " + w->to_string(2 * d));
    }
  }
  out.outcome = EqualityVerdict::Outcome::Equal;
  out.reason = "both laws equal the unique series commuting with u with these Jacobian blocks";
  out.reconstruction = trace.result;
  return out;
}

}  // namespace fgdyn
