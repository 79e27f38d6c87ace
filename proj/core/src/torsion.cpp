#include "fgdyn/torsion.hpp"

#include <algorithm>

namespace fgdyn {

namespace {

constexpr int kNewtonSteps = 64;

std::optional<Valuation> certified(const ExtScalar& x) {
  try {
    return x.valuation();
  } catch (const Error& err) {
    if (err.code() != ErrorCode::ImpreciseValuation) throw;
    return std::nullopt;
  }
}

bool exact_zero(const ExtScalar& x) {
  return std::all_of(x.coeffs().begin(), x.coeffs().end(),
                     [](const PadicScalar& c) { return c.is_zero() && c.is_exact(); });
}

class RootFinder {
 public:
  RootFinder(const MultiSeries& f, const ExtensionPtr& ext)
      : f_(f), df_(f.derivative(0)), ext_(ext), e_(ext->ramification_index()), uniformizer_(ext) {
    const PrecisionContext& ctx = f.context();
    coeffs_.assign(static_cast<std::size_t>(std::max(0, f.max_degree())) + 1, ExtScalar(ext));
    for (const auto& t : f.terms()) coeffs_[static_cast<std::size_t>(t.exp[0])] = ExtScalar::from_scalar(ext, t.coeff);
    uniformizer_ = ext->kind() == ModulusKind::Eisenstein
                       ? ExtScalar::generator(ext)
                       : ExtScalar::from_scalar(ext, PadicScalar::from_integer(ctx, static_cast<long>(ctx.p)));
    std::vector<long> rep(static_cast<std::size_t>(ext->residue_degree()), 0);
    for (;;) {
      residues_.push_back(ExtScalar::from_integers(ext, rep));
      std::size_t i = 0;
      while (i < rep.size() && ++rep[i] == static_cast<long>(ctx.p)) rep[i++] = 0;
      if (i == rep.size()) break;
    }
    max_depth_ = e_ * ctx.precision;
  }

  RootSearch run() {
    const ExtScalar zero(ext_);
    const auto m = count(zero, 1);
    if (!m) {
      out_.failures.push_back(CandidateFailure{zero, Rational(1, e_), 0, "root count undetermined at working precision"});
      return out_;
    }
    out_.disc_count = m->roots;
    if (m->roots > 0) search(zero, 1, *m, uniformizer_);
    return out_;
  }

 private:
  struct Shift {
    int roots = 0;
    // Coefficients of f(c + y).
    std::vector<ExtScalar> b;
  };

  // Roots in {x : v(x - c) >= k/e}: the last index of minimal valuation
  // among the coefficients of f(c + pi^k y). nullopt when a coefficient
  // that vanishes at its precision could change the answer.
  std::optional<Shift> count(const ExtScalar& c, int k) const {
    std::vector<ExtScalar> b = coeffs_;
    const std::size_t n = b.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = n - 1; j > i; --j) b[j - 1] = b[j - 1] + c * b[j];
    }
    std::optional<Rational> best;
    int at = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (b[i].is_zero()) continue;
      const auto v = certified(b[i]);
      if (!v) return std::nullopt;
      const Rational total = v->value() + Rational(static_cast<std::int64_t>(i) * k, e_);
      if (!best || total <= *best) {
        best = total;
        at = static_cast<int>(i);
      }
    }
    if (!best) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) {
      if (!b[i].is_zero() || exact_zero(b[i])) continue;
      const Rational bound = b[i].precision() + Rational(static_cast<std::int64_t>(i) * k, e_);
      if (bound < *best || (bound == *best && static_cast<int>(i) > at)) return std::nullopt;
    }
    return Shift{at, std::move(b)};
  }

  void search(const ExtScalar& c, int k, const Shift& shift, const ExtScalar& pik) {
    if (shift.roots == 1 && (try_newton(c, k) || try_disc_newton(c, k, shift, pik))) return;
    if (k >= max_depth_) {
      out_.failures.push_back(CandidateFailure{c, Rational(k, e_), shift.roots, "roots not separated at working precision"});
      return;
    }
    for (const ExtScalar& r : residues_) {
      const ExtScalar child = c + r * pik;
      const auto cm = count(child, k + 1);
      if (!cm) {
        out_.failures.push_back(
            CandidateFailure{child, Rational(k + 1, e_), 0, "root count undetermined at working precision"});
        continue;
      }
      if (cm->roots > 0) search(child, k + 1, *cm, pik * uniformizer_);
    }
  }

  // False when the Newton condition v(f(c)) > 2 v(f'(c)) does not hold yet.
  bool try_newton(const ExtScalar& c, int k) {
    const PointTuple start(std::vector<ExtScalar>{c});
    const EvalResult fc = ms_eval(f_, start, EvalMode::Polynomial);
    const auto vd = certified(ms_eval(df_, start, EvalMode::Polynomial).value);
    if (!vd || vd->is_infinite()) return false;
    Rational vf = fc.certified;
    if (!fc.value.is_zero()) {
      const auto v = certified(fc.value);
      if (!v) return false;
      vf = v->value();
    }
    if (!(vf > 2 * vd->value())) return false;
    if (newton(c, c, k)) return true;
    out_.failures.push_back(CandidateFailure{c, Rational(k, e_), 1, "Newton iteration did not converge"});
    return true;
  }

  // With one root in the disc, h(y) = f(c + pi^k y) / (b_1 pi^k) has unit
  // linear coefficient and higher coefficients in the maximal ideal, so
  // Newton converges from the residue of -h(0). False when that start
  // does not lift, leaving the disc to be refined.
  bool try_disc_newton(const ExtScalar& c, int k, const Shift& shift, const ExtScalar& pik) {
    if (shift.b.size() < 2 || shift.b[1].is_zero()) return false;
    ExtScalar h0(ext_);
    try {
      h0 = shift.b[0] / (shift.b[1] * pik);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::ImpreciseValuation && err.code() != ErrorCode::PrecisionExhausted) throw;
      return false;
    }
    const int digits = ext_->kind() == ModulusKind::Eisenstein ? 1 : ext_->degree();
    std::vector<long> residue(static_cast<std::size_t>(ext_->degree()), 0);
    const long p = static_cast<long>(ext_->context().p);
    for (int i = 0; i < digits; ++i) {
      const PadicScalar& a = h0.coeffs()[static_cast<std::size_t>(i)];
      if (a.is_zero()) continue;
      if (a.raw_valuation() < 0 || a.precision() < 1) return false;
      const long r = a.to_integer(1).get_si();
      residue[static_cast<std::size_t>(i)] = r == 0 ? 0 : p - r;
    }
    return newton(c + ExtScalar::from_integers(ext_, residue) * pik, c, k);
  }

  bool newton(ExtScalar x, const ExtScalar& c, int k) {
    for (int step = 0; step < kNewtonSteps; ++step) {
      const PointTuple at(std::vector<ExtScalar>{x});
      const EvalResult fx = ms_eval(f_, at, EvalMode::Polynomial);
      if (fx.value.is_zero()) return finish(x, c, k, fx.certified);
      const ExtScalar dfx = ms_eval(df_, at, EvalMode::Polynomial).value;
      if (dfx.is_zero()) return false;
      const ExtScalar nx = x - fx.value / dfx;
      if (nx == x) return finish(nx, c, k, fx.certified);
      x = nx;
    }
    return false;
  }

  bool finish(ExtScalar x, const ExtScalar& c, int k, const Rational& vanishing) {
    const Rational radius(k, e_);
    const ExtScalar offset = x - c;
    if (!offset.is_zero()) {
      const auto v = certified(offset);
      if (!v || *v < Valuation(radius)) {
        out_.failures.push_back(CandidateFailure{c, radius, 1, "Newton iterate left its disc"});
        return true;
      }
    }
    const auto vd = certified(ms_eval(df_, PointTuple(std::vector<ExtScalar>{x}), EvalMode::Polynomial).value);
    const bool simple = vd.has_value() && !vd->is_infinite();
    const bool exact_root = exact_zero(x) && exact_zero(ms_eval(f_, PointTuple(std::vector<ExtScalar>{x}), EvalMode::Polynomial).value);
    if (simple && !exact_root) {
      const Rational known = vanishing - vd->value();
      if (known < x.precision()) x = x.with_precision(known);
    }
    const PointTuple point(std::vector<ExtScalar>{x});
    const EvalResult check = ms_eval(f_, point, EvalMode::Polynomial);
    if (!check.value.is_zero()) {
      out_.failures.push_back(CandidateFailure{c, radius, 1, "lifted point does not vanish"});
      return true;
    }
    std::optional<Valuation> vx = x.is_zero() ? std::optional<Valuation>(Valuation(x.precision())) : certified(x);
    if (exact_zero(x)) vx = Valuation::infinity();
    out_.roots.push_back(TorsionRoot{point, vx ? *vx : Valuation(x.precision()), simple, check.certified});
    return true;
  }

  const MultiSeries& f_;
  MultiSeries df_;
  ExtensionPtr ext_;
  int e_;
  std::vector<ExtScalar> coeffs_;
  ExtScalar uniformizer_;
  std::vector<ExtScalar> residues_;
  int max_depth_ = 0;
  RootSearch out_;
};

std::string join_count(std::size_t found, const std::optional<mpz_class>& expected) {
  std::string out = std::to_string(found) + " roots found";
  if (expected) out += " of p^{hn} = " + expected->get_str();
  return out;
}

}  // namespace

RootSearch positive_valuation_roots(const MultiSeries& f, const ExtensionPtr& ext) {
  if (f.nvars() != 1) throw Error(ErrorCode::InvalidArgument, "root search needs a one-variable series");
  require_same_context(f.context(), ext->context());
  if (f.is_zero()) throw Error(ErrorCode::InvalidArgument, "the zero series has no isolated roots");
  return RootFinder(f, ext).run();
}

TorsionLevelSet torsion_probe_dim1(const FormalGroupLaw& group, int level, const ExtensionPtr& ext) {
  const PrecisionContext& ctx = group.context();
  if (group.dimension() != 1) throw Error(ErrorCode::InvalidArgument, "torsion probe is for one-dimensional laws");
  if (level < 1) throw Error(ErrorCode::InvalidArgument, "level must be positive");
  require_same_context(ctx, ext->context());
  mpz_class pn;
  mpz_ui_pow_ui(pn.get_mpz_t(), ctx.p, static_cast<unsigned long>(level));
  const EndoSeries mult = fg_multiplication_map(group, pn);
  const HeightReport height = height_and_kernel_count(group, level, nullptr);

  TorsionLevelSet out;
  out.group = mult.group;
  out.level = level;
  out.extension = ext;
  out.expected = height.kernel_count;
  const RootSearch search = positive_valuation_roots(mult.series[0], ext);
  out.roots = search.roots;
  out.failures = search.failures;
  out.multiplicity_free = out.failures.empty() &&
                          std::all_of(out.roots.begin(), out.roots.end(), [](const TorsionRoot& r) { return r.simple; });
  out.complete = out.expected && mpz_class(static_cast<unsigned long>(out.roots.size())) == *out.expected;
  if (!out.expected) {
    out.verdict = "infinite height: " + join_count(out.roots.size(), out.expected);
  } else if (out.complete) {
    out.verdict = join_count(out.roots.size(), out.expected) + "; complete in " + ext->label();
  } else {
    out.verdict = join_count(out.roots.size(), out.expected) + "; the rest lie outside " + ext->label();
  }
  if (!out.failures.empty()) out.verdict += "; " + std::to_string(out.failures.size()) + " candidate(s) failed to lift";
  return out;
}

IntersectionReport intersection_probe(const FormalGroupLaw& f, const FormalGroupLaw& g, int level,
                                      const ExtensionPtr& ext) {
  require_same_context(f.context(), g.context());
  IntersectionReport out{torsion_probe_dim1(f, level, ext), torsion_probe_dim1(g, level, ext), {}, false, false, {}};
  for (std::size_t i = 0; i < out.first.roots.size(); ++i) {
    for (const auto& r : out.second.roots) {
      if (out.first.roots[i].point == r.point) {
        out.shared.push_back(i);
        break;
      }
    }
  }
  out.identical_laws = f.law() == g.law();
  const std::string counts = std::to_string(out.first.roots.size()) + " and " + std::to_string(out.second.roots.size()) +
                             " roots, " + std::to_string(out.shared.size()) + " shared";
  if (out.identical_laws) {
    out.consistent = out.shared.size() == out.first.roots.size() && out.first.roots.size() == out.second.roots.size();
    out.verdict = "identical laws; " + counts;
  } else {
    out.consistent = true;
    out.verdict = "distinct laws, finite observed intersection; " + counts;
  }
  return out;
}

std::optional<std::vector<std::size_t>> root_permutation(const TupleSeries& u, const std::vector<TorsionRoot>& roots) {
  std::vector<std::size_t> perm;
  std::vector<bool> hit(roots.size(), false);
  for (const auto& r : roots) {
    const PointTuple image = ms_eval(u, r.point).value;
    std::optional<std::size_t> found;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (image == roots[j].point) {
        if (found) return std::nullopt;
        found = j;
      }
    }
    if (!found || hit[*found]) return std::nullopt;
    hit[*found] = true;
    perm.push_back(*found);
  }
  return perm;
}

}  // namespace fgdyn
