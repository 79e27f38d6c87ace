#include "fgdyn/tuple_series.hpp"

#include <algorithm>
#include <climits>
#include <memory>
#include <sstream>

#include "accumulate.hpp"

namespace fgdyn {

TupleSeries::TupleSeries(const PrecisionContext& ctx, int nvars, int ncomponents)
    : ctx_(ctx), nvars_(nvars), components_(static_cast<std::size_t>(ncomponents), MultiSeries(ctx, nvars)) {}

TupleSeries::TupleSeries(std::vector<MultiSeries> components)
    : ctx_(components.empty() ? PrecisionContext{} : components.front().context()),
      nvars_(components.empty() ? 0 : components.front().nvars()),
      components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::InvalidArgument, "tuple series needs at least one component");
  for (const auto& c : components_) {
    require_same_context(ctx_, c.context());
    if (c.nvars() != nvars_) throw Error(ErrorCode::MixedContext, "tuple components in different variable counts");
  }
}

TupleSeries TupleSeries::identity(const PrecisionContext& ctx, int d) {
  std::vector<MultiSeries> comps;
  for (int i = 0; i < d; ++i) comps.push_back(MultiSeries::variable(ctx, d, i));
  return TupleSeries(std::move(comps));
}

TupleSeries TupleSeries::linear(const PadicMatrix& a) {
  const PrecisionContext& ctx = a.context();
  const int m = static_cast<int>(a.cols());
  std::vector<MultiSeries> comps;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::vector<Term> terms;
    for (int j = 0; j < m; ++j) terms.push_back(Term{Exponent::variable(j), a(i, static_cast<std::size_t>(j))});
    comps.push_back(MultiSeries::from_terms(ctx, m, std::move(terms)));
  }
  return TupleSeries(std::move(comps));
}

namespace {

void require_shape(const TupleSeries& a, const TupleSeries& b) {
  require_same_context(a.context(), b.context());
  if (a.size() != b.size() || a.nvars() != b.nvars()) throw Error(ErrorCode::MixedContext, "tuple shape mismatch");
}

template <typename Fn>
TupleSeries map_components(const TupleSeries& f, Fn fn) {
  std::vector<MultiSeries> comps;
  comps.reserve(static_cast<std::size_t>(f.size()));
  for (const auto& c : f.components()) comps.push_back(fn(c));
  return TupleSeries(std::move(comps));
}

}  // namespace

TupleSeries operator+(const TupleSeries& a, const TupleSeries& b) {
  require_shape(a, b);
  std::vector<MultiSeries> comps;
  for (int i = 0; i < a.size(); ++i) comps.push_back(a[i] + b[i]);
  return TupleSeries(std::move(comps));
}

TupleSeries operator-(const TupleSeries& a, const TupleSeries& b) {
  require_shape(a, b);
  std::vector<MultiSeries> comps;
  for (int i = 0; i < a.size(); ++i) comps.push_back(a[i] - b[i]);
  return TupleSeries(std::move(comps));
}

TupleSeries operator*(const PadicScalar& c, const TupleSeries& f) {
  return map_components(f, [&](const MultiSeries& s) { return c * s; });
}

TupleSeries operator*(const PadicMatrix& a, const TupleSeries& f) {
  if (a.cols() != static_cast<std::size_t>(f.size())) throw Error(ErrorCode::InvalidArgument, "matrix/tuple size mismatch");
  std::vector<MultiSeries> comps;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    MultiSeries acc(f.context(), f.nvars());
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!a(i, j).is_zero()) acc = acc + a(i, j) * f[static_cast<int>(j)];
    }
    comps.push_back(std::move(acc));
  }
  return TupleSeries(std::move(comps));
}

bool operator==(const TupleSeries& a, const TupleSeries& b) {
  if (!(a.context() == b.context()) || a.size() != b.size() || a.nvars() != b.nvars()) return false;
  for (int i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

bool TupleSeries::identical(const TupleSeries& other) const {
  if (size() != other.size()) return false;
  for (int i = 0; i < size(); ++i) {
    if (!(*this)[i].identical(other[i])) return false;
  }
  return true;
}

bool TupleSeries::is_zero() const {
  return std::all_of(components_.begin(), components_.end(), [](const MultiSeries& c) { return c.is_zero(); });
}

bool TupleSeries::has_zero_constant_term() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const MultiSeries& c) { return c.constant_term().is_zero(); });
}

int TupleSeries::min_precision() const {
  int out = ctx_.precision;
  for (const auto& c : components_) out = std::min(out, c.min_precision());
  return out;
}

int TupleSeries::min_valuation() const {
  int out = INT32_MAX;
  for (const auto& c : components_) out = std::min(out, c.min_valuation());
  return out;
}

TupleSeries TupleSeries::truncated(int degree) const {
  return map_components(*this, [&](const MultiSeries& s) { return s.truncated(degree); });
}

TupleSeries TupleSeries::homogeneous_part(int degree) const {
  return map_components(*this, [&](const MultiSeries& s) { return s.homogeneous_part(degree); });
}

TupleSeries TupleSeries::with_precision(int k) const {
  return map_components(*this, [&](const MultiSeries& s) { return s.with_precision(k); });
}

TupleSeries TupleSeries::mod_p() const {
  return map_components(*this, [](const MultiSeries& s) { return s.mod_p(); });
}

TupleSeries TupleSeries::embed(int total_vars, int offset) const {
  return map_components(*this, [&](const MultiSeries& s) { return s.embed(total_vars, offset); });
}

TupleSeries TupleSeries::remap(int total_vars, const std::vector<int>& target_of_var) const {
  return map_components(*this, [&](const MultiSeries& s) { return s.remap(total_vars, target_of_var); });
}

TupleSeries TupleSeries::concat(const TupleSeries& a, const TupleSeries& b) {
  std::vector<MultiSeries> comps = a.components();
  comps.insert(comps.end(), b.components().begin(), b.components().end());
  return TupleSeries(std::move(comps));
}

std::string TupleSeries::Witness::to_string(int nvars) const {
  return "component " + std::to_string(component + 1) + ", monomial " + exp.to_string(nvars);
}

std::optional<TupleSeries::Witness> TupleSeries::first_nonzero() const {
  std::optional<Witness> best;
  for (int c = 0; c < size(); ++c) {
    for (const auto& t : (*this)[c].terms()) {
      const int deg = t.exp.degree();
      if (!best || deg < best->degree) best = Witness{deg, c, t.exp};
    }
  }
  return best;
}

std::string TupleSeries::to_string() const {
  std::ostringstream out;
  out << "(";
  for (int i = 0; i < size(); ++i) out << (i ? ", " : "") << (*this)[i].to_string();
  out << ")";
  return out.str();
}

namespace {

constexpr long kExactFloor = INT32_MAX;

long lowest_valuation(const PadicScalar& c) { return c.is_zero() ? c.tracking_precision() : c.raw_valuation(); }

// Floors created by the absent coefficients of the outer series f: degree k
// of f meets products of k inner components, whose valuation at each degree
// is bounded below by the min-plus powers of the inner valuation profile.
std::vector<long> outer_floor(const MultiSeries& f, const TupleSeries& g, int cap) {
  std::vector<long> out(static_cast<std::size_t>(cap) + 1, kExactFloor);
  if (!f.has_absent_floor()) return out;
  std::vector<long> profile(static_cast<std::size_t>(cap) + 1, kExactFloor);
  for (int j = 0; j <= cap; ++j) {
    for (const auto& gi : g.components()) {
      profile[static_cast<std::size_t>(j)] = std::min<long>(profile[static_cast<std::size_t>(j)], gi.degree_valuation_bound(j));
    }
  }
  std::vector<long> power(static_cast<std::size_t>(cap) + 1, kExactFloor);
  power[0] = 0;
  for (int k = 0; k <= cap; ++k) {
    const long fk = f.absent_precision(k);
    if (fk < kExactFloor) {
      for (int m = 0; m <= cap; ++m) {
        if (power[static_cast<std::size_t>(m)] < kExactFloor) {
          out[static_cast<std::size_t>(m)] = std::min(out[static_cast<std::size_t>(m)], fk + power[static_cast<std::size_t>(m)]);
        }
      }
    }
    std::vector<long> next(static_cast<std::size_t>(cap) + 1, kExactFloor);
    for (int i = 0; i <= cap; ++i) {
      if (power[static_cast<std::size_t>(i)] >= kExactFloor) continue;
      for (int j = 0; i + j <= cap; ++j) {
        if (profile[static_cast<std::size_t>(j)] >= kExactFloor) continue;
        auto& slot = next[static_cast<std::size_t>(i + j)];
        slot = std::min(slot, power[static_cast<std::size_t>(i)] + profile[static_cast<std::size_t>(j)]);
      }
    }
    power = std::move(next);
  }
  return out;
}

// Substitution engine. Inner components with several terms are expanded
// through a trie over the outer exponents so that shared prefixes of the
// product are computed once; single-term inner components are folded into
// a scalar and an exponent shift at the leaves.
class Composer {
 public:
  Composer(const TupleSeries& f, const TupleSeries& g, int cap)
      : ctx_(f.context()), g_(g), cap_(cap), k_(g.nvars()) {
    const int m = g.size();
    kind_.assign(static_cast<std::size_t>(m), Kind::Complex);
    mindeg_.assign(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < m; ++i) {
      const MultiSeries& gi = g[i];
      if (gi.has_absent_floor()) {
        mindeg_[static_cast<std::size_t>(i)] = lowest_degree(gi);
      } else if (gi.is_zero()) {
        kind_[static_cast<std::size_t>(i)] = Kind::Zero;
      } else {
        mindeg_[static_cast<std::size_t>(i)] = gi.min_degree();
        if (gi.size() == 1) kind_[static_cast<std::size_t>(i)] = Kind::Monomial;
      }
    }
    for (int i = 0; i < m; ++i) {
      if (kind_[static_cast<std::size_t>(i)] == Kind::Complex) complex_.push_back(i);
    }
    powers_.resize(complex_.size());
    const PadicScalar one = PadicScalar::from_integer(ctx_, 1L);
    for (int c = 0; c < f.size(); ++c) {
      for (const auto& t : f[c].terms()) {
        Item item{c, {}, t.coeff, Exponent(), 0, 0};
        bool dead = false;
        int reach = 0;
        for (int i = 0; i < m && !dead; ++i) {
          const int e = t.exp[i];
          if (e == 0) continue;
          const auto kind = kind_[static_cast<std::size_t>(i)];
          if (kind == Kind::Zero) {
            dead = true;
          } else if (kind == Kind::Monomial) {
            const Term& mono = g[i].terms().front();
            reach += e * mindeg_[static_cast<std::size_t>(i)];
            if (reach > cap_) {
              dead = true;
              break;
            }
            item.scalar = item.scalar * mono.coeff.pow(static_cast<unsigned long>(e));
            for (int r = 0; r < e; ++r) item.shift = item.shift + mono.exp;
            item.shift_degree += e * mono.exp.degree();
          } else {
            reach += e * mindeg_[static_cast<std::size_t>(i)];
          }
        }
        if (dead || reach > cap_ || item.scalar.is_zero()) continue;
        for (int i : complex_) item.exps.push_back(static_cast<std::uint8_t>(t.exp[i]));
        item.tail = item.shift_degree;
        items_.push_back(std::move(item));
      }
    }
    std::sort(items_.begin(), items_.end(), [](const Item& a, const Item& b) { return a.exps < b.exps; });
    tables_.reserve(static_cast<std::size_t>(f.size()));
    for (int c = 0; c < f.size(); ++c) {
      tables_.emplace_back(64);
      floors_.push_back(outer_floor(f[c], g, cap_));
    }
    one_ = std::make_unique<MultiSeries>(MultiSeries::constant(ctx_, k_, one));
  }

  TupleSeries run(int ncomponents) {
    if (!items_.empty()) descend(0, 0, items_.size(), *one_);
    std::vector<MultiSeries> comps;
    for (int c = 0; c < ncomponents; ++c) {
      comps.push_back(tables_[static_cast<std::size_t>(c)].to_series(ctx_, k_));
      MultiSeriesBuilder::impose_floor(comps.back(), floors_[static_cast<std::size_t>(c)]);
    }
    return TupleSeries(std::move(comps));
  }

 private:
  enum class Kind { Zero, Monomial, Complex };

  // Lowest degree at which a coefficient may be nonzero, floors included.
  static int lowest_degree(const MultiSeries& s) {
    int out = s.min_degree();
    for (int n = 0; n <= s.context().degree_cap && n < out; ++n) {
      if (s.absent_precision(n) < kExactFloor) out = n;
    }
    return out;
  }

  struct Item {
    int component;
    std::vector<std::uint8_t> exps;  // exponents of the complex variables
    PadicScalar scalar;
    Exponent shift;
    int shift_degree;
    int tail;
  };

  const MultiSeries& power(std::size_t level, int e) {
    auto& table = powers_[level];
    const MultiSeries& base = g_[complex_[level]];
    if (table.empty()) table.push_back(*one_);
    while (static_cast<int>(table.size()) <= e) table.push_back(multiply(table.back(), base, cap_));
    return table[static_cast<std::size_t>(e)];
  }

  // Minimal degree contributed by levels >= level plus the leaf shift.
  int remaining(const Item& item, std::size_t level) const {
    int out = item.shift_degree;
    for (std::size_t l = level; l < complex_.size(); ++l) {
      out += item.exps[l] * mindeg_[static_cast<std::size_t>(complex_[l])];
    }
    return out;
  }

  void descend(std::size_t level, std::size_t lo, std::size_t hi, const MultiSeries& prefix) {
    if (level == complex_.size()) {
      for (std::size_t i = lo; i < hi; ++i) leaf(items_[i], prefix);
      return;
    }
    struct Group {
      std::size_t lo, hi;
      int e;
      int need;
    };
    std::vector<Group> groups;
    for (std::size_t i = lo; i < hi;) {
      std::size_t j = i;
      int need = INT_MAX;
      while (j < hi && items_[j].exps[level] == items_[i].exps[level]) {
        need = std::min(need, remaining(items_[j], level + 1));
        ++j;
      }
      groups.push_back(Group{i, j, items_[i].exps[level], need});
      i = j;
    }
    const int md = mindeg_[static_cast<std::size_t>(complex_[level])];
    // cut[g]: degree bound for the running product at group g.
    std::vector<int> cut(groups.size());
    int best = INT_MAX;
    for (std::size_t gi = groups.size(); gi-- > 0;) {
      const int here = groups[gi].need + groups[gi].e * md;
      best = std::min(best, here);
      cut[gi] = cap_ - (best - groups[gi].e * md);
    }
    const MultiSeries* current = &prefix;
    MultiSeries running(ctx_, k_);
    int e_prev = 0;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const Group& grp = groups[gi];
      if (grp.e != e_prev) {
        running = multiply(*current, power(level, grp.e - e_prev), cut[gi]);
        current = &running;
        e_prev = grp.e;
      }
      descend(level + 1, grp.lo, grp.hi, *current);
    }
  }

  void leaf(const Item& item, const MultiSeries& product) {
    auto& table = tables_[static_cast<std::size_t>(item.component)];
    const int budget = cap_ - item.shift_degree;
    for (const auto& t : product.terms()) {
      if (t.exp.degree() > budget) continue;
      detail::add_product(table.at((t.exp + item.shift).key()), item.scalar, t.coeff, ctx_.p);
    }
    if (product.has_absent_floor()) {
      auto& floor = floors_[static_cast<std::size_t>(item.component)];
      const long v = lowest_valuation(item.scalar);
      for (int j = 0; j <= budget; ++j) {
        const long k = product.absent_precision(j);
        if (k < kExactFloor) {
          auto& slot = floor[static_cast<std::size_t>(j + item.shift_degree)];
          slot = std::min(slot, k + v);
        }
      }
    }
  }

  PrecisionContext ctx_;
  const TupleSeries& g_;
  int cap_;
  int k_;
  std::vector<Kind> kind_;
  std::vector<int> mindeg_;
  std::vector<int> complex_;
  std::vector<std::vector<MultiSeries>> powers_;
  std::vector<Item> items_;
  std::vector<detail::AccumulatorTable> tables_;
  std::vector<std::vector<long>> floors_;
  std::unique_ptr<MultiSeries> one_;
};

}  // namespace

TupleSeries compose(const TupleSeries& f, const TupleSeries& g, int cap) {
  require_same_context(f.context(), g.context());
  if (f.nvars() != g.size()) {
    throw Error(ErrorCode::InvalidArgument, "composition needs one inner component per outer variable");
  }
  for (int i = 0; i < g.size(); ++i) {
    if (!g[i].constant_term().is_zero()) {
      throw Error(ErrorCode::NonzeroConstantTerm,
                  "inner component " + std::to_string(i + 1) + " has a nonzero constant term");
    }
  }
  const int limit = cap < 0 ? f.context().degree_cap : std::min(cap, f.context().degree_cap);
  Composer composer(f, g, limit);
  return composer.run(f.size());
}

MultiSeries compose(const MultiSeries& f, const TupleSeries& g, int cap) {
  return compose(TupleSeries(std::vector<MultiSeries>{f}), g, cap)[0];
}

PadicMatrix jacobian_at_zero(const TupleSeries& h) { return jacobian_block_at_zero(h, 0, h.nvars()); }

PadicMatrix jacobian_block_at_zero(const TupleSeries& h, int first, int count) {
  if (first < 0 || count < 0 || first + count > h.nvars()) throw Error(ErrorCode::InvalidArgument, "block out of range");
  PadicMatrix out(h.context(), static_cast<std::size_t>(h.size()), static_cast<std::size_t>(count));
  for (int i = 0; i < h.size(); ++i) {
    for (int j = 0; j < count; ++j) {
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = h[i].coeff(Exponent::variable(first + j));
    }
  }
  return out;
}

std::vector<std::vector<MultiSeries>> jacobian(const TupleSeries& h) {
  std::vector<std::vector<MultiSeries>> out;
  for (int i = 0; i < h.size(); ++i) {
    std::vector<MultiSeries> row;
    for (int j = 0; j < h.nvars(); ++j) row.push_back(h[i].derivative(j));
    out.push_back(std::move(row));
  }
  return out;
}

TupleSeries compositional_inverse(const TupleSeries& h) {
  const PrecisionContext& ctx = h.context();
  const int d = h.size();
  if (h.nvars() != d) throw Error(ErrorCode::InvalidArgument, "compositional inverse needs a d-in-d tuple");
  if (!h.has_zero_constant_term()) throw Error(ErrorCode::NonzeroConstantTerm, "series to invert has a constant term");
  const PadicMatrix j0 = jacobian_at_zero(h);
  const Elimination elim = eliminate(j0);
  if (!j0.is_integral() || elim.singular || !(elim.determinant_valuation == Valuation(0))) {
    throw Error(ErrorCode::NotInvertible,
                "J0 is not invertible over Z_p (det valuation " + elim.determinant_valuation.to_string() + ")");
  }
  const PadicMatrix j0inv = *inverse(j0);
  const TupleSeries x = TupleSeries::identity(ctx, d);
  TupleSeries f = TupleSeries::linear(j0inv);
  for (int n = 1; n < ctx.degree_cap; ++n) {
    const TupleSeries residual = (x - compose(h, f, n + 1)).homogeneous_part(n + 1);
    if (residual.is_zero()) continue;
    f = f + j0inv * residual;
  }
  return f;
}

PadicScalar coeff_extract(const TupleSeries& f, Exponent I, int t) {
  if (I.degree() > f.context().degree_cap) throw Error(ErrorCode::InvalidArgument, "exponent beyond the degree cap");
  return f[t].coeff(I);
}

}  // namespace fgdyn
