#include "fgdyn/series.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <sstream>

#include "accumulate.hpp"

namespace fgdyn {

namespace {

int byte_sum(std::uint64_t x) noexcept { return static_cast<int>((x * 0x0101010101010101ULL) >> 56); }

void check_vars(int nvars) {
  if (nvars < 0 || nvars > Exponent::kMaxVars) {
    throw Error(ErrorCode::InvalidArgument, "series support at most 16 variables");
  }
}

void require_compatible(const MultiSeries& a, const MultiSeries& b) {
  require_same_context(a.context(), b.context());
  if (a.nvars() != b.nvars()) throw Error(ErrorCode::MixedContext, "series in different variable counts");
}

constexpr long kExactFloor = INT32_MAX;

long lowest_valuation(const PadicScalar& c) { return c.is_zero() ? c.tracking_precision() : c.raw_valuation(); }

// Per-degree floors up to cap, kExactFloor where exact.
std::vector<long> floors_of(const MultiSeries& f, int cap) {
  std::vector<long> out(static_cast<std::size_t>(cap) + 1, kExactFloor);
  for (int n = 0; n <= cap; ++n) out[static_cast<std::size_t>(n)] = f.absent_precision(n);
  return out;
}

// Per-degree valuation lower bounds up to cap.
std::vector<long> valuations_of(const MultiSeries& f, int cap) {
  std::vector<long> out = floors_of(f, cap);
  for (const auto& t : f.terms()) {
    const int n = t.exp.degree();
    if (n <= cap) out[static_cast<std::size_t>(n)] = std::min(out[static_cast<std::size_t>(n)], lowest_valuation(t.coeff));
  }
  return out;
}

}  // namespace

Exponent Exponent::from_vector(const std::vector<int>& exps) {
  if (exps.size() > static_cast<std::size_t>(kMaxVars)) throw Error(ErrorCode::InvalidArgument, "too many variables");
  ExponentKey key = 0;
  int total = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 0 || exps[i] > 255) throw Error(ErrorCode::InvalidArgument, "exponent out of range");
    total += exps[i];
    key |= static_cast<ExponentKey>(exps[i]) << (8 * (kMaxVars - 1 - static_cast<int>(i)));
  }
  if (total > 255) throw Error(ErrorCode::InvalidArgument, "total degree exceeds 255");
  return Exponent(key);
}

Exponent Exponent::variable(int var, int power) { return Exponent().with(var, power); }

int Exponent::degree() const noexcept {
  return byte_sum(static_cast<std::uint64_t>(key_)) + byte_sum(static_cast<std::uint64_t>(key_ >> 64));
}

Exponent Exponent::with(int var, int value) const {
  if (var < 0 || var >= kMaxVars || value < 0 || value > 255) {
    throw Error(ErrorCode::InvalidArgument, "exponent out of range");
  }
  const int shift = 8 * (kMaxVars - 1 - var);
  ExponentKey key = key_ & ~(static_cast<ExponentKey>(0xff) << shift);
  return Exponent(key | (static_cast<ExponentKey>(value) << shift));
}

std::vector<int> Exponent::to_vector(int nvars) const {
  std::vector<int> out(static_cast<std::size_t>(nvars));
  for (int i = 0; i < nvars; ++i) out[static_cast<std::size_t>(i)] = (*this)[i];
  return out;
}

std::string Exponent::to_string(int nvars) const {
  std::string out;
  for (int i = 0; i < nvars; ++i) {
    const int e = (*this)[i];
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    out += "x" + std::to_string(i + 1);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

MultiSeries::MultiSeries(const PrecisionContext& ctx, int nvars) : ctx_(ctx), nvars_(nvars) { check_vars(nvars); }

MultiSeries MultiSeries::constant(const PrecisionContext& ctx, int nvars, const PadicScalar& c) {
  return monomial(ctx, nvars, Exponent(), c);
}

MultiSeries MultiSeries::variable(const PrecisionContext& ctx, int nvars, int var) {
  if (var < 0 || var >= nvars) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  return monomial(ctx, nvars, Exponent::variable(var), PadicScalar::from_integer(ctx, 1L));
}

MultiSeries MultiSeries::monomial(const PrecisionContext& ctx, int nvars, Exponent e, const PadicScalar& c) {
  std::vector<Term> terms;
  terms.push_back(Term{e, c});
  return from_terms(ctx, nvars, std::move(terms));
}

MultiSeries MultiSeries::from_terms(const PrecisionContext& ctx, int nvars, std::vector<Term> terms) {
  check_vars(nvars);
  const ExponentKey used_mask =
      nvars == 0 ? 0 : (~static_cast<ExponentKey>(0)) << (8 * (Exponent::kMaxVars - nvars));
  std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.exp < b.exp; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    require_same_context(ctx, t.coeff.context());
    if ((t.exp.key() & ~used_mask) != 0) throw Error(ErrorCode::InvalidArgument, "exponent uses an undeclared variable");
    if (t.exp.degree() > ctx.degree_cap) continue;
    if (!out.empty() && out.back().exp == t.exp) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::vector<Term> kept;
  kept.reserve(out.size());
  std::vector<std::pair<int, long>> lost;
  for (auto& t : out) {
    if (!t.coeff.is_zero()) {
      kept.push_back(std::move(t));
    } else if (!t.coeff.is_exact()) {
      lost.emplace_back(t.exp.degree(), t.coeff.tracking_precision());
    }
  }
  MultiSeries result = MultiSeriesBuilder::adopt(ctx, nvars, std::move(kept));
  for (const auto& [degree, k] : lost) result.lower_floor(degree, k);
  return result;
}

void MultiSeries::lower_floor(int degree, long k) {
  if (k >= kExactFloor || degree > ctx_.degree_cap) return;
  if (k < 1) {
    throw Error(ErrorCode::PrecisionExhausted,
                "coefficients of degree " + std::to_string(degree) + " are no longer known (" + ctx_.to_string() + ")");
  }
  if (floor_.empty()) floor_.assign(static_cast<std::size_t>(ctx_.degree_cap) + 1, INT32_MAX);
  int& slot = floor_[static_cast<std::size_t>(degree)];
  slot = std::min<int>(slot, static_cast<int>(std::min<long>(k, ctx_.precision)));
}

void MultiSeries::impose_floor(const std::vector<long>& floor) {
  auto at = [&](int n) { return n < static_cast<int>(floor.size()) ? floor[static_cast<std::size_t>(n)] : kExactFloor; };
  std::vector<Term> kept;
  kept.reserve(terms_.size());
  std::vector<std::pair<int, long>> lost;
  for (auto& t : terms_) {
    const int n = t.exp.degree();
    const long k = at(n);
    if (k < kExactFloor && k < t.coeff.tracking_precision()) {
      if (k < 1) lower_floor(n, k);
      t.coeff = t.coeff.with_precision(static_cast<int>(k));
      if (t.coeff.is_zero()) {
        lost.emplace_back(n, k);
        continue;
      }
    }
    kept.push_back(std::move(t));
  }
  terms_ = std::move(kept);
  for (const auto& [degree, k] : lost) lower_floor(degree, k);
  for (std::size_t n = 0; n < floor.size(); ++n) lower_floor(static_cast<int>(n), floor[n]);
}

int MultiSeries::absent_precision(int degree) const noexcept {
  if (floor_.empty() || degree < 0 || degree > ctx_.degree_cap) return INT32_MAX;
  return floor_[static_cast<std::size_t>(degree)];
}

int MultiSeries::degree_valuation_bound(int degree) const noexcept {
  long out = absent_precision(degree);
  for (const auto& t : terms_) {
    if (t.exp.degree() == degree) out = std::min(out, lowest_valuation(t.coeff));
  }
  return static_cast<int>(std::min<long>(out, INT32_MAX));
}

PadicScalar MultiSeries::coeff(Exponent e) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e, [](const Term& t, Exponent x) { return t.exp < x; });
  if (it != terms_.end() && it->exp == e) return it->coeff;
  const int k = absent_precision(e.degree());
  return k == INT32_MAX ? PadicScalar(ctx_) : PadicScalar::zero(ctx_, k);
}

int MultiSeries::min_degree() const noexcept {
  int out = INT32_MAX;
  for (const auto& t : terms_) out = std::min(out, t.exp.degree());
  return out;
}

int MultiSeries::max_degree() const noexcept {
  int out = -1;
  for (const auto& t : terms_) out = std::max(out, t.exp.degree());
  return out;
}

int MultiSeries::min_precision() const noexcept {
  int out = ctx_.precision;
  for (const auto& t : terms_) out = std::min(out, t.coeff.precision());
  for (int k : floor_) out = std::min(out, k);
  return out;
}

int MultiSeries::min_valuation() const noexcept {
  int out = INT32_MAX;
  for (const auto& t : terms_) out = std::min(out, t.coeff.raw_valuation());
  return out;
}

MultiSeries MultiSeries::operator-() const {
  MultiSeries out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

namespace {

template <typename Combine>
MultiSeries merge(const MultiSeries& a, const MultiSeries& b, Combine combine) {
  require_compatible(a, b);
  const PrecisionContext& ctx = a.context();
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  std::vector<std::pair<int, long>> lost;
  while (ia != a.terms().end() || ib != b.terms().end()) {
    if (ib == b.terms().end() || (ia != a.terms().end() && ia->exp < ib->exp)) {
      out.push_back(Term{ia->exp, combine(ia->coeff, b.coeff(ia->exp))});
      ++ia;
    } else if (ia == a.terms().end() || ib->exp < ia->exp) {
      out.push_back(Term{ib->exp, combine(a.coeff(ib->exp), ib->coeff)});
      ++ib;
    } else {
      out.push_back(Term{ia->exp, combine(ia->coeff, ib->coeff)});
      ++ia;
      ++ib;
    }
    if (out.back().coeff.is_zero()) {
      if (!out.back().coeff.is_exact()) lost.emplace_back(out.back().exp.degree(), out.back().coeff.tracking_precision());
      out.pop_back();
    }
  }
  MultiSeries result = MultiSeriesBuilder::adopt(ctx, a.nvars(), std::move(out));
  if (a.has_absent_floor() || b.has_absent_floor()) {
    for (int n = 0; n <= ctx.degree_cap; ++n) {
      MultiSeriesBuilder::lower_floor(result, n, std::min(a.absent_precision(n), b.absent_precision(n)));
    }
  }
  for (const auto& [degree, k] : lost) MultiSeriesBuilder::lower_floor(result, degree, k);
  return result;
}

}  // namespace

MultiSeries operator+(const MultiSeries& a, const MultiSeries& b) {
  return merge(a, b, [](const PadicScalar& x, const PadicScalar& y) { return x + y; });
}

MultiSeries operator-(const MultiSeries& a, const MultiSeries& b) {
  return merge(a, b, [](const PadicScalar& x, const PadicScalar& y) { return x - y; });
}

MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) { return multiply(a, b, a.context().degree_cap); }

namespace {
MultiSeries multiply_terms(const MultiSeries& a, const MultiSeries& b, int cap);
}  // namespace

MultiSeries operator*(const PadicScalar& c, const MultiSeries& f) {
  require_same_context(c.context(), f.context());
  std::vector<Term> out;
  out.reserve(f.size());
  std::vector<std::pair<int, long>> lost;
  for (const auto& t : f.terms()) {
    PadicScalar x = c * t.coeff;
    if (!x.is_zero()) {
      out.push_back(Term{t.exp, std::move(x)});
    } else if (!x.is_exact()) {
      lost.emplace_back(t.exp.degree(), x.tracking_precision());
    }
  }
  MultiSeries result = MultiSeriesBuilder::adopt(f.context(), f.nvars(), std::move(out));
  if (f.has_absent_floor() && !(c.is_zero() && c.is_exact())) {
    const long v = lowest_valuation(c);
    for (int n = 0; n <= f.context().degree_cap; ++n) {
      const long k = f.absent_precision(n);
      if (k < kExactFloor) MultiSeriesBuilder::lower_floor(result, n, k + v);
    }
  }
  for (const auto& [degree, k] : lost) MultiSeriesBuilder::lower_floor(result, degree, k);
  return result;
}

MultiSeries multiply(const MultiSeries& a, const MultiSeries& b, int cap) {
  require_compatible(a, b);
  const PrecisionContext& ctx = a.context();
  cap = std::min(cap, ctx.degree_cap);
  MultiSeries out = a.is_zero() || b.is_zero() ? MultiSeries(ctx, a.nvars()) : multiply_terms(a, b, cap);
  if (a.has_absent_floor() || b.has_absent_floor()) {
    const std::vector<long> fa = floors_of(a, cap);
    const std::vector<long> fb = floors_of(b, cap);
    const std::vector<long> va = valuations_of(a, cap);
    const std::vector<long> vb = valuations_of(b, cap);
    std::vector<long> floor(static_cast<std::size_t>(cap) + 1, kExactFloor);
    for (int i = 0; i <= cap; ++i) {
      for (int j = 0; i + j <= cap; ++j) {
        const auto si = static_cast<std::size_t>(i);
        const auto sj = static_cast<std::size_t>(j);
        long k = kExactFloor;
        if (fa[si] < kExactFloor && vb[sj] < kExactFloor) k = std::min(k, fa[si] + vb[sj]);
        if (fb[sj] < kExactFloor && va[si] < kExactFloor) k = std::min(k, fb[sj] + va[si]);
        floor[si + sj] = std::min(floor[si + sj], k);
      }
    }
    MultiSeriesBuilder::impose_floor(out, floor);
  }
  return out;
}

namespace {

MultiSeries multiply_terms(const MultiSeries& a, const MultiSeries& b, int cap) {
  const PrecisionContext& ctx = a.context();
  const MultiSeries& small = a.size() <= b.size() ? a : b;
  const MultiSeries& large = a.size() <= b.size() ? b : a;
  std::vector<std::pair<int, const Term*>> by_degree;
  by_degree.reserve(large.size());
  for (const auto& t : large.terms()) by_degree.emplace_back(t.exp.degree(), &t);
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  detail::AccumulatorTable table(small.size() + large.size());
  for (const auto& s : small.terms()) {
    const int budget = cap - s.exp.degree();
    for (const auto& [deg, t] : by_degree) {
      if (deg > budget) break;
      detail::add_product(table.at((s.exp + t->exp).key()), s.coeff, t->coeff, ctx.p);
    }
  }
  return table.to_series(ctx, a.nvars());
}

}  // namespace

bool operator==(const MultiSeries& a, const MultiSeries& b) {
  if (!(a.context() == b.context()) || a.nvars() != b.nvars()) return false;
  return (a - b).is_zero();
}

bool MultiSeries::identical(const MultiSeries& other) const {
  if (!(ctx_ == other.ctx_) || nvars_ != other.nvars_ || terms_.size() != other.terms_.size()) return false;
  if (floor_ != other.floor_) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!(terms_[i].exp == other.terms_[i].exp) || !terms_[i].coeff.identical(other.terms_[i].coeff)) return false;
  }
  return true;
}

MultiSeries MultiSeries::truncated(int degree) const {
  MultiSeries out(ctx_, nvars_);
  for (const auto& t : terms_) {
    if (t.exp.degree() <= degree) out.terms_.push_back(t);
  }
  for (int n = 0; n <= std::min(degree, ctx_.degree_cap) && !floor_.empty(); ++n) out.lower_floor(n, absent_precision(n));
  return out;
}

MultiSeries MultiSeries::homogeneous_part(int degree) const {
  MultiSeries out(ctx_, nvars_);
  for (const auto& t : terms_) {
    if (t.exp.degree() == degree) out.terms_.push_back(t);
  }
  out.lower_floor(degree, absent_precision(degree));
  return out;
}

MultiSeries MultiSeries::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  MultiSeries out(ctx_, nvars_);
  for (const auto& t : terms_) {
    const int e = t.exp[var];
    if (e == 0) continue;
    PadicScalar c = PadicScalar::from_integer(ctx_, static_cast<long>(e)) * t.coeff;
    if (!c.is_zero()) {
      out.terms_.push_back(Term{t.exp.with(var, e - 1), std::move(c)});
    } else if (!c.is_exact()) {
      out.lower_floor(t.exp.degree() - 1, c.tracking_precision());
    }
  }
  for (int n = 1; n <= ctx_.degree_cap && !floor_.empty(); ++n) out.lower_floor(n - 1, absent_precision(n));
  // Lowering one exponent can reorder keys only among terms that differ in that variable.
  std::sort(out.terms_.begin(), out.terms_.end(), [](const Term& a, const Term& b) { return a.exp < b.exp; });
  return out;
}

MultiSeries MultiSeries::pow(unsigned e) const {
  MultiSeries result = constant(ctx_, nvars_, PadicScalar::from_integer(ctx_, 1L));
  MultiSeries base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

MultiSeries MultiSeries::with_precision(int k) const {
  MultiSeries out(ctx_, nvars_);
  for (const auto& t : terms_) {
    PadicScalar c = t.coeff.with_precision(k);
    if (!c.is_zero()) {
      out.terms_.push_back(Term{t.exp, std::move(c)});
    } else {
      out.lower_floor(t.exp.degree(), c.tracking_precision());
    }
  }
  for (int n = 0; n <= ctx_.degree_cap && !floor_.empty(); ++n) {
    out.lower_floor(n, std::min(absent_precision(n), std::max(k, 1)));
  }
  return out;
}

MultiSeries MultiSeries::lowered(int degree, int k) const {
  MultiSeries out = *this;
  std::vector<long> floor(static_cast<std::size_t>(ctx_.degree_cap) + 1, kExactFloor);
  if (degree >= 0 && degree <= ctx_.degree_cap) floor[static_cast<std::size_t>(degree)] = k;
  out.impose_floor(floor);
  return out;
}

MultiSeries MultiSeries::mod_p() const {
  MultiSeries out(ctx_, nvars_);
  for (const auto& t : terms_) {
    if (t.coeff.raw_valuation() < 0) throw Error(ErrorCode::InvalidArgument, "reduction mod p of a non-integral series");
    const std::uint32_t r = t.coeff.residue();
    if (r != 0) out.terms_.push_back(Term{t.exp, PadicScalar::from_integer(ctx_, static_cast<long>(r))});
  }
  return out;
}

MultiSeries MultiSeries::frobenius(int q) const {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "frobenius exponent must be positive");
  MultiSeries out(ctx_, nvars_);
  for (const auto& t : terms_) {
    if (static_cast<long>(t.exp.degree()) * q > ctx_.degree_cap) continue;
    ExponentKey key = 0;
    for (int i = 0; i < nvars_; ++i) {
      key |= static_cast<ExponentKey>(t.exp[i] * q) << (8 * (Exponent::kMaxVars - 1 - i));
    }
    out.terms_.push_back(Term{Exponent(key), t.coeff});
  }
  for (int n = 0; n * q <= ctx_.degree_cap && !floor_.empty(); ++n) out.lower_floor(n * q, absent_precision(n));
  return out;
}

MultiSeries MultiSeries::embed(int total_vars, int offset) const {
  if (offset < 0 || offset + nvars_ > total_vars) throw Error(ErrorCode::InvalidArgument, "embedding out of range");
  std::vector<int> target(static_cast<std::size_t>(nvars_));
  std::iota(target.begin(), target.end(), offset);
  return remap(total_vars, target);
}

MultiSeries MultiSeries::remap(int total_vars, const std::vector<int>& target_of_var) const {
  check_vars(total_vars);
  if (target_of_var.size() != static_cast<std::size_t>(nvars_)) {
    throw Error(ErrorCode::InvalidArgument, "remap needs one target per variable");
  }
  for (int t : target_of_var) {
    if (t < 0 || t >= total_vars) throw Error(ErrorCode::InvalidArgument, "remap target out of range");
  }
  MultiSeries out(ctx_, total_vars);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    ExponentKey key = 0;
    for (int i = 0; i < nvars_; ++i) {
      const int e = t.exp[i];
      if (e == 0) continue;
      const int shift = 8 * (Exponent::kMaxVars - 1 - target_of_var[static_cast<std::size_t>(i)]);
      key += static_cast<ExponentKey>(e) << shift;
    }
    out.terms_.push_back(Term{Exponent(key), t.coeff});
  }
  std::vector<Term> terms = std::move(out.terms_);
  MultiSeries result = from_terms(ctx_, total_vars, std::move(terms));
  for (int n = 0; n <= ctx_.degree_cap && !floor_.empty(); ++n) result.lower_floor(n, absent_precision(n));
  return result;
}

MultiSeries MultiSeries::without_variables(const std::vector<int>& vars) const {
  MultiSeries out(ctx_, nvars_);
  for (const auto& t : terms_) {
    bool keep = true;
    for (int v : vars) keep = keep && t.exp[v] == 0;
    if (keep) out.terms_.push_back(t);
  }
  out.floor_ = floor_;
  return out;
}

std::string MultiSeries::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms_) {
    out << (first ? "" : " + ") << "(" << t.coeff.to_string() << ")";
    if (t.exp.degree() > 0) out << "*" << t.exp.to_string(nvars_);
    first = false;
  }
  return out.str();
}

}  // namespace fgdyn
