#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgdyn/matrix.hpp"
#include "fgdyn/series.hpp"

namespace fgdyn {

/// An n-tuple of series in the same m variables.
class TupleSeries {
 public:
  TupleSeries(const PrecisionContext& ctx, int nvars, int ncomponents);
  explicit TupleSeries(std::vector<MultiSeries> components);

  /// (x1, ..., xd).
  static TupleSeries identity(const PrecisionContext& ctx, int d);
  /// Components A * (x1, ..., xm)^T.
  static TupleSeries linear(const PadicMatrix& a);

  const PrecisionContext& context() const noexcept { return ctx_; }
  int nvars() const noexcept { return nvars_; }
  int size() const noexcept { return static_cast<int>(components_.size()); }
  const MultiSeries& operator[](int i) const { return components_.at(static_cast<std::size_t>(i)); }
  MultiSeries& operator[](int i) { return components_.at(static_cast<std::size_t>(i)); }
  const std::vector<MultiSeries>& components() const noexcept { return components_; }

  friend TupleSeries operator+(const TupleSeries& a, const TupleSeries& b);
  friend TupleSeries operator-(const TupleSeries& a, const TupleSeries& b);
  friend TupleSeries operator*(const PadicScalar& c, const TupleSeries& f);
  /// Left multiplication of the column of components by a matrix.
  friend TupleSeries operator*(const PadicMatrix& a, const TupleSeries& f);
  friend bool operator==(const TupleSeries& a, const TupleSeries& b);
  bool identical(const TupleSeries& other) const;

  bool is_zero() const;
  bool has_zero_constant_term() const;
  int min_precision() const;
  int min_valuation() const;
  TupleSeries truncated(int degree) const;
  TupleSeries homogeneous_part(int degree) const;
  TupleSeries with_precision(int k) const;
  TupleSeries mod_p() const;
  TupleSeries embed(int total_vars, int offset) const;
  TupleSeries remap(int total_vars, const std::vector<int>& target_of_var) const;
  /// Components of a followed by components of b.
  static TupleSeries concat(const TupleSeries& a, const TupleSeries& b);

  /// Lowest degree and exponent at which a component is nonzero, if any.
  struct Witness {
    int degree;
    int component;
    Exponent exp;
    std::string to_string(int nvars) const;
  };
  std::optional<Witness> first_nonzero() const;

  std::string to_string() const;

 private:
  PrecisionContext ctx_;
  int nvars_;
  std::vector<MultiSeries> components_;
};

/// f o g: g's components are substituted for f's variables in order.
/// The result is truncated at total degree cap (defaults to D).
/// Throws NonzeroConstantTerm when some g_i(0) != 0.
TupleSeries compose(const TupleSeries& f, const TupleSeries& g, int cap = -1);
MultiSeries compose(const MultiSeries& f, const TupleSeries& g, int cap = -1);

/// J0(h) = [d h_i / d x_j](0).
PadicMatrix jacobian_at_zero(const TupleSeries& h);
/// Columns [first, first + count) of J0(h): the partial Jacobian of one variable block.
PadicMatrix jacobian_block_at_zero(const TupleSeries& h, int first, int count);
/// Symbolic Jacobian; entry (i, j) is d h_i / d x_j.
std::vector<std::vector<MultiSeries>> jacobian(const TupleSeries& h);

/// h^{-1} with h o h^{-1} = identity = h^{-1} o h mod degree D+1, built by
/// degree-by-degree correction. Throws NotInvertible unless J0(h) is an
/// integral matrix with unit determinant.
TupleSeries compositional_inverse(const TupleSeries& h);

/// Coefficient of x^I in component t.
PadicScalar coeff_extract(const TupleSeries& f, Exponent I, int t);

}  // namespace fgdyn
