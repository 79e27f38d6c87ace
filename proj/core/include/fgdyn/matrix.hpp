#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgdyn/padic.hpp"

namespace fgdyn {

/// Dense row-major matrix over PadicScalar.
class PadicMatrix {
 public:
  PadicMatrix(const PrecisionContext& ctx, std::size_t rows, std::size_t cols);

  static PadicMatrix identity(const PrecisionContext& ctx, std::size_t n);
  static PadicMatrix scalar(const PrecisionContext& ctx, std::size_t n, const PadicScalar& value);
  static PadicMatrix from_integers(const PrecisionContext& ctx, const std::vector<std::vector<long>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const PrecisionContext& context() const noexcept { return ctx_; }

  PadicScalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const PadicScalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b);
  friend PadicMatrix operator+(const PadicMatrix& a, const PadicMatrix& b);
  friend PadicMatrix operator-(const PadicMatrix& a, const PadicMatrix& b);
  friend bool operator==(const PadicMatrix& a, const PadicMatrix& b);

  std::vector<PadicScalar> apply(const std::vector<PadicScalar>& v) const;
  PadicMatrix pow(unsigned long e) const;

  bool is_zero() const;
  bool is_diagonal() const;
  bool is_scalar() const;
  bool is_integral() const;

  /// Horizontal concatenation [a | b].
  static PadicMatrix hconcat(const PadicMatrix& a, const PadicMatrix& b);
  /// Block diagonal diag(a, b).
  static PadicMatrix block_diagonal(const PadicMatrix& a, const PadicMatrix& b);

  std::string to_string() const;

 private:
  PrecisionContext ctx_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<PadicScalar> data_;
};

/// Outcome of Gaussian elimination with minimal-valuation pivoting.
struct Elimination {
  bool singular = false;
  Valuation determinant_valuation;  // +inf when singular
  std::optional<PadicScalar> determinant;
};

/// Determinant valuation and value of a square matrix; singular when no pivot
/// is nonzero at its known precision.
Elimination eliminate(const PadicMatrix& m);

/// Solves m * x = rhs for square m. Returns nullopt when m is singular.
std::optional<std::vector<PadicScalar>> solve(const PadicMatrix& m, const std::vector<PadicScalar>& rhs);

/// Inverse over Q_p; nullopt when singular.
std::optional<PadicMatrix> inverse(const PadicMatrix& m);

}  // namespace fgdyn
