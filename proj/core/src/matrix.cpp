#include "fgdyn/matrix.hpp"

#include <sstream>

namespace fgdyn {

PadicMatrix::PadicMatrix(const PrecisionContext& ctx, std::size_t rows, std::size_t cols)
    : ctx_(ctx), rows_(rows), cols_(cols), data_(rows * cols, PadicScalar(ctx)) {}

PadicMatrix PadicMatrix::identity(const PrecisionContext& ctx, std::size_t n) {
  return scalar(ctx, n, PadicScalar::from_integer(ctx, 1L));
}

PadicMatrix PadicMatrix::scalar(const PrecisionContext& ctx, std::size_t n, const PadicScalar& value) {
  PadicMatrix m(ctx, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = value;
  return m;
}

PadicMatrix PadicMatrix::from_integers(const PrecisionContext& ctx, const std::vector<std::vector<long>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  PadicMatrix m(ctx, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error(ErrorCode::InvalidArgument, "ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = PadicScalar::from_integer(ctx, rows[i][j]);
  }
  return m;
}

PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b) {
  require_same_context(a.ctx_, b.ctx_);
  if (a.cols_ != b.rows_) throw Error(ErrorCode::InvalidArgument, "matrix shape mismatch in product");
  PadicMatrix out(a.ctx_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) {
      PadicScalar acc(a.ctx_);
      for (std::size_t k = 0; k < a.cols_; ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

PadicMatrix operator+(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorCode::InvalidArgument, "matrix shape mismatch");
  PadicMatrix out = a;
  for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

PadicMatrix operator-(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorCode::InvalidArgument, "matrix shape mismatch");
  PadicMatrix out = a;
  for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

bool operator==(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || !(a.ctx_ == b.ctx_)) return false;
  for (std::size_t i = 0; i < a.data_.size(); ++i) {
    if (a.data_[i] != b.data_[i]) return false;
  }
  return true;
}

std::vector<PadicScalar> PadicMatrix::apply(const std::vector<PadicScalar>& v) const {
  if (v.size() != cols_) throw Error(ErrorCode::InvalidArgument, "vector length mismatch");
  std::vector<PadicScalar> out(rows_, PadicScalar(ctx_));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) out[i] += (*this)(i, k) * v[k];
  }
  return out;
}

PadicMatrix PadicMatrix::pow(unsigned long e) const {
  if (rows_ != cols_) throw Error(ErrorCode::InvalidArgument, "power of a non-square matrix");
  PadicMatrix result = identity(ctx_, rows_);
  PadicMatrix base = *this;
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

bool PadicMatrix::is_zero() const {
  for (const auto& x : data_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

bool PadicMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (i != j && !(*this)(i, j).is_zero()) return false;
    }
  }
  return true;
}

bool PadicMatrix::is_scalar() const {
  if (rows_ != cols_ || !is_diagonal()) return false;
  for (std::size_t i = 1; i < rows_; ++i) {
    if ((*this)(i, i) != (*this)(0, 0)) return false;
  }
  return true;
}

bool PadicMatrix::is_integral() const {
  for (const auto& x : data_) {
    if (!x.is_zero() && !x.is_integral()) return false;
  }
  return true;
}

PadicMatrix PadicMatrix::hconcat(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.rows_ != b.rows_) throw Error(ErrorCode::InvalidArgument, "hconcat row mismatch");
  PadicMatrix out(a.ctx_, a.rows_, a.cols_ + b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < a.cols_; ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols_; ++j) out(i, a.cols_ + j) = b(i, j);
  }
  return out;
}

PadicMatrix PadicMatrix::block_diagonal(const PadicMatrix& a, const PadicMatrix& b) {
  PadicMatrix out(a.ctx_, a.rows_ + b.rows_, a.cols_ + b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < a.cols_; ++j) out(i, j) = a(i, j);
  }
  for (std::size_t i = 0; i < b.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) out(a.rows_ + i, a.cols_ + j) = b(i, j);
  }
  return out;
}

std::string PadicMatrix::to_string() const {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    out << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) out << (j ? ", " : "") << (*this)(i, j).to_string();
  }
  out << "]";
  return out.str();
}

namespace {

// Row-reduces [m | rhs] in place; returns false on a zero pivot column.
bool reduce(PadicMatrix& m, std::vector<std::vector<PadicScalar>>& rhs, PadicScalar& det) {
  const std::size_t n = m.rows();
  const PrecisionContext& ctx = m.context();
  det = PadicScalar::from_integer(ctx, 1L);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    int best = PadicScalar::kInfiniteValuation;
    for (std::size_t r = col; r < n; ++r) {
      const PadicScalar& x = m(r, col);
      if (!x.is_zero() && x.raw_valuation() < best) {
        best = x.raw_valuation();
        pivot = r;
      }
    }
    if (pivot == n) return false;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(pivot, j), m(col, j));
      for (auto& column : rhs) std::swap(column[pivot], column[col]);
      det = -det;
    }
    const PadicScalar inv = m(col, col).inverse();
    det *= m(col, col);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m(r, col).is_zero()) continue;
      const PadicScalar factor = m(r, col) * inv;
      for (std::size_t j = col; j < n; ++j) m(r, j) -= factor * m(col, j);
      for (auto& column : rhs) column[r] -= factor * column[col];
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    const PadicScalar inv = m(r, r).inverse();
    for (auto& column : rhs) column[r] = column[r] * inv;
  }
  return true;
}

}  // namespace

Elimination eliminate(const PadicMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidArgument, "elimination of a non-square matrix");
  PadicMatrix work = m;
  std::vector<std::vector<PadicScalar>> none;
  PadicScalar det(m.context());
  Elimination out;
  if (!reduce(work, none, det)) {
    out.singular = true;
    out.determinant_valuation = Valuation::infinity();
    return out;
  }
  out.determinant_valuation = Valuation(static_cast<std::int64_t>(det.raw_valuation()));
  out.determinant = det;
  return out;
}

std::optional<std::vector<PadicScalar>> solve(const PadicMatrix& m, const std::vector<PadicScalar>& rhs) {
  if (m.rows() != m.cols() || rhs.size() != m.rows()) throw Error(ErrorCode::InvalidArgument, "solve shape mismatch");
  PadicMatrix work = m;
  std::vector<std::vector<PadicScalar>> columns{rhs};
  PadicScalar det(m.context());
  if (!reduce(work, columns, det)) return std::nullopt;
  return columns.front();
}

std::optional<PadicMatrix> inverse(const PadicMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw Error(ErrorCode::InvalidArgument, "inverse of a non-square matrix");
  PadicMatrix work = m;
  std::vector<std::vector<PadicScalar>> columns(n, std::vector<PadicScalar>(n, PadicScalar(m.context())));
  for (std::size_t i = 0; i < n; ++i) columns[i][i] = PadicScalar::from_integer(m.context(), 1L);
  PadicScalar det(m.context());
  if (!reduce(work, columns, det)) return std::nullopt;
  PadicMatrix out(m.context(), n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) out(i, j) = columns[j][i];
  }
  return out;
}

}  // namespace fgdyn
