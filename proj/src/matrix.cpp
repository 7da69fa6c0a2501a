#include "csazkp/matrix.hpp"

#include "csazkp/errors.hpp"

namespace csazkp {

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols, RatVector entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw UsageError("matrix entry count does not match shape");
  }
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_columns(std::span<const RatVector> columns) {
  if (columns.empty()) return {};
  RatMatrix m(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

RatVector RatMatrix::column(std::size_t c) const {
  RatVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void RatMatrix::set_column(std::size_t c, std::span<const Rational> values) {
  if (values.size() != rows_) throw UsageError("column length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool RatMatrix::is_integral() const {
  for (const auto& x : data_) {
    if (x.get_den() != 1) return false;
  }
  return true;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) throw UsageError("matrix product dimension mismatch");
  const ScaledMatrix sa = to_scaled(a);
  const ScaledMatrix sb = to_scaled(b);
  ScaledMatrix out{a.rows(), b.cols(), std::vector<Integer>(a.rows() * b.cols()), sa.den * sb.den};
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& lhs = sa.at(i, k);
      if (sgn(lhs) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const Integer& rhs = sb.at(k, j);
        if (sgn(rhs) == 0) continue;
        mpz_addmul(out.num[i * b.cols() + j].get_mpz_t(), lhs.get_mpz_t(), rhs.get_mpz_t());
      }
    }
  }
  return from_scaled(out);
}

RatVector operator*(const RatMatrix& a, std::span<const Rational> x) {
  if (a.cols() != x.size()) throw UsageError("matrix-vector dimension mismatch");
  const ScaledMatrix sa = to_scaled(a);
  const ScaledVector sx = to_scaled(x);
  std::vector<Integer> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(sx.num[k]) == 0 || sgn(sa.at(i, k)) == 0) continue;
      mpz_addmul(out[i].get_mpz_t(), sa.at(i, k).get_mpz_t(), sx.num[k].get_mpz_t());
    }
  }
  return from_scaled(out, sa.den * sx.den);
}

ScaledMatrix to_scaled(const RatMatrix& m) {
  ScaledVector v = to_scaled(std::span<const Rational>(m.entries()));
  return ScaledMatrix{m.rows(), m.cols(), std::move(v.num), std::move(v.den)};
}

RatMatrix from_scaled(const ScaledMatrix& m) {
  return RatMatrix(m.rows, m.cols, from_scaled(std::span<const Integer>(m.num), m.den));
}

}  // namespace csazkp
