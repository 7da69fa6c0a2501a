#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "csazkp/rational.hpp"

namespace csazkp {

/// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  RatMatrix(std::size_t rows, std::size_t cols, RatVector entries);

  static RatMatrix identity(std::size_t n);
  static RatMatrix from_columns(std::span<const RatVector> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const RatVector& entries() const noexcept { return data_; }
  RatVector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const Rational> values);

  RatMatrix transpose() const;
  bool is_integral() const;

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  RatVector data_;
};

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatVector operator*(const RatMatrix& a, std::span<const Rational> x);

/// A matrix over one common positive denominator; the integer kernels of the
/// algebra layer work on this form to avoid per-entry gcds.
struct ScaledMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Integer> num;
  Integer den{1};

  const Integer& at(std::size_t r, std::size_t c) const { return num[r * cols + c]; }
};

ScaledMatrix to_scaled(const RatMatrix& m);
RatMatrix from_scaled(const ScaledMatrix& m);

}  // namespace csazkp
