#include "csazkp/linalg.hpp"

#include <utility>

#include "csazkp/errors.hpp"

namespace csazkp {
namespace {

struct IntegerEchelon {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Integer> m;
  std::vector<std::size_t> pivots;
  int sign = 1;

  Integer& at(std::size_t r, std::size_t c) { return m[r * cols + c]; }
};

// Every row is multiplied by the lcm of its denominators; this changes
// neither the row space nor the rank.
IntegerEchelon integer_rows(const RatMatrix& a) {
  IntegerEchelon e{a.rows(), a.cols(), std::vector<Integer>(a.rows() * a.cols()), {}, 1};
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::span<const Rational> row(a.entries().data() + r * a.cols(), a.cols());
    ScaledVector s = to_scaled(row);
    for (std::size_t c = 0; c < a.cols(); ++c) e.at(r, c) = std::move(s.num[c]);
  }
  return e;
}

// Bareiss elimination with column skipping. After the step on pivot (r, c)
// every remaining entry equals a minor of the original matrix, so the
// division by the previous pivot is exact.
void fraction_free_echelon(IntegerEchelon& e, std::size_t pivot_limit) {
  Integer prev = 1;
  Integer t;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_limit && r < e.rows; ++c) {
    std::size_t p = r;
    while (p < e.rows && sgn(e.at(p, c)) == 0) ++p;
    if (p == e.rows) continue;
    if (p != r) {
      for (std::size_t j = 0; j < e.cols; ++j) std::swap(e.at(p, j), e.at(r, j));
      e.sign = -e.sign;
    }
    const Integer pivot = e.at(r, c);
    for (std::size_t i = r + 1; i < e.rows; ++i) {
      const Integer lead = e.at(i, c);
      for (std::size_t j = c + 1; j < e.cols; ++j) {
        Integer& cell = e.at(i, j);
        cell *= pivot;
        mpz_submul(cell.get_mpz_t(), lead.get_mpz_t(), e.at(r, j).get_mpz_t());
        mpz_divexact(cell.get_mpz_t(), cell.get_mpz_t(), prev.get_mpz_t());
      }
      e.at(i, c) = 0;
    }
    // Rows above the pivot row are untouched; entries of later rows in
    // skipped columns are already zero.
    prev = pivot;
    e.pivots.push_back(c);
    ++r;
  }
}

}  // namespace

RowEchelon reduced_row_echelon(const RatMatrix& a, std::size_t pivot_limit) {
  if (pivot_limit > a.cols()) throw UsageError("pivot limit exceeds column count");
  IntegerEchelon e = integer_rows(a);
  fraction_free_echelon(e, pivot_limit);
  const std::size_t rank = e.pivots.size();

  RatMatrix red(rank, a.cols());
  for (std::size_t r = 0; r < rank; ++r) {
    const Integer& pivot = e.at(r, e.pivots[r]);
    for (std::size_t c = e.pivots[r]; c < a.cols(); ++c) {
      if (sgn(e.at(r, c)) != 0) red(r, c) = make_rational(e.at(r, c), pivot);
    }
  }
  // Back elimination, bottom pivot first.
  for (std::size_t r = rank; r-- > 0;) {
    const std::size_t pc = e.pivots[r];
    for (std::size_t above = 0; above < r; ++above) {
      const Rational factor = red(above, pc);
      if (sgn(factor) == 0) continue;
      for (std::size_t c = pc; c < a.cols(); ++c) {
        if (sgn(red(r, c)) != 0) red(above, c) -= factor * red(r, c);
      }
    }
  }
  return RowEchelon{std::move(red), std::move(e.pivots)};
}

std::optional<RatVector> solve_linear(const RatMatrix& a, std::span<const Rational> b) {
  if (b.size() != a.rows()) throw UsageError("solve_linear: right-hand side length mismatch");
  const std::size_t n = a.cols();
  RatMatrix aug(a.rows(), n + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n) = b[r];
  }
  const RowEchelon ech = reduced_row_echelon(aug, n + 1);
  RatVector x(n);
  for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
    if (ech.pivots[r] == n) return std::nullopt;
    x[ech.pivots[r]] = ech.reduced(r, n);
  }
  return x;
}

std::optional<RatMatrix> invert_matrix(const RatMatrix& a) {
  if (!a.is_square()) throw UsageError("invert_matrix: matrix is not square");
  const std::size_t n = a.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n + r) = 1;
  }
  const RowEchelon ech = reduced_row_echelon(aug, n);
  if (ech.pivots.size() != n) return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = ech.reduced(r, n + c);
  return inv;
}

std::vector<RatVector> kernel_basis(const RatMatrix& a) {
  const std::size_t n = a.cols();
  const RowEchelon ech = reduced_row_echelon(a, n);
  std::vector<bool> is_pivot(n, false);
  for (auto p : ech.pivots) is_pivot[p] = true;

  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    RatVector v(n);
    v[f] = 1;
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) v[ech.pivots[r]] = -ech.reduced(r, f);
    for (const auto& x : v) {
      if (sgn(x) == 0) continue;
      const Rational lead = x;
      for (auto& y : v) y /= lead;
      break;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(const RatMatrix& a) {
  IntegerEchelon e = integer_rows(a);
  fraction_free_echelon(e, a.cols());
  return e.pivots.size();
}

Rational determinant(const RatMatrix& a) {
  if (!a.is_square()) throw UsageError("determinant: matrix is not square");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  // det(A) = det(integer rows) / prod(row scale factors).
  Integer scale = 1;
  IntegerEchelon e{n, n, std::vector<Integer>(n * n), {}, 1};
  for (std::size_t r = 0; r < n; ++r) {
    std::span<const Rational> row(a.entries().data() + r * n, n);
    ScaledVector s = to_scaled(row);
    scale *= s.den;
    for (std::size_t c = 0; c < n; ++c) e.at(r, c) = std::move(s.num[c]);
  }
  fraction_free_echelon(e, n);
  if (e.pivots.size() != n) return 0;
  return make_rational(e.sign * e.at(n - 1, n - 1), scale);
}

}  // namespace csazkp
