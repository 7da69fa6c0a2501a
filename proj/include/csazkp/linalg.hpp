#pragma once

#include <optional>
#include <span>
#include <vector>

#include "csazkp/matrix.hpp"

namespace csazkp {

// Exact elimination kernels. Rows are cleared to integers and reduced with
// fraction-free (Bareiss) steps; pivots are taken in first-nonzero order so
// every output is a deterministic function of the input.

/// Some x with A x = b, or nullopt if inconsistent. Free variables are 0.
std::optional<RatVector> solve_linear(const RatMatrix& a, std::span<const Rational> b);

/// A^{-1}, or nullopt iff det A = 0. Throws UsageError when A is not square.
std::optional<RatMatrix> invert_matrix(const RatMatrix& a);

/// Basis of the right null space; each vector's first nonzero entry is 1.
std::vector<RatVector> kernel_basis(const RatMatrix& a);

std::size_t rank(const RatMatrix& a);
Rational determinant(const RatMatrix& a);

/// Reduced row echelon form restricted to its nonzero rows.
struct RowEchelon {
  RatMatrix reduced;                 // rank x cols
  std::vector<std::size_t> pivots;   // pivot column of each row
};

/// Only the first `pivot_limit` columns are eligible as pivots; the rest
/// are carried along (augmented columns).
RowEchelon reduced_row_echelon(const RatMatrix& a, std::size_t pivot_limit);

}  // namespace csazkp
