#include "csazkp/algebra.hpp"

#include <sstream>

#include "csazkp/errors.hpp"
#include "csazkp/linalg.hpp"
#include "csazkp/rng.hpp"

namespace csazkp {
namespace {

void require_dim(const Algebra& a, const AlgElement& x, const char* what) {
  if (x.size() != a.dim()) {
    throw UsageError(std::string(what) + ": element has " + std::to_string(x.size()) +
                     " coordinates, algebra has dimension " + std::to_string(a.dim()));
  }
}

struct Failure {
  std::size_t i, j, k, l;
};

// (b_i b_j) b_k against b_i (b_j b_k) on integer numerators; both sides carry
// the same denominator den^2, so it cancels.
std::optional<Failure> first_associativity_failure(std::size_t m, const std::vector<Integer>& g) {
  auto at = [&](std::size_t i, std::size_t j, std::size_t k) -> const Integer& { return g[(i * m + j) * m + k]; };

  std::vector<std::vector<std::size_t>> support(m * m);
  for (std::size_t ij = 0; ij < m * m; ++ij)
    for (std::size_t s = 0; s < m; ++s)
      if (sgn(g[ij * m + s]) != 0) support[ij].push_back(s);

  std::vector<Integer> lhs(m), rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& sij = support[i * m + j];
      for (std::size_t k = 0; k < m; ++k) {
        for (auto& v : lhs) v = 0;
        for (auto& v : rhs) v = 0;
        for (std::size_t s : sij) {
          const Integer& c = at(i, j, s);
          for (std::size_t l = 0; l < m; ++l) {
            const Integer& d = at(s, k, l);
            if (sgn(d) != 0) mpz_addmul(lhs[l].get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
          }
        }
        for (std::size_t s : support[j * m + k]) {
          const Integer& c = at(j, k, s);
          for (std::size_t l = 0; l < m; ++l) {
            const Integer& d = at(i, s, l);
            if (sgn(d) != 0) mpz_addmul(rhs[l].get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
          }
        }
        for (std::size_t l = 0; l < m; ++l) {
          if (lhs[l] != rhs[l]) return Failure{i, j, k, l};
        }
      }
    }
  }
  return std::nullopt;
}

// Solves e b_j = b_j and b_j e = b_j for all j.
std::optional<RatVector> solve_identity(std::size_t m, const RatVector& gamma) {
  RatMatrix sys(2 * m * m, m);
  RatVector rhs(2 * m * m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t left_row = j * m + k;
      const std::size_t right_row = m * m + j * m + k;
      for (std::size_t i = 0; i < m; ++i) {
        sys(left_row, i) = gamma[(i * m + j) * m + k];
        sys(right_row, i) = gamma[(j * m + i) * m + k];
      }
      if (j == k) rhs[left_row] = rhs[right_row] = 1;
    }
  }
  // A two-sided identity is unique whenever it exists, so any solution is it.
  return solve_linear(sys, rhs);
}

std::vector<Integer> multiply_scaled(std::size_t m, const std::vector<Integer>& g, const ScaledVector& x,
                                     const ScaledVector& y) {
  std::vector<Integer> out(m);
  Integer prod;
  for (std::size_t i = 0; i < m; ++i) {
    if (sgn(x.num[i]) == 0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (sgn(y.num[j]) == 0) continue;
      prod = x.num[i] * y.num[j];
      const Integer* row = &g[(i * m + j) * m];
      for (std::size_t k = 0; k < m; ++k) {
        if (sgn(row[k]) != 0) mpz_addmul(out[k].get_mpz_t(), prod.get_mpz_t(), row[k].get_mpz_t());
      }
    }
  }
  return out;
}

// S[i][j][.] = sum_{a,b} F_ai F_bj G[a][b][.] for integer F, in O(m^4).
// Visits (i, j) column-major in j so callers can stop early.
template <typename Visit>
bool for_each_transformed_product(std::size_t m, const std::vector<Integer>& g, const ScaledMatrix& f, Visit visit) {
  std::vector<Integer> u(m * m);  // u[a][l] = sum_b F_bj G[a][b][l]
  std::vector<Integer> s(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (auto& v : u) v = 0;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        const Integer& fb = f.at(b, j);
        if (sgn(fb) == 0) continue;
        const Integer* row = &g[(a * m + b) * m];
        for (std::size_t l = 0; l < m; ++l) {
          if (sgn(row[l]) != 0) mpz_addmul(u[a * m + l].get_mpz_t(), fb.get_mpz_t(), row[l].get_mpz_t());
        }
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (auto& v : s) v = 0;
      for (std::size_t a = 0; a < m; ++a) {
        const Integer& fa = f.at(a, i);
        if (sgn(fa) == 0) continue;
        for (std::size_t l = 0; l < m; ++l) {
          if (sgn(u[a * m + l]) != 0) mpz_addmul(s[l].get_mpz_t(), fa.get_mpz_t(), u[a * m + l].get_mpz_t());
        }
      }
      if (!visit(i, j, s)) return false;
    }
  }
  return true;
}

}  // namespace

Algebra Algebra::from_structure_constants(std::size_t dim, RatVector gamma) {
  if (dim == 0) throw UsageError("algebra dimension must be positive");
  if (gamma.size() != dim * dim * dim) {
    throw UsageError("structure constant tensor has " + std::to_string(gamma.size()) + " entries, expected " +
                     std::to_string(dim * dim * dim));
  }
  ScaledVector scaled = to_scaled(gamma);
  if (auto fail = first_associativity_failure(dim, scaled.num)) {
    std::ostringstream msg;
    msg << "associativity fails at (i,j,k,l) = (" << fail->i << "," << fail->j << "," << fail->k << "," << fail->l
        << ")";
    throw StructuralError(msg.str());
  }
  auto e = solve_identity(dim, gamma);
  if (!e) throw StructuralError("algebra has no two-sided identity");

  Algebra a;
  a.dim_ = dim;
  a.gamma_ = std::move(gamma);
  a.num_ = std::move(scaled.num);
  a.den_ = std::move(scaled.den);
  a.identity_ = AlgElement{std::move(*e)};
  return a;
}

AlgElement Algebra::basis_element(std::size_t i) const {
  if (i >= dim_) throw UsageError("basis index out of range");
  AlgElement e = zero();
  e.coords[i] = 1;
  return e;
}

bool is_associative(const AlgebraData& data) {
  if (data.dim == 0 || data.gamma.size() != data.dim * data.dim * data.dim) return false;
  return !first_associativity_failure(data.dim, to_scaled(data.gamma).num).has_value();
}

AlgElement apply(const Isomorphism& f, const AlgElement& x) {
  if (f.source_dim() != x.size()) throw UsageError("apply: element dimension mismatch");
  return AlgElement{f.matrix * std::span<const Rational>(x.coords)};
}

Isomorphism compose_iso(const Isomorphism& f, const Isomorphism& g) {
  if (g.target_dim() != f.source_dim()) throw UsageError("compose_iso: dimensions do not chain");
  return Isomorphism{f.matrix * g.matrix};
}

Isomorphism invert_iso(const Isomorphism& f) {
  auto inv = invert_matrix(f.matrix);
  if (!inv) throw UsageError("invert_iso: matrix is singular");
  return Isomorphism{std::move(*inv)};
}

AlgElement multiply(const Algebra& a, const AlgElement& x, const AlgElement& y) {
  require_dim(a, x, "multiply");
  require_dim(a, y, "multiply");
  const ScaledVector sx = to_scaled(x.coords);
  const ScaledVector sy = to_scaled(y.coords);
  const auto out = multiply_scaled(a.dim(), a.gamma_num(), sx, sy);
  return AlgElement{from_scaled(out, sx.den * sy.den * a.gamma_den())};
}

AlgElement add(const AlgElement& x, const AlgElement& y) {
  if (x.size() != y.size()) throw UsageError("add: dimension mismatch");
  AlgElement out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out.coords[i] += y.coords[i];
  return out;
}

AlgElement scale(const Rational& c, const AlgElement& x) {
  AlgElement out = x;
  for (auto& v : out.coords) v *= c;
  return out;
}

RatMatrix regular_representation(const Algebra& a, const AlgElement& x) {
  require_dim(a, x, "regular_representation");
  const std::size_t m = a.dim();
  const ScaledVector sx = to_scaled(x.coords);
  ScaledMatrix out{m, m, std::vector<Integer>(m * m), sx.den * a.gamma_den()};
  for (std::size_t i = 0; i < m; ++i) {
    if (sgn(sx.num[i]) == 0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        const Integer& g = a.gamma_num()[(i * m + j) * m + k];
        if (sgn(g) != 0) mpz_addmul(out.num[k * m + j].get_mpz_t(), sx.num[i].get_mpz_t(), g.get_mpz_t());
      }
    }
  }
  return from_scaled(out);
}

RatMatrix right_representation(const Algebra& a, const AlgElement& x) {
  require_dim(a, x, "right_representation");
  const std::size_t m = a.dim();
  const ScaledVector sx = to_scaled(x.coords);
  ScaledMatrix out{m, m, std::vector<Integer>(m * m), sx.den * a.gamma_den()};
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(sx.num[i]) == 0) continue;
      for (std::size_t k = 0; k < m; ++k) {
        const Integer& g = a.gamma_num()[(j * m + i) * m + k];
        if (sgn(g) != 0) mpz_addmul(out.num[k * m + j].get_mpz_t(), sx.num[i].get_mpz_t(), g.get_mpz_t());
      }
    }
  }
  return from_scaled(out);
}

Polynomial minimal_polynomial(const Algebra& a, const AlgElement& x) {
  require_dim(a, x, "minimal_polynomial");
  const std::size_t m = a.dim();
  std::vector<RatVector> powers{a.identity().coords};
  AlgElement current = a.identity();
  for (std::size_t d = 1; d <= m; ++d) {
    current = multiply(a, current, x);
    const RatMatrix stacked = RatMatrix::from_columns(powers);
    if (auto c = solve_linear(stacked, current.coords)) {
      RatVector coeffs(d + 1);
      for (std::size_t i = 0; i < d; ++i) coeffs[i] = -(*c)[i];
      coeffs[d] = 1;
      return Polynomial(std::move(coeffs));
    }
    powers.push_back(current.coords);
  }
  // m + 1 vectors in an m-dimensional space are always dependent.
  throw StructuralError("minimal_polynomial: no dependence found");
}

AlgElement evaluate(const Algebra& a, const Polynomial& p, const AlgElement& x) {
  require_dim(a, x, "evaluate");
  AlgElement acc = a.zero();
  const auto& c = p.coefficients();
  for (std::size_t k = c.size(); k-- > 0;) {
    acc = add(multiply(a, acc, x), scale(c[k], a.identity()));
  }
  return acc;
}

std::optional<AlgElement> invert_element(const Algebra& a, const AlgElement& x) {
  require_dim(a, x, "invert_element");
  auto y = solve_linear(regular_representation(a, x), a.identity().coords);
  if (!y) return std::nullopt;
  AlgElement inv{std::move(*y)};
  if (multiply(a, x, inv) != a.identity() || multiply(a, inv, x) != a.identity()) return std::nullopt;
  return inv;
}

Algebra Algebra::trusted(std::size_t dim, RatVector gamma, AlgElement identity) {
  ScaledVector scaled = to_scaled(gamma);
  Algebra a;
  a.dim_ = dim;
  a.gamma_ = std::move(gamma);
  a.num_ = std::move(scaled.num);
  a.den_ = std::move(scaled.den);
  a.identity_ = std::move(identity);
  return a;
}

Presentation change_basis(const Algebra& a, const RatMatrix& t) {
  const std::size_t m = a.dim();
  if (t.rows() != m || t.cols() != m) throw UsageError("change_basis: basis matrix must be dim x dim");
  auto t_inv = invert_matrix(t);
  if (!t_inv) throw UsageError("change_basis: basis matrix is singular");

  // gamma'_{ij.} = T^{-1} (c_i c_j) with c_i c_j = sum_{a,b} T_ai T_bj gamma_ab.
  const ScaledMatrix st = to_scaled(t);
  const ScaledMatrix si = to_scaled(*t_inv);
  std::vector<Integer> out(m * m * m);
  for_each_transformed_product(m, a.gamma_num(), st, [&](std::size_t i, std::size_t j, const std::vector<Integer>& s) {
    Integer* dst = &out[(i * m + j) * m];
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t l = 0; l < m; ++l) {
        if (sgn(s[l]) != 0 && sgn(si.at(k, l)) != 0)
          mpz_addmul(dst[k].get_mpz_t(), si.at(k, l).get_mpz_t(), s[l].get_mpz_t());
      }
    }
    return true;
  });
  const Integer den = si.den * st.den * st.den * a.gamma_den();
  Isomorphism iso{std::move(*t_inv)};
  AlgElement one = apply(iso, a.identity());
  Algebra b = Algebra::trusted(m, from_scaled(out, den), std::move(one));
  return Presentation{std::move(b), std::move(iso)};
}

std::optional<Presentation> conjugation_isomorphism(const Algebra& a, const AlgElement& r) {
  require_dim(a, r, "conjugation_isomorphism");
  auto r_inv = invert_element(a, r);
  if (!r_inv) return std::nullopt;
  // New basis c_i = r^{-1} b_i r has the same multiplication table, and the
  // coordinate map is the inverse of the basis matrix, x -> r x r^{-1}.
  return Presentation{a, Isomorphism{regular_representation(a, r) * right_representation(a, *r_inv)}};
}

bool verify_isomorphism(const Algebra& a, const Algebra& b, const Isomorphism& f) {
  const std::size_t m = a.dim();
  if (b.dim() != m || f.matrix.rows() != m || f.matrix.cols() != m) return false;
  if (apply(f, a.identity()) != b.identity()) return false;

  // f(b_i) f(b_j) = S_ij / (dF^2 DB) and f(b_i b_j) = F_num gammaA_ij / (dF DA).
  const ScaledMatrix sf = to_scaled(f.matrix);
  const Integer lhs_scale = a.gamma_den();
  const Integer rhs_scale = sf.den * b.gamma_den();
  std::vector<Integer> lhs(m), rhs(m);
  const bool multiplicative =
      for_each_transformed_product(m, b.gamma_num(), sf, [&](std::size_t i, std::size_t j, const std::vector<Integer>& s) {
        const Integer* g = &a.gamma_num()[(i * m + j) * m];
        for (std::size_t r = 0; r < m; ++r) {
          rhs[r] = 0;
          for (std::size_t k = 0; k < m; ++k) {
            if (sgn(g[k]) != 0 && sgn(sf.at(r, k)) != 0)
              mpz_addmul(rhs[r].get_mpz_t(), sf.at(r, k).get_mpz_t(), g[k].get_mpz_t());
          }
          lhs[r] = s[r] * lhs_scale;
          if (lhs[r] != rhs[r] * rhs_scale) return false;
        }
        return true;
      });
  if (!multiplicative) return false;
  return rank(f.matrix) == m;
}

Algebra tensor_product(const Algebra& a, const Algebra& b) {
  const std::size_t ma = a.dim();
  const std::size_t mb = b.dim();
  const std::size_t m = ma * mb;
  RatVector gamma(m * m * m);
  for (std::size_t i = 0; i < ma; ++i)
    for (std::size_t j = 0; j < ma; ++j)
      for (std::size_t k = 0; k < ma; ++k) {
        const Rational& ga = a.gamma(i, j, k);
        if (sgn(ga) == 0) continue;
        for (std::size_t p = 0; p < mb; ++p)
          for (std::size_t q = 0; q < mb; ++q)
            for (std::size_t r = 0; r < mb; ++r) {
              const Rational& gb = b.gamma(p, q, r);
              if (sgn(gb) == 0) continue;
              const std::size_t row = i * mb + p;
              const std::size_t col = j * mb + q;
              const std::size_t out = k * mb + r;
              gamma[(row * m + col) * m + out] = ga * gb;
            }
      }
  return new_algebra(m, std::move(gamma));
}

ScaledAlgebra integral_scaling(const Algebra& a) {
  const Integer n = a.gamma_den();
  if (n == 1) return ScaledAlgebra{a, Integer(1)};
  // (N b_i)(N b_j) = N sum_k gamma_ijk (N b_k)
  RatVector gamma = a.structure_constants();
  for (auto& g : gamma) g *= n;
  return ScaledAlgebra{new_algebra(a.dim(), std::move(gamma)), n};
}

Isomorphism scaling_isomorphism(std::size_t dim, const Integer& scale) {
  RatMatrix m = RatMatrix::identity(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = make_rational(1, scale);
  return Isomorphism{std::move(m)};
}

AlgElement random_element(const Algebra& a, long height, Rng& rng) {
  if (height < 1) throw UsageError("random_element: height must be at least 1");
  AlgElement x = a.zero();
  for (auto& c : x.coords) c = static_cast<long>(rng.uniform_int(-height, height));
  return x;
}

AlgElement random_invertible_element(const Algebra& a, long height, Rng& rng, int retry_cap, int* attempts) {
  for (int attempt = 1; attempt <= retry_cap; ++attempt) {
    AlgElement r = random_element(a, height, rng);
    if (rank(regular_representation(a, r)) == a.dim()) {
      if (attempts != nullptr) *attempts = attempt;
      return r;
    }
  }
  throw RandomnessError("no invertible element after " + std::to_string(retry_cap) + " draws");
}

RatMatrix random_invertible_matrix(std::size_t n, long height, Rng& rng, int retry_cap) {
  if (height < 1) throw UsageError("random_invertible_matrix: height must be at least 1");
  for (int attempt = 0; attempt < retry_cap; ++attempt) {
    RatMatrix t(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) t(r, c) = static_cast<long>(rng.uniform_int(-height, height));
    if (rank(t) == n) return t;
  }
  throw RandomnessError("no invertible matrix after " + std::to_string(retry_cap) + " draws");
}

RatMatrix random_unimodular_matrix(std::size_t n, long bound, Rng& rng, int retry_cap) {
  if (bound < 1) throw UsageError("random_unimodular_matrix: bound must be at least 1");
  for (int attempt = 0; attempt < retry_cap; ++attempt) {
    // Product of n random elementary operations row_i += +-row_j, plus a
    // random sign per row; determinant stays +-1.
    std::vector<long> u(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) u[i * n + i] = rng.bit() ? 1 : -1;
    bool within = true;
    for (std::size_t step = 0; step < 2 * n && n > 1 && within; ++step) {
      const auto i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
      auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 2));
      if (j >= i) ++j;
      const long s = rng.bit() ? 1 : -1;
      for (std::size_t c = 0; c < n; ++c) {
        u[i * n + c] += s * u[j * n + c];
        if (u[i * n + c] > bound || u[i * n + c] < -bound) within = false;
      }
    }
    if (!within) continue;
    RatMatrix t(n, n);
    for (std::size_t k = 0; k < n * n; ++k) t(k / n, k % n) = u[k];
    return t;
  }
  throw RandomnessError("no bounded unimodular matrix after " + std::to_string(retry_cap) + " draws");
}

Presentation random_presentation(const Algebra& a, long height, Rng& rng) {
  const AlgElement r = random_invertible_element(a, height, rng);
  auto conj = conjugation_isomorphism(a, r);
  if (!conj) throw RandomnessError("conjugating element lost invertibility");
  const RatMatrix t = random_invertible_matrix(a.dim(), height, rng);
  Presentation basis = change_basis(conj->algebra, t);
  return Presentation{std::move(basis.algebra), compose_iso(basis.iso, conj->iso)};
}

Presentation random_unimodular_presentation(const Algebra& a, long bound, Rng& rng) {
  const RatMatrix iso = random_unimodular_matrix(a.dim(), bound, rng);
  auto t = invert_matrix(iso);
  if (!t) throw RandomnessError("unimodular sample was singular");
  Presentation p = change_basis(a, *t);
  return p;  // p.iso == iso
}

std::size_t center_dimension(const Algebra& a) {
  const std::size_t m = a.dim();
  RatMatrix sys(m * m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < m; ++i) sys(j * m + k, i) = a.gamma(i, j, k) - a.gamma(j, i, k);
  return m - rank(sys);
}

}  // namespace csazkp
