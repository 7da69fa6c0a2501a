#include "csazkp/construction.hpp"

#include "csazkp/errors.hpp"
#include "csazkp/linalg.hpp"
#include "csazkp/rng.hpp"

namespace csazkp {
namespace {

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

unsigned primitive_root(unsigned q) {
  const unsigned order = q - 1;
  std::vector<unsigned> factors;
  unsigned rest = order;
  for (unsigned d = 2; d * d <= rest; ++d) {
    if (rest % d == 0) {
      factors.push_back(d);
      while (rest % d == 0) rest /= d;
    }
  }
  if (rest > 1) factors.push_back(rest);
  auto pow_mod = [q](unsigned long base, unsigned e) {
    unsigned long r = 1;
    base %= q;
    while (e) {
      if (e & 1U) r = r * base % q;
      base = base * base % q;
      e >>= 1U;
    }
    return r;
  };
  for (unsigned g = 2; g < q; ++g) {
    bool generates = true;
    for (unsigned f : factors)
      if (pow_mod(g, order / f) == 1) generates = false;
    if (generates) return g;
  }
  return 1;  // q = 2
}

RatVector vectorize(const RatMatrix& m) { return m.entries(); }

RatMatrix matrix_power(const RatMatrix& m, std::size_t e) {
  RatMatrix r = RatMatrix::identity(m.rows());
  for (std::size_t i = 0; i < e; ++i) r = r * m;
  return r;
}

Algebra rationals() { return new_algebra(1, RatVector{Rational(1)}); }

}  // namespace

CyclicFieldData cyclic_field(unsigned p) {
  if (!is_prime(p)) throw UsageError("cyclic_field: degree " + std::to_string(p) + " is not prime");
  if (p > 7) throw UsageError("cyclic_field: degree above 7 is not supported");

  unsigned q = 2 * p + 1;
  while (!is_prime(q)) q += 2 * p;
  const unsigned g = primitive_root(q);

  // coset[e] = index i of the coset g^i H containing e (e in 1..q-1).
  std::vector<unsigned> coset(q, 0);
  std::vector<std::vector<unsigned>> members(p);
  unsigned long power = 1;
  for (unsigned t = 0; t < q - 1; ++t) {
    coset[power] = t % p;
    members[t % p].push_back(static_cast<unsigned>(power));
    power = power * g % q;
  }

  // eta_r eta_s = c_0 * 1 + sum_t c_t eta_t with 1 = -sum_t eta_t, where c_t
  // is the (coset-constant) coefficient of zeta^e for e in coset t.
  RatVector gamma(p * p * p);
  for (unsigned r = 0; r < p; ++r) {
    for (unsigned s = 0; s < p; ++s) {
      std::vector<long> count(q, 0);
      for (unsigned e1 : members[r])
        for (unsigned e2 : members[s]) ++count[(e1 + e2) % q];
      for (unsigned t = 0; t < p; ++t) {
        const long ct = count[members[t].front()];
        for (unsigned e : members[t]) {
          if (count[e] != ct) throw StructuralError("Gaussian period product is not coset-constant");
        }
        gamma[(r * p + s) * p + t] = ct - count[0];
      }
    }
  }

  RatMatrix sigma(p, p);
  for (unsigned i = 0; i < p; ++i) sigma((i + 1) % p, i) = 1;

  Algebra field = new_algebra(p, std::move(gamma));
  AlgElement eta0 = field.basis_element(0);
  Polynomial minpoly = minimal_polynomial(field, eta0);
  return CyclicFieldData{p, q, std::move(field), std::move(sigma), std::move(eta0), std::move(minpoly)};
}

CyclicFieldData quadratic_field(long d) {
  if (d == 0 || d == 1) throw UsageError("quadratic_field: d must not be a square");
  if (d > 0) {
    const Integer dd = d;
    if (mpz_perfect_square_p(dd.get_mpz_t())) throw UsageError("quadratic_field: d must not be a square");
  }
  RatVector gamma(8);
  gamma[(0 * 2 + 0) * 2 + 0] = 1;  // 1 * 1 = 1
  gamma[(0 * 2 + 1) * 2 + 1] = 1;  // 1 * s = s
  gamma[(1 * 2 + 0) * 2 + 1] = 1;  // s * 1 = s
  gamma[(1 * 2 + 1) * 2 + 0] = d;  // s * s = d
  RatMatrix sigma = RatMatrix::identity(2);
  sigma(1, 1) = -1;
  Algebra field = new_algebra(2, std::move(gamma));
  AlgElement root = field.basis_element(1);
  Polynomial minpoly = minimal_polynomial(field, root);
  return CyclicFieldData{2, 0, std::move(field), std::move(sigma), std::move(root), std::move(minpoly)};
}

Algebra cyclic_algebra(const CyclicFieldData& data, const Rational& a) {
  if (sgn(a) == 0) throw UsageError("cyclic_algebra: a must be nonzero");
  const std::size_t p = data.degree;
  const std::size_t m = p * p;
  auto sigma_inv = invert_matrix(data.sigma);
  if (!sigma_inv) throw UsageError("cyclic_algebra: sigma is singular");

  std::vector<RatMatrix> sigma_neg(p);  // sigma^{-i}
  for (std::size_t i = 0; i < p; ++i) sigma_neg[i] = matrix_power(*sigma_inv, i);

  RatVector gamma(m * m * m);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t r = 0; r < p; ++r) {
      const AlgElement lr = data.field.basis_element(r);
      for (std::size_t j = 0; j < p; ++j) {
        const std::size_t power = (i + j) % p;
        const Rational wrap = i + j >= p ? a : Rational(1);
        for (std::size_t s = 0; s < p; ++s) {
          // (l_r u^i)(l_s u^j) = l_r sigma^{-i}(l_s) u^{i+j}
          const AlgElement twisted{sigma_neg[i].column(s)};
          const AlgElement l = multiply(data.field, lr, twisted);
          const std::size_t row = i * p + r;
          const std::size_t col = j * p + s;
          for (std::size_t t = 0; t < p; ++t) {
            if (sgn(l.coords[t]) == 0) continue;
            gamma[(row * m + col) * m + power * p + t] = wrap * l.coords[t];
          }
        }
      }
    }
  }
  return new_algebra(m, std::move(gamma));
}

Algebra build_division_algebra(unsigned k, Rng& rng) {
  if (k == 0 || !is_squarefree(k)) throw UsageError("build_division_algebra: k must be squarefree");
  Algebra result = rationals();
  unsigned rest = k;
  for (unsigned p = 2; p <= rest; ++p) {
    if (rest % p != 0) continue;
    rest /= p;
    if (p > 7) throw UsageError("build_division_algebra: prime factors above 7 are not supported");
    const CyclicFieldData field = cyclic_field(p);
    // a = prime l inert in L: its valuation at l is 1, while local norms from
    // the unramified degree-p extension have valuation divisible by p. So a is
    // not a norm and the degree-p cyclic algebra is a division algebra.
    const unsigned long q = field.conductor;
    Integer a;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 64) throw RandomnessError("build_division_algebra: no inert prime found");
      Integer start = static_cast<unsigned long>(rng.uniform_int(2, std::int64_t{1} << 32));
      mpz_nextprime(a.get_mpz_t(), start.get_mpz_t());
      if (a % q == 0) continue;
      Integer r;
      const Integer mod = q;
      mpz_powm_ui(r.get_mpz_t(), a.get_mpz_t(), (q - 1) / p, mod.get_mpz_t());
      if (r != 1) break;
    }
    result = tensor_product(result, cyclic_algebra(field, Rational(a)));
  }
  if (center_dimension(result) != 1) throw StructuralError("build_division_algebra: result is not central");
  return result;
}

std::vector<RatMatrix> matrix_units(std::size_t k) {
  std::vector<RatMatrix> units;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      RatMatrix e(k, k);
      e(i, j) = 1;
      units.push_back(std::move(e));
    }
  return units;
}

std::optional<Algebra> algebra_from_matrix_basis(std::size_t k, const std::vector<RatMatrix>& basis) {
  const std::size_t m = k * k;
  if (basis.size() != m) throw UsageError("matrix basis must contain k^2 matrices");
  std::vector<RatVector> columns;
  for (const auto& b : basis) {
    if (b.rows() != k || b.cols() != k) throw UsageError("matrix basis element has the wrong shape");
    columns.push_back(vectorize(b));
  }
  auto to_basis = invert_matrix(RatMatrix::from_columns(columns));
  if (!to_basis) return std::nullopt;
  RatVector gamma(m * m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const RatVector c = *to_basis * std::span<const Rational>(vectorize(basis[i] * basis[j]));
      for (std::size_t l = 0; l < m; ++l) gamma[(i * m + j) * m + l] = c[l];
    }
  return new_algebra(m, std::move(gamma));
}

MatrixPresentation matrix_presentation(std::size_t k, const MatrixBasisSampler& sampler, int retry_cap) {
  for (int attempt = 1; attempt <= retry_cap; ++attempt) {
    std::vector<RatMatrix> basis = sampler();
    if (auto a = algebra_from_matrix_basis(k, basis)) {
      return MatrixPresentation{std::move(*a), std::move(basis), attempt};
    }
  }
  throw RandomnessError("no usable matrix basis after " + std::to_string(retry_cap) + " samples");
}

MatrixPresentation random_matrix_presentation(std::size_t k, long height, Rng& rng, int retry_cap) {
  if (k < 2) throw UsageError("random_matrix_presentation: k must be at least 2");
  if (height < 1) throw UsageError("random_matrix_presentation: height must be at least 1");
  return matrix_presentation(
      k,
      [&] {
        // Each basis matrix is redrawn until nonsingular: no basis element
        // may be a zero divisor.
        std::vector<RatMatrix> basis;
        for (std::size_t n = 0; n < k * k; ++n) basis.push_back(random_invertible_matrix(k, height, rng, retry_cap));
        return basis;
      },
      retry_cap);
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::matrix:
      return "matrix";
    case Variant::division:
      return "division";
    case Variant::order:
      return "order";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  if (name == "matrix") return Variant::matrix;
  if (name == "division") return Variant::division;
  if (name == "order") return Variant::order;
  return std::nullopt;
}

bool is_squarefree(unsigned k) {
  for (unsigned d = 2; d * d <= k; ++d)
    if (k % (d * d) == 0) return false;
  return k > 0;
}

namespace {

AlgElement full_degree_element(const Algebra& a, unsigned k, long height, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    AlgElement x = random_element(a, height, rng);
    if (minimal_polynomial(a, x).degree() == static_cast<int>(k)) return x;
  }
  throw RandomnessError("no public element with a degree-k minimal polynomial");
}

}  // namespace

KeyPair keygen(const KeygenParams& params, Rng& rng) {
  const unsigned k = params.k;
  if (k < 2) throw UsageError("keygen: k must be at least 2");
  if (params.height < 1) throw UsageError("keygen: height must be at least 1");

  std::optional<Algebra> a0;
  std::optional<Presentation> second;
  std::optional<OrderData> order;
  switch (params.variant) {
    case Variant::matrix: {
      a0 = random_matrix_presentation(k, params.height, rng).algebra;
      second = random_presentation(*a0, params.height, rng);
      break;
    }
    case Variant::division: {
      if (!is_squarefree(k)) throw UsageError("keygen: division variant needs a squarefree k");
      const Algebra d = build_division_algebra(k, rng);
      a0 = change_basis(d, random_invertible_matrix(d.dim(), params.height, rng)).algebra;
      second = random_presentation(*a0, params.height, rng);
      break;
    }
    case Variant::order: {
      if (params.order_bound < 1) throw UsageError("keygen: order bound must be at least 1");
      const Algebra base = random_matrix_presentation(k, params.height, rng).algebra;
      ScaledAlgebra scaled = integral_scaling(base);
      a0 = std::move(scaled.algebra);
      second = random_unimodular_presentation(*a0, params.order_bound, rng);
      // The unimodular change keeps the constants integral; rescaling is a no-op.
      ScaledAlgebra again = integral_scaling(second->algebra);
      if (again.scale != 1) throw StructuralError("keygen: order presentation lost integrality");
      order = OrderData{scaled.scale, params.order_bound};
      break;
    }
  }

  std::optional<AlgElement> element;
  if (params.with_public_element) element = full_degree_element(second->algebra, k, params.height, rng);

  PublicKey pub{params.variant, k, params.height, std::move(*a0), std::move(second->algebra), std::move(element),
                std::move(order)};
  return KeyPair{std::move(pub), std::move(second->iso)};
}

}  // namespace csazkp
