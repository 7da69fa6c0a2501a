#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csazkp/algebra.hpp"

namespace csazkp {

class Rng;

/// A cyclic number field of prime degree with an explicit Galois generator.
struct CyclicFieldData {
  unsigned degree = 0;        // p
  unsigned conductor = 0;     // q with L inside Q(zeta_q); 0 for directly supplied fields
  Algebra field;              // commutative p-dimensional multiplication table
  RatMatrix sigma;            // column i = coordinates of sigma(basis_i)
  AlgElement generator;       // primitive element (first period, or sqrt(d))
  Polynomial generator_minpoly;
};

/// Degree-p subfield of Q(zeta_q) spanned by Gaussian periods, q the smallest
/// prime with q = 1 (mod 2p). sigma shifts eta_i -> eta_{i+1}.
/// Throws UsageError unless p is a prime <= 7.
CyclicFieldData cyclic_field(unsigned p);

/// Q(sqrt(d)) on the basis {1, sqrt(d)} with sigma(sqrt(d)) = -sqrt(d).
/// Throws UsageError when d is a perfect square.
CyclicFieldData quadratic_field(long d);

/// (L|Q, sigma, a): basis l_r u^i stored at index i*p + r, with
/// u^i l = sigma^{-i}(l) u^i and u^p = a. Throws UsageError when a = 0.
Algebra cyclic_algebra(const CyclicFieldData& field, const Rational& a);

/// Tensor product of cyclic algebras D_p over the primes p | k, each with a
/// random a_p in [2, 2^32] that is not a perfect p-th power.
Algebra build_division_algebra(unsigned k, Rng& rng);

/// Structure constants of M_k(Q) on the given basis of k x k matrices, or
/// nullopt if the matrices are linearly dependent.
std::optional<Algebra> algebra_from_matrix_basis(std::size_t k, const std::vector<RatMatrix>& basis);

/// The k^2 standard matrix units e_11, e_12, ..., e_kk (row-major order).
std::vector<RatMatrix> matrix_units(std::size_t k);

struct MatrixPresentation {
  Algebra algebra;
  std::vector<RatMatrix> model_basis;  // test oracle only; keygen drops it
  int attempts = 0;
};

using MatrixBasisSampler = std::function<std::vector<RatMatrix>()>;

/// Draws bases from `sampler` until one is usable.
MatrixPresentation matrix_presentation(std::size_t k, const MatrixBasisSampler& sampler, int retry_cap = 64);

/// k^2 random nonsingular integer k x k matrices with entries in
/// [-height, height].
MatrixPresentation random_matrix_presentation(std::size_t k, long height, Rng& rng, int retry_cap = 64);

enum class Variant { matrix, division, order };

std::string to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

struct OrderData {
  Integer scale;  // N used by integral_scaling
  long bound = 0; // |secret entries| <= bound
};

struct PublicKey {
  Variant variant = Variant::matrix;
  unsigned k = 0;
  long height = 0;
  Algebra a0;
  Algebra a1;
  std::optional<AlgElement> public_element;  // lives in a1
  std::optional<OrderData> order;
};

struct KeyPair {
  PublicKey pub;
  Isomorphism secret_phi;  // a0 -> a1
};

struct KeygenParams {
  Variant variant = Variant::matrix;
  unsigned k = 2;
  long height = 5;
  long order_bound = 16;
  bool with_public_element = true;
};

bool is_squarefree(unsigned k);

/// Throws UsageError for invalid (variant, k) and RandomnessError on retry
/// cap exhaustion.
KeyPair keygen(const KeygenParams& params, Rng& rng);

}  // namespace csazkp
