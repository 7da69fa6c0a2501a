#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "csazkp/matrix.hpp"
#include "csazkp/polynomial.hpp"
#include "csazkp/rational.hpp"

namespace csazkp {

class Rng;
struct Presentation;

/// Coordinates of an element relative to its algebra's basis.
struct AlgElement {
  RatVector coords;

  std::size_t size() const noexcept { return coords.size(); }
  friend bool operator==(const AlgElement&, const AlgElement&) = default;
};

/// Unvalidated structure constants, as they arrive from the wire or a file.
/// gamma is indexed (i*dim + j)*dim + k and means b_i b_j = sum_k gamma_ijk b_k.
struct AlgebraData {
  std::size_t dim = 0;
  RatVector gamma;
};

/// A finite-dimensional associative unital algebra over Q given by
/// structure constants. Instances only exist after validation: the tensor is
/// associative and a two-sided identity exists (computed, never assumed).
class Algebra {
 public:
  /// Validates associativity exactly and solves for the identity.
  /// Throws StructuralError (naming the first failing (i,j,k,l)) or UsageError.
  static Algebra from_structure_constants(std::size_t dim, RatVector gamma);

  std::size_t dim() const noexcept { return dim_; }
  const Rational& gamma(std::size_t i, std::size_t j, std::size_t k) const {
    return gamma_[(i * dim_ + j) * dim_ + k];
  }
  const RatVector& structure_constants() const noexcept { return gamma_; }
  const AlgElement& identity() const noexcept { return identity_; }
  AlgebraData data() const { return {dim_, gamma_}; }

  /// gamma_num / gamma_den == gamma, with gamma_den the lcm of denominators.
  const std::vector<Integer>& gamma_num() const noexcept { return num_; }
  const Integer& gamma_den() const noexcept { return den_; }
  bool is_integral() const { return den_ == 1; }

  AlgElement zero() const { return AlgElement{RatVector(dim_)}; }
  AlgElement basis_element(std::size_t i) const;

  friend bool operator==(const Algebra& a, const Algebra& b) { return a.dim_ == b.dim_ && a.gamma_ == b.gamma_; }

 private:
  Algebra() = default;

  // Basis changes of an already validated algebra are exact, so they skip
  // the associativity pass and carry the transformed identity across.
  static Algebra trusted(std::size_t dim, RatVector gamma, AlgElement identity);
  friend Presentation change_basis(const Algebra& a, const RatMatrix& t);

  std::size_t dim_ = 0;
  RatVector gamma_;
  std::vector<Integer> num_;
  Integer den_{1};
  AlgElement identity_;
};

inline Algebra new_algebra(std::size_t dim, RatVector gamma) {
  return Algebra::from_structure_constants(dim, std::move(gamma));
}
inline Algebra new_algebra(const AlgebraData& data) { return Algebra::from_structure_constants(data.dim, data.gamma); }

/// Linear map between algebras of equal dimension, as the matrix taking
/// source coordinates to target coordinates. Multiplicativity is a property
/// checked against a specific (source, target) pair by verify_isomorphism.
struct Isomorphism {
  RatMatrix matrix;

  std::size_t source_dim() const noexcept { return matrix.cols(); }
  std::size_t target_dim() const noexcept { return matrix.rows(); }
  static Isomorphism identity(std::size_t m) { return {RatMatrix::identity(m)}; }
  friend bool operator==(const Isomorphism&, const Isomorphism&) = default;
};

AlgElement apply(const Isomorphism& f, const AlgElement& x);

/// compose_iso(f, g) = f o g (apply g first).
Isomorphism compose_iso(const Isomorphism& f, const Isomorphism& g);
Isomorphism invert_iso(const Isomorphism& f);

AlgElement multiply(const Algebra& a, const AlgElement& x, const AlgElement& y);
AlgElement add(const AlgElement& x, const AlgElement& y);
AlgElement scale(const Rational& c, const AlgElement& x);

/// Left multiplication operator: column j holds the coordinates of x * b_j.
RatMatrix regular_representation(const Algebra& a, const AlgElement& x);
/// Right multiplication operator: column j holds the coordinates of b_j * x.
RatMatrix right_representation(const Algebra& a, const AlgElement& x);

/// Least-degree monic f with f(x) = 0, found by stacking 1, x, x^2, ... until
/// the first linear dependence.
Polynomial minimal_polynomial(const Algebra& a, const AlgElement& x);

/// Evaluates p at x inside the algebra (Horner).
AlgElement evaluate(const Algebra& a, const Polynomial& p, const AlgElement& x);

/// y with x y = y x = 1, or nullopt for zero divisors.
std::optional<AlgElement> invert_element(const Algebra& a, const AlgElement& x);

struct Presentation {
  Algebra algebra;
  Isomorphism iso;  // old coordinates -> new coordinates
};

/// Re-presents A in the basis c_i = sum_j T_ji b_j (columns of T are the new
/// basis in old coordinates). The returned iso is T^{-1}.
/// Throws UsageError if T is singular or mis-shaped.
Presentation change_basis(const Algebra& a, const RatMatrix& t);

/// Basis change by the inner automorphism x -> r^{-1} x r. Because the map is
/// an automorphism the structure constants are unchanged; the iso is the
/// automorphism itself. nullopt when r is not invertible.
std::optional<Presentation> conjugation_isomorphism(const Algebra& a, const AlgElement& r);

/// Exact check: f invertible, f(1_A) = 1_B, f(b_i b_j) = f(b_i) f(b_j).
bool verify_isomorphism(const Algebra& a, const Algebra& b, const Isomorphism& f);

/// Basis (i, p) -> index i * dim(B) + p.
Algebra tensor_product(const Algebra& a, const Algebra& b);

struct ScaledAlgebra {
  Algebra algebra;
  Integer scale;  // new basis c_i = scale * b_i
};

/// Multiplies every basis element by the lcm of the structure-constant
/// denominators so the new constants are integers.
ScaledAlgebra integral_scaling(const Algebra& a);
Isomorphism scaling_isomorphism(std::size_t dim, const Integer& scale);

/// Integer coordinates drawn uniformly from [-height, height].
AlgElement random_element(const Algebra& a, long height, Rng& rng);

/// Random element resampled until invertible; throws RandomnessError after
/// `retry_cap` failures. `attempts`, when given, receives the number of draws.
AlgElement random_invertible_element(const Algebra& a, long height, Rng& rng, int retry_cap = 64,
                                     int* attempts = nullptr);

/// Random invertible integer matrix with entries in [-height, height].
RatMatrix random_invertible_matrix(std::size_t n, long height, Rng& rng, int retry_cap = 64);

/// Random unimodular integer matrix whose entries are bounded by `bound`.
RatMatrix random_unimodular_matrix(std::size_t n, long bound, Rng& rng, int retry_cap = 64);

/// Fresh random presentation of A: conjugation by a random invertible r
/// followed by a random invertible integer basis change. The iso maps A to
/// the new presentation.
Presentation random_presentation(const Algebra& a, long height, Rng& rng);

/// Random presentation through a bounded unimodular basis change; iso and
/// its inverse are integer matrices, so integral constants stay integral.
Presentation random_unimodular_presentation(const Algebra& a, long bound, Rng& rng);

/// Dimension of the centre {z : z b_j = b_j z for all j}.
std::size_t center_dimension(const Algebra& a);

/// Direct check of associativity and the identity laws on raw data; used by
/// tests and by decoders that want the failing index.
bool is_associative(const AlgebraData& data);

}  // namespace csazkp
