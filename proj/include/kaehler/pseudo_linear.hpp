#pragma once

// Subspace calculus in finite-dimensional real spaces carrying a fixed
// symmetric, possibly indefinite, inner product.

#include <vector>

#include <Eigen/Dense>

namespace kaehler {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Single knob for every rank decision: singular values at or below
// tol * max(1, sigma_max) count as zero.
inline constexpr double kDefaultTol = 1e-9;

struct Signature {
  int n_plus = 0;
  int n_minus = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// A real space R^dim with the inner product x^T G y. The ambient form must be
/// nondegenerate; degenerate forms only ever appear restricted to subspaces.
class QuadSpace {
public:
  explicit QuadSpace(Matrix gram, double tol = kDefaultTol);

  static QuadSpace euclidean(int dim);
  static QuadSpace diagonal(const Vector& entries);
  /// diag(-1, 1, ..., 1): time-like direction first.
  static QuadSpace minkowski(int dim);
  /// diag(1, ..., 1, -1): time-like direction last.
  static QuadSpace lorentz_time_last(int dim);

  int dim() const { return static_cast<int>(gram_.rows()); }
  const Matrix& gram() const { return gram_; }
  Signature signature() const { return signature_; }

  double inner(const Vector& x, const Vector& y) const;
  double norm_sq(const Vector& x) const { return inner(x, x); }

private:
  Matrix gram_;
  Signature signature_;
};

double inner(const QuadSpace& space, const Vector& x, const Vector& y);

// Numerical linear algebra helpers shared by all modules. Bases are returned
// with Euclidean-orthonormal columns.
int numerical_rank(const Matrix& m, double tol = kDefaultTol);
Matrix column_space(const Matrix& m, double tol = kDefaultTol);
Matrix null_space(const Matrix& m, double tol = kDefaultTol);

/// A linear subspace of R^ambient_dim, stored by a Euclidean-orthonormal basis.
class Subspace {
public:
  Subspace() = default;

  static Subspace span(const Matrix& vectors, double tol = kDefaultTol);
  static Subspace span(const std::vector<Vector>& vectors, int ambient_dim,
                       double tol = kDefaultTol);
  static Subspace zero(int ambient_dim);
  static Subspace full(int ambient_dim);

  int ambient_dim() const { return ambient_dim_; }
  int rank() const { return static_cast<int>(basis_.cols()); }
  bool is_zero() const { return rank() == 0; }
  const Matrix& basis() const { return basis_; }
  Vector vector(int i) const { return basis_.col(i); }

  /// Euclidean orthogonal projection onto the subspace.
  Vector project(const Vector& x) const;
  /// Euclidean distance from x to the subspace.
  double distance(const Vector& x) const;
  bool contains(const Vector& x, double tol = kDefaultTol) const;
  bool contains(const Subspace& other, double tol = kDefaultTol) const;

private:
  Subspace(int ambient_dim, Matrix basis) : ambient_dim_(ambient_dim), basis_(std::move(basis)) {}

  int ambient_dim_ = 0;
  Matrix basis_ = Matrix(0, 0);
};

Subspace sum(const Subspace& a, const Subspace& b, double tol = kDefaultTol);
Subspace intersection(const Subspace& a, const Subspace& b, double tol = kDefaultTol);
/// Mutual containment of spans, decided on the rank of the concatenated bases.
bool same_span(const Subspace& a, const Subspace& b, double tol = kDefaultTol);
/// Canonical angles between two subspaces, ascending; min(rank a, rank b) of them.
Vector principal_angles(const Subspace& a, const Subspace& b);
/// Largest principal angle; pi/2 when the ranks differ.
double max_principal_angle(const Subspace& a, const Subspace& b);

/// Gram matrix of the ambient form restricted to L, in L's stored basis.
Matrix restricted_gram(const QuadSpace& space, const Subspace& l);
Signature restricted_signature(const QuadSpace& space, const Subspace& l,
                               double tol = kDefaultTol);

Subspace orthogonal_complement(const QuadSpace& space, const Subspace& l,
                               double tol = kDefaultTol);
/// L intersected with its orthogonal complement.
Subspace radical(const QuadSpace& space, const Subspace& l, double tol = kDefaultTol);
bool is_degenerate(const QuadSpace& space, const Subspace& l, double tol = kDefaultTol);
bool is_isotropic(const QuadSpace& space, const Subspace& l, double tol = kDefaultTol);

/// W = U + U_hat + V with U the radical of L, U_hat isotropic and paired with
/// U, and V = (U + U_hat)^perp nondegenerate, L inside U + V.
struct RadicalDecomposition {
  Subspace radical;
  Subspace isotropic_complement;
  Subspace nondeg_part;
  // Paired bases: <radical_basis_i, paired_basis_j> = delta_ij.
  Matrix radical_basis;
  Matrix paired_basis;
};

RadicalDecomposition decompose_degenerate(const QuadSpace& space, const Subspace& l,
                                          double tol = kDefaultTol);

/// Residuals of the RadicalDecomposition identities; all vanish for a valid
/// decomposition of L.
struct DecompositionDefects {
  double pairing = 0.0;       // |<u_i, u_hat_j> - delta_ij|
  double isotropy = 0.0;      // Gram of U and of U_hat
  double cross = 0.0;         // U-V and U_hat-V cross Grams
  double spanning = 0.0;      // rank deficit of U + U_hat + V
  double containment = 0.0;   // distance of L from U + V
  double nondegenerate = 0.0; // 1 if V is degenerate at tolerance
  double max() const;
};

DecompositionDefects decomposition_defects(const QuadSpace& space, const Subspace& l,
                                           const RadicalDecomposition& d,
                                           double tol = kDefaultTol);

/// A unit (Euclidean) null vector of S. Candidate null directions are sign
/// normalized so their first nonzero coordinate is positive; the
/// lexicographically largest candidate is returned.
Vector find_lightlike(const QuadSpace& space, const Subspace& s, double tol = kDefaultTol);

/// Sign normalization used by find_lightlike: first entry above tol*|v| made
/// positive.
Vector canonical_sign(const Vector& v, double tol = kDefaultTol);

}  // namespace kaehler
