#pragma once

#include <array>
#include <cstdint>

#include "kaehler/pseudo_linear.hpp"

namespace kaehler {

/// A bilinear map V x V -> W stored by its values on coordinate basis pairs.
class BilinearMap {
public:
  BilinearMap(int domain_dim, QuadSpace target);

  static BilinearMap zero(int domain_dim, QuadSpace target) { return {domain_dim, std::move(target)}; }

  int domain_dim() const { return domain_dim_; }
  int target_dim() const { return target_.dim(); }
  const QuadSpace& target() const { return target_; }

  /// phi(e_i, e_j).
  Vector at(int i, int j) const { return values_.col(index(i, j)); }
  void set(int i, int j, const Vector& value);
  /// Columns are phi(e_i, e_j), column index i * domain_dim + j.
  const Matrix& values() const { return values_; }
  Matrix& values() { return values_; }

  Vector operator()(const Vector& x, const Vector& y) const;

  /// Pulls the form back along the columns of q: result(a, b) = phi(q_a, q_b).
  BilinearMap restrict(const Matrix& q) const;
  /// Same domain, values pushed through a linear map into a new target.
  BilinearMap compose(const Matrix& linear, QuadSpace new_target) const;

  double max_entry_norm() const;
  bool is_symmetric(double tol = kDefaultTol) const;

private:
  int index(int i, int j) const { return i * domain_dim_ + j; }

  int domain_dim_;
  QuadSpace target_;
  Matrix values_;
};

/// The left map Y -> phi(X, Y) as a target_dim x domain_dim matrix.
struct LinearMap {
  Matrix matrix;
  double tol = kDefaultTol;

  int rank() const { return numerical_rank(matrix, tol); }
  Subspace kernel() const { return Subspace::span(null_space(matrix, tol), tol); }
  Subspace image() const { return Subspace::span(matrix, tol); }
};

Vector evaluate(const BilinearMap& phi, const Vector& x, const Vector& y);
Subspace image_span(const BilinearMap& phi, double tol = kDefaultTol);
/// span{ phi(X, Y) : X in a, Y in b }.
Subspace restricted_span(const BilinearMap& phi, const Subspace& a, const Subspace& b,
                         double tol = kDefaultTol);
/// { Y : phi(X, Y) = 0 for all X }.
Subspace right_kernel(const BilinearMap& phi, double tol = kDefaultTol);
/// { X : phi(X, Y) = 0 for all Y }.
Subspace left_kernel(const BilinearMap& phi, double tol = kDefaultTol);
LinearMap left_map(const BilinearMap& phi, const Vector& x, double tol = kDefaultTol);

struct FlatnessReport {
  double max_defect = 0.0;
  double threshold = 0.0;  // tol * (1 + max entry norm)^2
  std::array<int, 4> worst_tuple{0, 0, 0, 0};
  bool is_flat = true;
};

/// Maximum over basis 4-tuples of |<phi(X,Y), phi(Z,T)> - <phi(X,T), phi(Z,Y)>|.
FlatnessReport flatness_report(const BilinearMap& phi, double tol = kDefaultTol);
/// The same defect for one explicit 4-tuple of vectors.
double flatness_defect(const BilinearMap& phi, const Vector& x, const Vector& y, const Vector& z,
                       const Vector& t);

struct RegularElement {
  Vector x;
  int rank = 0;
};

inline constexpr int kDefaultRegularSamples = 64;

/// Maximizes rank(left_map(X)) over `samples` seeded unit vectors and then the
/// coordinate basis vectors; the first maximizer in that order is returned.
RegularElement find_regular_element(const BilinearMap& phi, std::uint64_t seed,
                                    int samples = kDefaultRegularSamples,
                                    double tol = kDefaultTol);

struct MooreDefect {
  double orthogonality = 0.0;  // max |<s, t>| over generators
  double containment = 0.0;    // max distance of s from phi_X(V)
  double max() const { return orthogonality > containment ? orthogonality : containment; }
};

/// Checks S(phi|V x ker phi_X) inside phi_X(V) intersected with its
/// orthogonal complement. Throws NotFlat when phi fails the flatness test.
MooreDefect moore_verify(const BilinearMap& phi, const Vector& x, double tol = kDefaultTol);

}  // namespace kaehler
