#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "kaehler/bilinear.hpp"
#include "kaehler/geometry.hpp"
#include "kaehler/kaehler_forms.hpp"
#include "kaehler/pseudo_linear.hpp"
#include "kaehler/random.hpp"

namespace testing {

using kaehler::BilinearMap;
using kaehler::ComplexForm;
using kaehler::ComplexStructure;
using kaehler::KaehlerPair;
using kaehler::Matrix;
using kaehler::QuadSpace;
using kaehler::Rng;
using kaehler::Subspace;
using kaehler::Vector;

inline const std::vector<double>& standard_radii() {
  static const std::vector<double> r{2.0, 1.0, std::sqrt(2.0)};
  return r;
}

inline kaehler::ProductImmersion example1() { return kaehler::make_example1(standard_radii()); }

struct GeometricPoint {
  kaehler::PointFrame frame;
  kaehler::SecondFundamentalData sff;
};

inline GeometricPoint sample_point(const kaehler::ProductImmersion& imm, Rng& rng) {
  kaehler::PointFrame frame = kaehler::frame_at(imm, kaehler::random_params(imm, rng));
  kaehler::SecondFundamentalData sff = kaehler::second_fundamental_form(imm, frame);
  return {std::move(frame), std::move(sff)};
}

inline KaehlerPair pair_at(const kaehler::ProductImmersion& imm, std::uint64_t seed) {
  Rng rng(seed);
  const kaehler::PointFrame frame = kaehler::frame_at(imm, kaehler::random_params(imm, rng));
  return kaehler::kaehler_pair_at(imm, frame);
}

inline Matrix random_orthogonal(Rng& rng, int dim) {
  return Eigen::HouseholderQR<Matrix>(rng.normal_matrix(dim, dim)).householderQ();
}

inline Matrix random_j(Rng& rng, int n) {
  const Matrix q = random_orthogonal(rng, 2 * n);
  return q * ComplexStructure::standard(n).matrix() * q.transpose();
}

inline BilinearMap random_symmetric(Rng& rng, int d, const QuadSpace& target) {
  BilinearMap a(d, target);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const Vector v = rng.normal_vector(target.dim());
      a.set(i, j, v);
      a.set(j, i, v);
    }
  return a;
}

// Symmetric alpha into diag(1, ..., 1, -1) with <alpha(X,Y), e_last> = -(X,Y).
inline BilinearMap random_shape_alpha(Rng& rng, int d, int p) {
  Vector signs = Vector::Ones(p);
  signs[p - 1] = -1.0;
  BilinearMap a = random_symmetric(rng, d, QuadSpace::diagonal(signs));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vector v = a.at(i, j);
      v[p - 1] = i == j ? 1.0 : 0.0;
      a.set(i, j, v);
    }
  return a;
}

// Symmetric form factoring through a random rank-m map R^d -> R^m.
inline BilinearMap random_low_rank(Rng& rng, int d, int m, const QuadSpace& target) {
  return random_symmetric(rng, m, target).restrict(rng.normal_matrix(m, d));
}

inline Vector last_unit(int p) { return Vector::Unit(p, p - 1); }

// alpha(X,Y) = (X,Y)(e_1 + e_2) + c <pi X, pi Y> e_0 into diag(1, 1, -1), with
// pi the projection onto the first complex line. The null direction is e_1 + e_2.
inline BilinearMap synthetic_umbilic_alpha(int n, double c) {
  const QuadSpace l = QuadSpace::diagonal(Vector::Ones(3) - 2.0 * Vector::Unit(3, 2));
  BilinearMap a(2 * n, l);
  for (int i = 0; i < 2 * n; ++i) {
    Vector v = Vector::Zero(3);
    v[1] = v[2] = 1.0;
    if (i < 2) v[0] = c;
    a.set(i, i, v);
  }
  return a;
}

// beta of a ComplexForm composed with the projection onto the first 2n
// coordinates of R^{2(n+k)}; J extended by the standard structure.
inline ComplexForm pad_form(const ComplexForm& form, int k) {
  const int d = form.dim();
  const int dd = d + 2 * k;
  Matrix proj = Matrix::Zero(d, dd);
  proj.leftCols(d) = Matrix::Identity(d, d);
  BilinearMap padded = form.beta.restrict(proj);
  Matrix j = Matrix::Zero(dd, dd);
  j.topLeftCorner(d, d) = form.j;
  j.bottomRightCorner(2 * k, 2 * k) = ComplexStructure::standard(k).matrix();
  return {padded, j, Matrix::Identity(dd, dd)};
}

// A nondegenerate indefinite Gram s^T diag(+-1) s with both signs present.
inline QuadSpace random_signature_space(Rng& rng, int dim) {
  Vector d(dim);
  for (int i = 0; i < dim; ++i) d[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  d[0] = 1.0;
  d[dim - 1] = -1.0;
  const Matrix s = Matrix::Identity(dim, dim) + 0.3 * rng.normal_matrix(dim, dim);
  return QuadSpace(s.transpose() * Matrix(d.asDiagonal()) * s);
}

// A null vector built from a positive and a negative eigenvector of the Gram.
inline Vector null_vector(const QuadSpace& w) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(w.gram());
  const Vector& ev = es.eigenvalues();
  const int last = static_cast<int>(ev.size()) - 1;
  return (es.eigenvectors().col(0) / std::sqrt(-ev[0]) + es.eigenvectors().col(last) / std::sqrt(ev[last])).normalized();
}

// L spanned by a null vector u and random vectors orthogonal to u, so u lies in the radical.
inline Subspace random_degenerate(Rng& rng, const QuadSpace& w, int extra) {
  const Vector u = null_vector(w);
  Matrix gens(w.dim(), extra + 1);
  gens.col(0) = u;
  const Vector gu = w.gram() * u;
  for (int k = 0; k < extra; ++k) {
    Vector y = rng.normal_vector(w.dim());
    y -= gu.dot(y) / gu.squaredNorm() * gu;
    gens.col(k + 1) = y;
  }
  return Subspace::span(gens);
}

// Radical by solving the restricted Gram system directly.
inline Subspace brute_radical(const QuadSpace& w, const Subspace& l) {
  if (l.is_zero()) return Subspace::zero(w.dim());
  const Matrix b = l.basis();
  const Matrix g = b.transpose() * w.gram() * b;
  if (g.cwiseAbs().maxCoeff() <= 1e-9) return l;
  Eigen::FullPivLU<Matrix> lu(g);
  lu.setThreshold(1e-9);
  if (lu.rank() == g.cols()) return Subspace::zero(w.dim());
  return Subspace::span(Matrix(b * lu.kernel()));
}

// Kernel by an exhaustive solve of the stacked system phi(e_i, Y)_k = 0.
inline Subspace brute_kernel(const BilinearMap& phi) {
  const int d = phi.domain_dim(), q = phi.target_dim();
  Matrix m(d * q, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m.block(i * q, j, q, 1) = phi.at(i, j);
  if (m.cwiseAbs().maxCoeff() <= 1e-9) return Subspace::full(d);
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(1e-9);
  if (lu.rank() == d) return Subspace::zero(d);
  return Subspace::span(Matrix(lu.kernel()));
}

}  // namespace testing
