#include "kaehler/pseudo_linear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kaehler/error.hpp"

namespace kaehler {

namespace {

double rank_threshold(const Eigen::VectorXd& singular_values, double tol) {
  const double top = singular_values.size() > 0 ? singular_values.maxCoeff() : 0.0;
  return tol * std::max(1.0, top);
}

void require_dim(const QuadSpace& space, const Subspace& l) {
  if (l.ambient_dim() != space.dim())
    throw Error(ErrorCode::DimensionMismatch,
                "subspace of R^" + std::to_string(l.ambient_dim()) + " in a space of dimension " +
                    std::to_string(space.dim()));
}

}  // namespace

QuadSpace::QuadSpace(Matrix gram, double tol) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols() || gram_.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "gram matrix must be square and nonempty");
  const double scale = std::max(1.0, gram_.cwiseAbs().maxCoeff());
  if ((gram_ - gram_.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw Error(ErrorCode::InvalidArgument, "gram matrix is not symmetric");
  gram_ = 0.5 * (gram_ + gram_.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  const double thr = tol * std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > thr)
      ++signature_.n_plus;
    else if (ev[i] < -thr)
      ++signature_.n_minus;
  }
  if (signature_.n_plus + signature_.n_minus != dim())
    throw Error(ErrorCode::InvalidArgument, "ambient inner product is degenerate");
}

QuadSpace QuadSpace::euclidean(int dim) { return QuadSpace(Matrix::Identity(dim, dim)); }

QuadSpace QuadSpace::diagonal(const Vector& entries) { return QuadSpace(Matrix(entries.asDiagonal())); }

QuadSpace QuadSpace::minkowski(int dim) {
  Vector d = Vector::Ones(dim);
  d[0] = -1.0;
  return diagonal(d);
}

QuadSpace QuadSpace::lorentz_time_last(int dim) {
  Vector d = Vector::Ones(dim);
  d[dim - 1] = -1.0;
  return diagonal(d);
}

double QuadSpace::inner(const Vector& x, const Vector& y) const {
  if (x.size() != dim() || y.size() != dim())
    throw Error(ErrorCode::DimensionMismatch, "vector length does not match space dimension");
  return x.dot(gram_ * y);
}

double inner(const QuadSpace& space, const Vector& x, const Vector& y) { return space.inner(x, y); }

int numerical_rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  const double thr = rank_threshold(sv, tol);
  return static_cast<int>((sv.array() > thr).count());
}

Matrix column_space(const Matrix& m, double tol) {
  if (m.size() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  const double thr = rank_threshold(sv, tol);
  const auto r = (sv.array() > thr).count();
  return svd.matrixU().leftCols(r);
}

Matrix null_space(const Matrix& m, double tol) {
  const auto n = m.cols();
  if (m.rows() == 0 || n == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double thr = rank_threshold(sv, tol);
  const auto r = (sv.array() > thr).count();
  return svd.matrixV().rightCols(n - r);
}

Subspace Subspace::span(const Matrix& vectors, double tol) {
  return Subspace(static_cast<int>(vectors.rows()), column_space(vectors, tol));
}

Subspace Subspace::span(const std::vector<Vector>& vectors, int ambient_dim, double tol) {
  Matrix m(ambient_dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient_dim)
      throw Error(ErrorCode::DimensionMismatch, "spanning vector has the wrong length");
    m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return span(m, tol);
}

Subspace Subspace::zero(int ambient_dim) { return Subspace(ambient_dim, Matrix(ambient_dim, 0)); }

Subspace Subspace::full(int ambient_dim) {
  return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Vector Subspace::project(const Vector& x) const {
  if (x.size() != ambient_dim_) throw Error(ErrorCode::DimensionMismatch, "projection");
  if (rank() == 0) return Vector::Zero(ambient_dim_);
  return basis_ * (basis_.transpose() * x);
}

double Subspace::distance(const Vector& x) const { return (x - project(x)).norm(); }

bool Subspace::contains(const Vector& x, double tol) const {
  return distance(x) <= tol * std::max(1.0, x.norm());
}

bool Subspace::contains(const Subspace& other, double tol) const {
  if (other.ambient_dim() != ambient_dim_) return false;
  for (int i = 0; i < other.rank(); ++i)
    if (!contains(other.vector(i), tol)) return false;
  return true;
}

Subspace sum(const Subspace& a, const Subspace& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "sum");
  Matrix m(a.ambient_dim(), a.rank() + b.rank());
  m << a.basis(), b.basis();
  return Subspace::span(m, tol);
}

Subspace intersection(const Subspace& a, const Subspace& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "intersection");
  if (a.is_zero() || b.is_zero()) return Subspace::zero(a.ambient_dim());
  Matrix m(a.ambient_dim(), a.rank() + b.rank());
  m << a.basis(), -b.basis();
  const Matrix coeffs = null_space(m, tol);
  return Subspace::span(a.basis() * coeffs.topRows(a.rank()), tol);
}

bool same_span(const Subspace& a, const Subspace& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim() || a.rank() != b.rank()) return false;
  Matrix m(a.ambient_dim(), a.rank() + b.rank());
  m << a.basis(), b.basis();
  return numerical_rank(m, tol) == a.rank();
}

Vector principal_angles(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "angles");
  const Subspace& big = a.rank() >= b.rank() ? a : b;
  const Subspace& small = a.rank() >= b.rank() ? b : a;
  if (small.is_zero()) return Vector(0);
  const Matrix cross = big.basis().transpose() * small.basis();
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullV);
  // Cosines come from the SVD; sines from the residual of the principal
  // vectors, which stays accurate for tiny angles.
  const Matrix principal = small.basis() * svd.matrixV();
  const Matrix residual = principal - big.basis() * (big.basis().transpose() * principal);
  Vector angles(small.rank());
  for (int i = 0; i < small.rank(); ++i)
    angles[i] = std::atan2(residual.col(i).norm(), svd.singularValues()[i]);
  std::sort(angles.data(), angles.data() + angles.size());
  return angles;
}

double max_principal_angle(const Subspace& a, const Subspace& b) {
  if (a.rank() != b.rank()) return std::numbers::pi / 2;
  if (a.is_zero()) return 0.0;
  return principal_angles(a, b).maxCoeff();
}

Matrix restricted_gram(const QuadSpace& space, const Subspace& l) {
  require_dim(space, l);
  return l.basis().transpose() * space.gram() * l.basis();
}

Signature restricted_signature(const QuadSpace& space, const Subspace& l, double tol) {
  Signature sig;
  if (l.is_zero()) return sig;
  const Matrix g = restricted_gram(space, l);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  const double thr = tol * std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > thr) ++sig.n_plus;
    if (ev[i] < -thr) ++sig.n_minus;
  }
  return sig;
}

Subspace orthogonal_complement(const QuadSpace& space, const Subspace& l, double tol) {
  require_dim(space, l);
  if (l.is_zero()) return Subspace::full(space.dim());
  const Matrix constraints = l.basis().transpose() * space.gram();
  return Subspace::span(null_space(constraints, tol), tol);
}

Subspace radical(const QuadSpace& space, const Subspace& l, double tol) {
  require_dim(space, l);
  if (l.is_zero()) return Subspace::zero(space.dim());
  const Matrix coeffs = null_space(restricted_gram(space, l), tol);
  return Subspace::span(l.basis() * coeffs, tol);
}

bool is_degenerate(const QuadSpace& space, const Subspace& l, double tol) {
  return !radical(space, l, tol).is_zero();
}

bool is_isotropic(const QuadSpace& space, const Subspace& l, double tol) {
  return !l.is_zero() && radical(space, l, tol).rank() == l.rank();
}

double DecompositionDefects::max() const {
  return std::max({pairing, isotropy, cross, spanning, containment, nondegenerate});
}

DecompositionDefects decomposition_defects(const QuadSpace& space, const Subspace& l,
                                           const RadicalDecomposition& d, double tol) {
  DecompositionDefects out;
  const Matrix& g = space.gram();
  const Matrix& u = d.radical_basis;
  const Matrix& uh = d.paired_basis;
  const Matrix& v = d.nondeg_part.basis();
  const auto k = u.cols();
  auto max_abs = [](const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; };
  if (k > 0) {
    out.pairing = max_abs(u.transpose() * g * uh - Matrix::Identity(k, k));
    out.isotropy = std::max(max_abs(u.transpose() * g * u), max_abs(uh.transpose() * g * uh));
    if (v.cols() > 0)
      out.cross = std::max(max_abs(u.transpose() * g * v), max_abs(uh.transpose() * g * v));
  }
  Matrix all(space.dim(), 2 * k + v.cols());
  all << u, uh, v;
  out.spanning = static_cast<double>(space.dim() - numerical_rank(all, tol));
  const Subspace uv = sum(d.radical, d.nondeg_part, tol);
  for (int i = 0; i < l.rank(); ++i) out.containment = std::max(out.containment, uv.distance(l.vector(i)));
  out.nondegenerate = is_degenerate(space, d.nondeg_part, tol) ? 1.0 : 0.0;
  return out;
}

RadicalDecomposition decompose_degenerate(const QuadSpace& space, const Subspace& l, double tol) {
  require_dim(space, l);
  RadicalDecomposition d;
  d.radical = radical(space, l, tol);
  const Matrix& u = d.radical.basis();
  const auto k = u.cols();
  d.radical_basis = u;
  if (k == 0) {
    d.isotropic_complement = Subspace::zero(space.dim());
    d.paired_basis = Matrix(space.dim(), 0);
    d.nondeg_part = Subspace::full(space.dim());
    return d;
  }

  // L = U + L' with L' nondegenerate; U sits inside L'^perp, whose form is
  // nondegenerate, so U can be paired there.
  const Matrix coords = l.basis().transpose() * u;
  const Subspace l_prime = Subspace::span(l.basis() * null_space(coords.transpose(), tol), tol);
  const Subspace c = orthogonal_complement(space, l_prime, tol);
  const Matrix pairing = u.transpose() * space.gram() * c.basis();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(pairing);
  const Matrix x = c.basis() * cod.solve(Matrix::Identity(k, k));
  const Matrix a = x.transpose() * space.gram() * x;
  d.paired_basis = x - 0.5 * u * a;
  d.isotropic_complement = Subspace::span(d.paired_basis, tol);

  Matrix both(space.dim(), 2 * k);
  both << u, d.paired_basis;
  d.nondeg_part = orthogonal_complement(space, Subspace::span(both, tol), tol);

  const DecompositionDefects defects = decomposition_defects(space, l, d, tol);
  const double scale = std::max(1.0, space.gram().cwiseAbs().maxCoeff()) *
                       std::max(1.0, d.paired_basis.squaredNorm());
  if (defects.spanning > 0.0 || defects.nondegenerate > 0.0 ||
      std::max({defects.pairing, defects.isotropy, defects.cross, defects.containment}) >
          100.0 * tol * scale)
    throw Error(ErrorCode::IllConditioned, "radical decomposition invariants fail at tolerance");
  return d;
}

Vector canonical_sign(const Vector& v, double tol) {
  const double thr = tol * std::max(1.0, v.norm());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > thr) return v[i] < 0 ? Vector(-v) : v;
  }
  return v;
}

Vector find_lightlike(const QuadSpace& space, const Subspace& s, double tol) {
  require_dim(space, s);
  if (s.is_zero()) throw Error(ErrorCode::NoNullVector, "zero subspace");
  std::vector<Vector> candidates;
  const Subspace rad = radical(space, s, tol);
  if (!rad.is_zero()) {
    for (int i = 0; i < rad.rank(); ++i) candidates.push_back(rad.vector(i));
  } else {
    const Matrix g = restricted_gram(space, s);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (g + g.transpose()));
    const Vector& ev = eig.eigenvalues();
    const double lo = ev[0];
    const double hi = ev[ev.size() - 1];
    if (lo > 0.0 || hi < 0.0) throw Error(ErrorCode::NoNullVector, "induced form is definite");
    const Vector plus = eig.eigenvectors().col(ev.size() - 1) / std::sqrt(hi);
    const Vector minus = eig.eigenvectors().col(0) / std::sqrt(-lo);
    candidates.push_back(s.basis() * (plus + minus));
    candidates.push_back(s.basis() * (plus - minus));
  }
  for (auto& c : candidates) c = canonical_sign(c.normalized(), tol);
  const double eps = std::sqrt(tol) * 1e-2;
  auto lex_greater = [eps](const Vector& a, const Vector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a[i] > b[i] + eps) return true;
      if (a[i] < b[i] - eps) return false;
    }
    return false;
  };
  Vector best = candidates.front();
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (lex_greater(candidates[i], best)) best = candidates[i];
  return best;
}

}  // namespace kaehler
