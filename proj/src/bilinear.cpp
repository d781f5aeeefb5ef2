#include "kaehler/bilinear.hpp"

#include <algorithm>
#include <cmath>

#include "kaehler/error.hpp"
#include "kaehler/random.hpp"

namespace kaehler {

BilinearMap::BilinearMap(int domain_dim, QuadSpace target)
    : domain_dim_(domain_dim),
      target_(std::move(target)),
      values_(Matrix::Zero(target_.dim(), static_cast<Eigen::Index>(domain_dim) * domain_dim)) {
  if (domain_dim < 0) throw Error(ErrorCode::InvalidArgument, "negative domain dimension");
}

void BilinearMap::set(int i, int j, const Vector& value) {
  if (value.size() != target_dim()) throw Error(ErrorCode::DimensionMismatch, "form value");
  values_.col(index(i, j)) = value;
}

Vector BilinearMap::operator()(const Vector& x, const Vector& y) const {
  if (x.size() != domain_dim_ || y.size() != domain_dim_)
    throw Error(ErrorCode::DimensionMismatch, "bilinear evaluation");
  // values_ viewed as target x (d*d); coefficient of column (i,j) is x_i y_j.
  const Matrix outer = y * x.transpose();
  const Eigen::Map<const Vector> weights(outer.data(), outer.size());
  return values_ * weights;
}

BilinearMap BilinearMap::restrict(const Matrix& q) const {
  if (q.rows() != domain_dim_) throw Error(ErrorCode::DimensionMismatch, "restriction basis");
  const int k = static_cast<int>(q.cols());
  BilinearMap out(k, target_);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) out.set(a, b, (*this)(q.col(a), q.col(b)));
  return out;
}

BilinearMap BilinearMap::compose(const Matrix& linear, QuadSpace new_target) const {
  if (linear.cols() != target_dim() || linear.rows() != new_target.dim())
    throw Error(ErrorCode::DimensionMismatch, "composition");
  BilinearMap out(domain_dim_, std::move(new_target));
  out.values_ = linear * values_;
  return out;
}

double BilinearMap::max_entry_norm() const {
  return values_.size() ? values_.colwise().norm().maxCoeff() : 0.0;
}

bool BilinearMap::is_symmetric(double tol) const {
  const double thr = tol * std::max(1.0, max_entry_norm());
  for (int i = 0; i < domain_dim_; ++i)
    for (int j = i + 1; j < domain_dim_; ++j)
      if ((at(i, j) - at(j, i)).norm() > thr) return false;
  return true;
}

Vector evaluate(const BilinearMap& phi, const Vector& x, const Vector& y) { return phi(x, y); }

Subspace image_span(const BilinearMap& phi, double tol) { return Subspace::span(phi.values(), tol); }

Subspace restricted_span(const BilinearMap& phi, const Subspace& a, const Subspace& b, double tol) {
  Matrix gens(phi.target_dim(), static_cast<Eigen::Index>(a.rank()) * b.rank());
  Eigen::Index c = 0;
  for (int i = 0; i < a.rank(); ++i)
    for (int j = 0; j < b.rank(); ++j) gens.col(c++) = phi(a.vector(i), b.vector(j));
  return Subspace::span(gens, tol);
}

LinearMap left_map(const BilinearMap& phi, const Vector& x, double tol) {
  if (x.size() != phi.domain_dim()) throw Error(ErrorCode::DimensionMismatch, "left map");
  const int d = phi.domain_dim();
  LinearMap out{Matrix::Zero(phi.target_dim(), d), tol};
  for (int i = 0; i < d; ++i) {
    if (x[i] == 0.0) continue;
    out.matrix += x[i] * phi.values().middleCols(static_cast<Eigen::Index>(i) * d, d);
  }
  return out;
}

Subspace right_kernel(const BilinearMap& phi, double tol) {
  const int d = phi.domain_dim();
  const int t = phi.target_dim();
  Matrix stacked(static_cast<Eigen::Index>(d) * t, d);
  for (int i = 0; i < d; ++i)
    stacked.middleRows(static_cast<Eigen::Index>(i) * t, t) =
        phi.values().middleCols(static_cast<Eigen::Index>(i) * d, d);
  return Subspace::span(null_space(stacked, tol), tol);
}

Subspace left_kernel(const BilinearMap& phi, double tol) {
  const int d = phi.domain_dim();
  const int t = phi.target_dim();
  Matrix stacked(static_cast<Eigen::Index>(d) * t, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) stacked.block(static_cast<Eigen::Index>(j) * t, i, t, 1) = phi.at(i, j);
  return Subspace::span(null_space(stacked, tol), tol);
}

FlatnessReport flatness_report(const BilinearMap& phi, double tol) {
  FlatnessReport rep;
  const int d = phi.domain_dim();
  const Matrix products = phi.values().transpose() * phi.target().gram() * phi.values();
  auto idx = [d](int i, int j) { return static_cast<Eigen::Index>(i) * d + j; };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double defect = std::abs(products(idx(i, j), idx(k, l)) - products(idx(i, l), idx(k, j)));
          if (defect > rep.max_defect) {
            rep.max_defect = defect;
            rep.worst_tuple = {i, j, k, l};
          }
        }
  const double scale = 1.0 + phi.max_entry_norm();
  rep.threshold = tol * scale * scale;
  rep.is_flat = rep.max_defect <= rep.threshold;
  return rep;
}

double flatness_defect(const BilinearMap& phi, const Vector& x, const Vector& y, const Vector& z,
                       const Vector& t) {
  const QuadSpace& w = phi.target();
  return std::abs(w.inner(phi(x, y), phi(z, t)) - w.inner(phi(x, t), phi(z, y)));
}

RegularElement find_regular_element(const BilinearMap& phi, std::uint64_t seed, int samples,
                                    double tol) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be positive");
  const int d = phi.domain_dim();
  Rng rng(seed);
  RegularElement best{Vector::Zero(d), -1};
  auto consider = [&](const Vector& x) {
    const int r = left_map(phi, x, tol).rank();
    if (r > best.rank) best = {x, r};
  };
  for (int s = 0; s < samples; ++s) consider(rng.unit_vector(d));
  for (int i = 0; i < d; ++i) consider(Vector::Unit(d, i));
  if (best.rank < 0) best.rank = 0;
  return best;
}

MooreDefect moore_verify(const BilinearMap& phi, const Vector& x, double tol) {
  if (!flatness_report(phi, tol).is_flat)
    throw Error(ErrorCode::NotFlat, "Moore inclusion requires a flat form");
  MooreDefect out;
  const LinearMap bx = left_map(phi, x, tol);
  const Subspace kernel = bx.kernel();
  if (kernel.is_zero()) return out;
  const Subspace image = bx.image();
  const Matrix& g = phi.target().gram();
  const int d = phi.domain_dim();
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < kernel.rank(); ++k) {
      const Vector s = phi(Vector::Unit(d, i), kernel.vector(k));
      out.containment = std::max(out.containment, image.distance(s));
      for (int t = 0; t < image.rank(); ++t)
        out.orthogonality = std::max(out.orthogonality, std::abs(s.dot(g * image.vector(t))));
    }
  }
  return out;
}

}  // namespace kaehler
