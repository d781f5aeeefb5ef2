#include "kaehler/kaehler_forms.hpp"

#include <algorithm>
#include <cmath>

#include "kaehler/error.hpp"
#include "kaehler/random.hpp"
#include "internal.hpp"

namespace kaehler {

namespace {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Matrix doubled_gram(const Matrix& g) {
  const Eigen::Index p = g.rows();
  Matrix out = Matrix::Zero(2 * p, 2 * p);
  out.topLeftCorner(p, p) = g;
  out.bottomRightCorner(p, p) = -g;
  return out;
}

Matrix pair_basis(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// Symmetric distance between two spans; 1 when the ranks differ.
double span_distance(const Subspace& a, const Subspace& b) {
  if (a.rank() != b.rank()) return 1.0;
  double d = 0.0;
  for (int i = 0; i < a.rank(); ++i) d = std::max(d, b.distance(a.vector(i)));
  for (int i = 0; i < b.rank(); ++i) d = std::max(d, a.distance(b.vector(i)));
  return d;
}

}  // namespace

namespace detail {

Matrix orthonormal_basis(const Matrix& inner, const Matrix& basis) {
  if (basis.cols() == 0) return basis;
  const Matrix m = basis.transpose() * inner * basis;
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::IllConditioned, "domain form is not positive definite on the subspace");
  // B L^{-T} has Gram L^{-1} M L^{-T} = I.
  const Matrix lt = llt.matrixU();
  return lt.transpose().triangularView<Eigen::Lower>().solve(basis.transpose()).transpose();
}

double compat_threshold(const BilinearMap& beta, const BilinearMap& gamma, double tol) {
  return tol * (1.0 + beta.max_entry_norm()) * (1.0 + gamma.max_entry_norm());
}

double flat_threshold(const BilinearMap& beta, double tol) {
  const double scale = 1.0 + beta.max_entry_norm();
  return tol * scale * scale;
}

double j_invariance_defect(const Matrix& j, const Subspace& s) {
  double d = 0.0;
  for (int i = 0; i < s.rank(); ++i) d = std::max(d, s.distance(j * s.vector(i)));
  return d;
}

}  // namespace detail

ComplexStructure::ComplexStructure(Matrix j, const Matrix& domain_inner, double tol) : j_(std::move(j)) {
  if (j_.rows() != j_.cols() || j_.rows() % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "complex structure must be square of even size");
  if (domain_inner.rows() != j_.rows() || domain_inner.cols() != j_.cols())
    throw Error(ErrorCode::DimensionMismatch, "complex structure and domain form");
  const Eigen::Index d = j_.rows();
  const double scale = 1.0 + max_abs(j_) * max_abs(j_);
  const double square = max_abs(j_ * j_ + Matrix::Identity(d, d));
  if (square > 100.0 * tol * scale)
    throw Error(ErrorCode::InvalidArgument, "J^2 differs from -I by " + std::to_string(square));
  const double isometry = max_abs(j_.transpose() * domain_inner * j_ - domain_inner);
  if (isometry > 100.0 * tol * scale * (1.0 + max_abs(domain_inner)))
    throw Error(ErrorCode::InvalidArgument, "J is not an isometry of the domain form");
}

ComplexStructure ComplexStructure::standard(int n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    j(2 * k + 1, 2 * k) = 1.0;
    j(2 * k, 2 * k + 1) = -1.0;
  }
  return ComplexStructure(j, Matrix::Identity(2 * n, 2 * n));
}

DoubledSpace::DoubledSpace(QuadSpace base_space)
    : base(std::move(base_space)), whole(doubled_gram(base.gram())) {}

Vector DoubledSpace::join(const Vector& a, const Vector& b) const {
  Vector out(2 * p());
  out << a, b;
  return out;
}

QuadSpace ComplexForm::base() const {
  const int q = p();
  return QuadSpace(beta.target().gram().topLeftCorner(q, q));
}

ComplexForm restrict(const ComplexForm& form, const Matrix& q, double tol) {
  ComplexForm out{form.beta.restrict(q), q.transpose() * form.inner * form.j * q,
                  Matrix::Identity(q.cols(), q.cols())};
  const Eigen::Index k = q.cols();
  Matrix& j = out.j;
  const double defect = std::max(max_abs(j * j + Matrix::Identity(k, k)),
                                 max_abs(j.transpose() * j - Matrix::Identity(k, k)));
  if (defect > tol / 10.0 && k > 0) {
    const Matrix skew = 0.5 * (j - j.transpose());
    Eigen::JacobiSVD<Matrix> svd(skew, Eigen::ComputeFullU | Eigen::ComputeFullV);
    j = svd.matrixU() * svd.matrixV().transpose();
    j = 0.5 * (j - j.transpose());
  }
  return out;
}

void KaehlerPair::corrupt_beta(int i, int j, int component, double delta) {
  const int d = beta_.domain_dim();
  if (i < 0 || j < 0 || i >= d || j >= d || component < 0 || component >= beta_.target_dim())
    throw Error(ErrorCode::InvalidArgument, "corruption index out of range");
  beta_.values()(component, static_cast<Eigen::Index>(i) * d + j) += delta;
}

KaehlerPair build_pair(BilinearMap alpha, ComplexStructure j, Matrix domain_inner,
                       std::optional<Vector> w, double tol) {
  const int d = alpha.domain_dim();
  if (j.dim() != d) throw Error(ErrorCode::DimensionMismatch, "J and alpha domain");
  if (domain_inner.rows() != d || domain_inner.cols() != d)
    throw Error(ErrorCode::DimensionMismatch, "domain form");
  if (Eigen::LLT<Matrix>(domain_inner).info() != Eigen::Success)
    throw Error(ErrorCode::InvalidArgument, "domain form is not positive definite");
  if (!alpha.is_symmetric(tol)) throw Error(ErrorCode::InvalidArgument, "alpha is not symmetric");

  DoubledSpace doubled(alpha.target());
  const int p = doubled.p();
  const Matrix& jm = j.matrix();
  BilinearMap beta(d, doubled.whole);
  BilinearMap gamma(d, doubled.whole);
  for (int a = 0; a < d; ++a) {
    const Vector x = Vector::Unit(d, a);
    const Vector jx = jm.col(a);
    for (int b = 0; b < d; ++b) {
      const Vector y = Vector::Unit(d, b);
      const Vector jy = jm.col(b);
      const Vector axy = alpha(x, y);
      const Vector axjy = alpha(x, jy);
      Vector bv(2 * p), gv(2 * p);
      bv << axy + alpha(jx, jy), axjy - alpha(jx, y);
      gv << axy, axjy;
      beta.set(a, b, bv);
      gamma.set(a, b, gv);
    }
  }

  if (w) {
    if (w->size() != p) throw Error(ErrorCode::DimensionMismatch, "w");
    const QuadSpace& base = doubled.base;
    const double unit = std::abs(base.norm_sq(*w) + 1.0);
    if (unit > 100.0 * tol * (1.0 + w->squaredNorm()))
      throw Error(ErrorCode::ShapeIdViolation, "w is not a unit time-like vector");
    const Vector gw = base.gram() * *w;
    const Matrix products = alpha.values().transpose() * gw;
    double defect = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        defect = std::max(defect, std::abs(products(static_cast<Eigen::Index>(a) * d + b) + domain_inner(a, b)));
    const double thr = 100.0 * tol * (1.0 + alpha.max_entry_norm()) * (1.0 + w->norm());
    if (defect > thr)
      throw Error(ErrorCode::ShapeIdViolation, "<alpha(X,Y), w> + (X,Y) reaches " + std::to_string(defect));
  }
  return KaehlerPair(std::move(alpha), std::move(j), std::move(domain_inner), std::move(w), std::move(doubled),
                     std::move(beta), std::move(gamma));
}

double symmetry_report(const BilinearMap& beta, const Matrix& j) {
  const int d = beta.domain_dim();
  const int p = beta.target_dim() / 2;
  double defect = 0.0;
  auto rot = [p](const Vector& v, double s1, double s2) {
    Vector out(2 * p);
    out << s1 * v.tail(p), s2 * v.head(p);
    return out;
  };
  for (int a = 0; a < d; ++a) {
    const Vector x = Vector::Unit(d, a);
    const Vector jx = j.col(a);
    for (int b = 0; b < d; ++b) {
      const Vector y = Vector::Unit(d, b);
      const Vector jy = j.col(b);
      const Vector bxy = beta(x, y);
      const Vector bxjy = beta(x, jy);
      Vector flip(2 * p);
      flip << bxy.head(p), -bxy.tail(p);
      defect = std::max({defect, (bxjy + beta(jx, y)).norm(), (bxjy - rot(bxy, 1.0, -1.0)).norm(),
                         (beta(y, x) - flip).norm(), (beta(jy, x) - rot(bxy, 1.0, 1.0)).norm()});
    }
  }
  return defect;
}

double symmetry_report(const KaehlerPair& pair) { return symmetry_report(pair.beta(), pair.J().matrix()); }

double conditional_alpha_defect(const KaehlerPair& pair) {
  if (!pair.w()) throw Error(ErrorCode::InvalidArgument, "pair has no w");
  const int d = pair.alpha().domain_dim();
  const Vector probe = pair.doubled().join(*pair.w(), Vector::Zero(pair.p()));
  const Vector gp = pair.doubled().whole.gram() * probe;
  double defect = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      defect = std::max(defect, std::abs(pair.beta().at(a, b).dot(gp) + 2.0 * pair.domain_inner()(a, b)));
  return defect;
}

SpanAnalysis span_analysis(const ComplexForm& form, double tol) {
  SpanAnalysis out;
  const int p = form.p();
  const QuadSpace& whole = form.beta.target();
  const Subspace s = image_span(form.beta, tol);
  out.u0 = Subspace::zero(p);
  out.radical = Subspace::zero(2 * p);
  if (s.is_zero()) return out;

  out.u0 = Subspace::span(Matrix(s.basis().topRows(p)), tol);
  out.s = out.u0.rank();
  const Subspace doubled_u0 = Subspace::span(pair_basis(out.u0.basis(), out.u0.basis()), tol);
  out.split_defect = span_distance(s, doubled_u0);

  out.radical = radical(whole, s, tol);
  out.degenerate = !out.radical.is_zero();
  if (!out.degenerate) return out;

  const QuadSpace base = form.base();
  const Subspace u1 = Subspace::span(Matrix(out.radical.basis().topRows(p)), tol);
  out.v = find_lightlike(base, u1, tol);
  const Subspace vv = Subspace::span(pair_basis(*out.v, *out.v), tol);
  out.radical_defect = span_distance(out.radical, vv);
  out.s_in_range = out.s >= 1 && out.s <= p - 1;
  return out;
}

SpanAnalysis span_analysis(const KaehlerPair& pair, double tol) { return span_analysis(pair.complex_form(), tol); }

DegenerateSplit degenerate_split(const KaehlerPair& pair, double tol) {
  if (!pair.w()) throw Error(ErrorCode::InvalidArgument, "degenerate split needs w");
  const SpanAnalysis sa = span_analysis(pair, tol);
  if (!sa.degenerate) throw Error(ErrorCode::NotDegenerate, "S(beta) is nondegenerate");

  const QuadSpace& base = pair.base();
  const Vector& w = *pair.w();
  const int p = pair.p();
  const int d = pair.alpha().domain_dim();
  Vector v = *sa.v;
  const double vw = base.inner(v, w);
  if (std::abs(vw) <= std::sqrt(tol) * v.norm() * w.norm())
    throw Error(ErrorCode::PlaneNotLorentzian, "null direction is orthogonal to w");
  v /= -vw;

  DegenerateSplit out;
  out.v = v;
  out.s = sa.s;
  Matrix lb(p, 2);
  lb << v, w;
  out.plane_l = Subspace::span(lb, tol);
  if (out.plane_l.rank() != 2 || restricted_signature(base, out.plane_l, tol) != Signature{1, 1})
    throw Error(ErrorCode::PlaneNotLorentzian, "span{v, w} is not a Lorentzian plane");

  const Matrix& g = base.gram();
  const Matrix m = lb.transpose() * g * lb;
  const Matrix proj = Matrix::Identity(p, p) - lb * m.inverse() * lb.transpose() * g;
  out.beta1 = pair.beta().compose(pair_basis(proj, proj), pair.doubled().whole);

  const Matrix& inner = pair.domain_inner();
  const Matrix inner_j = inner * pair.J().matrix();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Vector term(2 * p);
      term << 2.0 * inner(a, b) * v, 2.0 * inner_j(a, b) * v;
      out.decomposition_residual =
          std::max(out.decomposition_residual, (pair.beta().at(a, b) - out.beta1.at(a, b) - term).norm());
    }
  out.kernel1 = right_kernel(out.beta1, tol);
  if (out.s <= pair.n()) out.kernel_bound_holds = out.kernel1.rank() >= 2 * pair.n() - 2 * out.s + 2;
  return out;
}

double compatibility_defect(const KaehlerPair& pair) {
  const int d = pair.alpha().domain_dim();
  const Matrix products =
      pair.beta().values().transpose() * pair.doubled().whole.gram() * pair.gamma().values();
  auto idx = [d](int i, int j) { return static_cast<Eigen::Index>(i) * d + j; };
  double defect = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          defect = std::max(defect, std::abs(products(idx(i, j), idx(k, l)) - products(idx(i, l), idx(k, j))));
  return defect;
}

double holomorphic_functional(const KaehlerPair& pair, const Vector& s) {
  const QuadSpace& base = pair.base();
  const BilinearMap& a = pair.alpha();
  const Vector js = pair.J()(s);
  const Vector asjs = a(s, js);
  return base.inner(a(s, s), a(js, js)) - base.norm_sq(asjs);
}

double ricci_functional(const KaehlerPair& pair, const Vector& s) {
  const QuadSpace& base = pair.base();
  const BilinearMap& a = pair.alpha();
  const int d = a.domain_dim();
  const Matrix frame = detail::orthonormal_basis(pair.domain_inner(), Matrix::Identity(d, d));
  const Vector ass = a(s, s);
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    const Vector x = frame.col(i);
    const Vector axs = a(x, s);
    total += base.inner(a(x, x), ass) - base.norm_sq(axs);
  }
  return total;
}

double UmbilicalAnalysis::max_k() const {
  return k_values.empty() ? 0.0 : *std::max_element(k_values.begin(), k_values.end());
}

double UmbilicalAnalysis::max_ric() const {
  return ric_values.empty() ? 0.0 : *std::max_element(ric_values.begin(), ric_values.end());
}

UmbilicalAnalysis umbilical_analysis(const KaehlerPair& pair, const DegenerateSplit& split, int samples,
                                     std::uint64_t seed, double tol) {
  if (!pair.w()) throw Error(ErrorCode::InvalidArgument, "umbilical analysis needs w");
  const double compat = compatibility_defect(pair);
  if (compat > detail::compat_threshold(pair.beta(), pair.gamma(), tol))
    throw Error(ErrorCode::HypothesisViolated, "beta and gamma are incompatible: " + std::to_string(compat));
  if (split.s > pair.n() - 1)
    throw Error(ErrorCode::HypothesisViolated, "s exceeds n - 1");

  const QuadSpace& base = pair.base();
  const BilinearMap& alpha = pair.alpha();
  const Matrix& inner = pair.domain_inner();
  const int d = alpha.domain_dim();
  const int p = pair.p();
  UmbilicalAnalysis out;
  out.v = split.v;
  out.eta = split.v - *pair.w();
  out.P = split.kernel1;
  out.m = out.P.rank() / 2;
  out.j_invariance_defect = detail::j_invariance_defect(pair.J().matrix(), out.P);

  Matrix lb(p, 2);
  lb << split.v, *pair.w();
  const Matrix& g = base.gram();
  const Matrix proj = Matrix::Identity(p, p) - lb * (lb.transpose() * g * lb).inverse() * lb.transpose() * g;
  const Vector gv = g * split.v;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const Vector value = alpha.at(a, b);
      out.umbilic_defect = std::max(out.umbilic_defect, std::abs(value.dot(gv)));
      out.alphapar_residual =
          std::max(out.alphapar_residual, (value - proj * value - inner(a, b) * split.v).norm());
    }

  if (out.P.is_zero()) return out;
  Rng rng(seed);
  out.k_values.reserve(samples);
  out.ric_values.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    Vector s = out.P.basis() * rng.normal_vector(out.P.rank());
    s /= std::sqrt(s.dot(inner * s));
    out.k_values.push_back(holomorphic_functional(pair, s));
    out.ric_values.push_back(ricci_functional(pair, s));
  }
  return out;
}

LightlikeWitness kernel_lightlike(const ComplexForm& form, const Vector& x, double tol) {
  const BilinearMap& beta = form.beta;
  const FlatnessReport flat = flatness_report(beta, tol);
  if (!flat.is_flat) throw Error(ErrorCode::NotFlat, "beta is not flat");
  const LinearMap bx = left_map(beta, x, tol);
  const int regular = find_regular_element(beta, 0, kDefaultRegularSamples, tol).rank;
  if (bx.rank() < regular) throw Error(ErrorCode::HypothesisViolated, "X is not a regular element");

  const int d = form.dim();
  const int p = form.p();
  const Subspace kernel = bx.kernel();
  const Subspace svn = kernel.is_zero() ? Subspace::zero(2 * p)
                                        : restricted_span(beta, Subspace::full(d), kernel, tol);
  if (svn.is_zero())
    throw Error(ErrorCode::HypothesisViolated, "beta vanishes on V x N(X)");

  Matrix first_half = Matrix::Zero(2 * p, p);
  first_half.topRows(p).setIdentity();
  const Subspace meet = intersection(svn, Subspace::span(first_half, tol), tol);
  if (meet.rank() != 1)
    throw Error(ErrorCode::HypothesisViolated,
                "S(beta|V x N(X)) meets L + 0 in dimension " + std::to_string(meet.rank()));

  LightlikeWitness out;
  out.v = canonical_sign(Vector(meet.vector(0).head(p)).normalized(), tol);
  const QuadSpace base = form.base();
  const QuadSpace& whole = beta.target();
  out.nullity = std::abs(base.norm_sq(out.v));

  const Vector zero = Vector::Zero(p);
  Vector v0(2 * p), v1(2 * p);
  v0 << out.v, zero;
  v1 << zero, out.v;
  out.lower_inclusion = std::max(svn.distance(v0), svn.distance(v1));

  const Subspace image = bx.image();
  const Matrix cross = svn.basis().transpose() * whole.gram() * image.basis();
  out.upper_inclusion = max_abs(cross);
  for (int i = 0; i < svn.rank(); ++i) out.upper_inclusion = std::max(out.upper_inclusion, image.distance(svn.vector(i)));

  const Vector gv = base.gram() * out.v;
  for (int i = 0; i < image.rank(); ++i) {
    const Vector z = image.vector(i);
    out.moreover_defect =
        std::max({out.moreover_defect, std::abs(z.head(p).dot(gv)), std::abs(z.tail(p).dot(gv))});
  }
  return out;
}

LightlikeWitness kernel_lightlike(const KaehlerPair& pair, const Vector& x, double tol) {
  return kernel_lightlike(pair.complex_form(), x, tol);
}

KernelBound kernel_bound_check(const ComplexForm& form, double tol) {
  const BilinearMap& beta = form.beta;
  if (!flatness_report(beta, tol).is_flat) throw Error(ErrorCode::NotFlat, "beta is not flat");
  const int p = form.p();
  const int n = form.n();
  const Subspace s = image_span(beta, tol);
  if (s.rank() != 2 * p)
    throw Error(ErrorCode::HypothesisViolated,
                "beta is not surjective: span rank " + std::to_string(s.rank()) + " of " + std::to_string(2 * p));
  if (p > n) throw Error(ErrorCode::HypothesisViolated, "p exceeds n");

  KernelBound out;
  out.kernel_dim = right_kernel(beta, tol).rank();
  out.bound = 2 * n - 2 * p;
  out.holds = out.kernel_dim >= out.bound;
  out.regular_rank = find_regular_element(beta, 0, kDefaultRegularSamples, tol).rank;
  if (out.kernel_dim == 0) out.isomorphism = out.regular_rank == form.dim() && form.dim() == 2 * p;
  return out;
}

KernelBound kernel_bound_check(const KaehlerPair& pair, double tol) {
  return kernel_bound_check(pair.complex_form(), tol);
}

}  // namespace kaehler
