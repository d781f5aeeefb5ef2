#include "kaehler/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "internal.hpp"
#include "kaehler/error.hpp"

namespace kaehler {

namespace {

constexpr double kPi = std::numbers::pi;
// Chart validation domain and the strictly smaller sampling domain.
constexpr double kThetaMargin = 0.1;
constexpr double kUMin = 0.1;
constexpr double kUMax = 3.0;
constexpr double kSampleInset = 0.01;

Eigen::Vector3d sphere_unit(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

// Unit tangents (d/dtheta, d/dphi) of the round sphere.
std::pair<Eigen::Vector3d, Eigen::Vector3d> sphere_tangents(double theta, double phi) {
  return {{std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)},
          {-std::sin(phi), std::cos(phi), 0.0}};
}

Eigen::Vector3d hyperboloid_unit(double u, double v) {
  return {std::cosh(u), std::sinh(u) * std::cos(v), std::sinh(u) * std::sin(v)};
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> hyperboloid_tangents(double u, double v) {
  const double s = u > 0 ? 1.0 : -1.0;
  return {{std::sinh(u), std::cosh(u) * std::cos(v), std::cosh(u) * std::sin(v)},
          {0.0, -s * std::sin(v), s * std::cos(v)}};
}

double lorentz3(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

void check_angles(double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi) || theta < kThetaMargin || theta > kPi - kThetaMargin)
    throw Error(ErrorCode::ChartDomainError, "sphere angle theta = " + std::to_string(theta));
}

void check_hyperbolic(double u, double v) {
  if (!std::isfinite(u) || !std::isfinite(v) || std::abs(u) < kUMin || std::abs(u) > kUMax)
    throw Error(ErrorCode::ChartDomainError, "hyperboloid parameter u = " + std::to_string(u));
}

// Horosphere chart into L^{m+2}, time-like coordinate first.
Vector horosphere(const Vector& x) {
  const double q = x.squaredNorm();
  Vector out(x.size() + 2);
  out << 1.0 + q / 2.0, x, q / 2.0;
  return out;
}

Vector horosphere_push(const Vector& x, const Vector& e) {
  const double xe = x.dot(e);
  Vector out(e.size() + 2);
  out << xe, e, xe;
  return out;
}

Vector null_ell(int ambient_dim) {
  Vector ell = Vector::Zero(ambient_dim);
  ell[0] = 1.0;
  ell[ambient_dim - 1] = 1.0;
  return ell;
}

// Point of S^2_R x R^{2n-2} inside R^{2n+1}.
Vector horosphere_source(const ProductImmersion& imm, const Vector& params) {
  const int n = imm.n();
  const double r = imm.factors()[0].r;
  Vector x(2 * n + 1);
  x.head(3) = r * sphere_unit(params[0], params[1]);
  x.tail(2 * n - 2) = params.tail(2 * n - 2);
  return x;
}

double pseudo_norm(const QuadSpace& space, const Vector& v) { return std::sqrt(std::abs(space.norm_sq(v))); }

}  // namespace

SurfaceImmersion SurfaceImmersion::sphere(double r) {
  if (!(r > 0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  return {1.0 / (r * r), r, AmbientKind::Euclidean, 1};
}

SurfaceImmersion SurfaceImmersion::hyperbolic(double r) {
  if (!(r > 0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  return {-1.0 / (r * r), r, AmbientKind::Lorentzian, 1};
}

ProductImmersion make_example1(const std::vector<double>& radii, double tol) {
  const int n = static_cast<int>(radii.size());
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "a product needs at least two factors");
  double constraint = 0.0;
  double scale = 1.0;
  std::vector<SurfaceImmersion> factors;
  for (int i = 0; i < n; ++i) {
    const double r = radii[i];
    factors.push_back(i == 0 ? SurfaceImmersion::hyperbolic(r) : SurfaceImmersion::sphere(r));
    constraint += (i == 0 ? -1.0 : 1.0) * r * r;
    scale += r * r;
  }
  if (std::abs(constraint + 1.0) > tol * scale)
    throw Error(ErrorCode::CurvatureConstraintViolated,
                "-r1^2 + sum r_j^2 = " + std::to_string(constraint) + ", expected -1");
  Vector gram = Vector::Ones(3 * n);
  gram[0] = -1.0;
  return ProductImmersion(ImmersionKind::SphereProduct, n, std::move(factors), QuadSpace::diagonal(gram));
}

ProductImmersion make_horosphere_composition(int n, const SurfaceImmersion& surface) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "horosphere compositions need n >= 3");
  if (!surface.is_sphere() || surface.ambient != AmbientKind::Euclidean)
    throw Error(ErrorCode::InvalidArgument, "the hypersurface factor must be a round sphere in R^3");
  return ProductImmersion(ImmersionKind::Horosphere, n, {surface}, QuadSpace::minkowski(2 * n + 3));
}

Vector ProductImmersion::position(const Vector& params) const {
  if (params.size() != param_dim()) throw Error(ErrorCode::DimensionMismatch, "chart parameters");
  if (kind_ == ImmersionKind::Horosphere) return horosphere(horosphere_source(*this, params));
  Vector out(3 * n_);
  for (int i = 0; i < n_; ++i) {
    const SurfaceImmersion& f = factors_[i];
    const double a = params[2 * i];
    const double b = params[2 * i + 1];
    out.segment<3>(3 * i) = f.r * (f.is_sphere() ? sphere_unit(a, b) : hyperboloid_unit(a, b));
  }
  return out;
}

Vector random_params(const ProductImmersion& imm, Rng& rng) {
  const int n = imm.n();
  Vector params(2 * n);
  auto angles = [&](int slot) {
    params[slot] = rng.uniform(kThetaMargin + kSampleInset, kPi - kThetaMargin - kSampleInset);
    params[slot + 1] = rng.uniform(0.0, 2.0 * kPi);
  };
  if (imm.kind() == ImmersionKind::Horosphere) {
    angles(0);
    for (int k = 2; k < 2 * n; ++k) params[k] = rng.uniform(-1.0, 1.0);
    return params;
  }
  for (int i = 0; i < n; ++i) {
    if (imm.factors()[i].is_sphere()) {
      angles(2 * i);
    } else {
      const double mag = rng.uniform(kUMin + kSampleInset, kUMax - kSampleInset);
      params[2 * i] = rng.uniform() < 0.5 ? -mag : mag;
      params[2 * i + 1] = rng.uniform(0.0, 2.0 * kPi);
    }
  }
  return params;
}

PointFrame frame_at(const ProductImmersion& imm, const Vector& params) {
  const int n = imm.n();
  if (params.size() != imm.param_dim()) throw Error(ErrorCode::DimensionMismatch, "chart parameters");
  const QuadSpace& amb = imm.ambient();
  const int dim = amb.dim();
  PointFrame fr;
  fr.params = params;
  fr.position = imm.position(params);
  fr.tangent = Matrix::Zero(dim, 2 * n);
  fr.J = ComplexStructure::standard(n);
  const int p = imm.codim();
  fr.normal_g = Matrix::Zero(dim, p + 1);
  fr.normal_g_signs = Vector::Ones(p + 1);
  fr.normal_g_signs[p] = -1.0;

  if (imm.kind() == ImmersionKind::Horosphere) {
    check_angles(params[0], params[1]);
    const double r = imm.factors()[0].r;
    const int orient = imm.factors()[0].orientation;
    const Vector x = horosphere_source(imm, params);
    const auto [t_theta, t_phi] = sphere_tangents(params[0], params[1]);
    Vector e = Vector::Zero(2 * n + 1);
    e.head(3) = t_theta;
    fr.tangent.col(0) = horosphere_push(x, e);
    e.head(3) = orient * t_phi;
    fr.tangent.col(1) = horosphere_push(x, e);
    for (int k = 2; k < 2 * n; ++k) fr.tangent.col(k) = horosphere_push(x, Vector::Unit(2 * n + 1, k + 1));

    Vector inward = Vector::Zero(2 * n + 1);
    inward.head(3) = -sphere_unit(params[0], params[1]);
    const Vector nu = horosphere_push(x, inward);
    const Vector ell = null_ell(dim);
    fr.normal_g.col(0) = nu;
    fr.normal_g.col(1) = ell - fr.position;
    fr.normal_g.col(2) = fr.position;
    fr.blocks.push_back({0, 2, Vector(nu / r + ell)});
    fr.blocks.push_back({2, 2 * n - 2, ell});
    return fr;
  }

  std::vector<Vector> unit_normals;
  for (int i = 0; i < n; ++i) {
    const SurfaceImmersion& f = imm.factors()[i];
    const double a = params[2 * i];
    const double b = params[2 * i + 1];
    std::pair<Eigen::Vector3d, Eigen::Vector3d> t;
    Eigen::Vector3d unit;
    if (f.is_sphere()) {
      check_angles(a, b);
      t = sphere_tangents(a, b);
      unit = sphere_unit(a, b);
    } else {
      check_hyperbolic(a, b);
      t = hyperboloid_tangents(a, b);
      unit = hyperboloid_unit(a, b);
    }
    fr.tangent.block<3, 1>(3 * i, 2 * i) = t.first;
    fr.tangent.block<3, 1>(3 * i, 2 * i + 1) = f.orientation * t.second;
    Vector gi = Vector::Zero(dim);
    gi.segment<3>(3 * i) = f.r * unit;
    const double gg = f.is_sphere() ? f.r * f.r : lorentz3(f.r * unit, f.r * unit);
    fr.blocks.push_back({2 * i, 2, Vector(-gi / gg)});
    unit_normals.push_back(gi / f.r);
  }

  int filled = 0;
  for (int i = 0; i < n && filled < p; ++i) {
    Vector q = unit_normals[i] + amb.inner(unit_normals[i], fr.position) * fr.position;
    for (int k = 0; k < filled; ++k) q -= amb.inner(q, fr.normal_g.col(k)) * Vector(fr.normal_g.col(k));
    const double nsq = amb.norm_sq(q);
    if (nsq <= 1e-12) continue;
    fr.normal_g.col(filled++) = q / std::sqrt(nsq);
  }
  if (filled != p) throw Error(ErrorCode::IllConditioned, "normal frame construction failed");
  fr.normal_g.col(p) = fr.position;
  return fr;
}

Vector normal_coordinates(const PointFrame& frame, const QuadSpace& ambient, const Vector& v) {
  const Vector gv = ambient.gram() * v;
  return frame.normal_g_signs.cwiseProduct(frame.normal_g.transpose() * gv);
}

Vector ambient_normal(const PointFrame& frame, const Vector& coords) { return frame.normal_g * coords; }

SecondFundamentalData second_fundamental_form(const ProductImmersion& imm, const PointFrame& frame) {
  const int d = 2 * imm.n();
  const int p = frame.codim();
  SecondFundamentalData out;
  out.alpha_g = BilinearMap(d, QuadSpace::diagonal(frame.normal_g_signs));
  out.alpha_f = BilinearMap(d, QuadSpace::euclidean(p));
  for (const FactorBlock& block : frame.blocks) {
    const Vector coords = normal_coordinates(frame, imm.ambient(), block.eta);
    out.etas.push_back(block.eta);
    out.eta_coords.push_back(coords);
    for (int a = block.begin; a < block.begin + block.size; ++a) {
      out.alpha_g.set(a, a, coords);
      out.alpha_f.set(a, a, coords.head(p));
    }
  }
  return out;
}

double CurvatureTensor::operator()(const Vector& x, const Vector& y, const Vector& z, const Vector& t) const {
  const QuadSpace& n = alpha_.target();
  return n.inner(alpha_(x, t), alpha_(y, z)) - n.inner(alpha_(x, z), alpha_(y, t));
}

double CurvatureTensor::sectional(const Vector& x, const Vector& y) const {
  const double area = x.squaredNorm() * y.squaredNorm() - std::pow(x.dot(y), 2);
  if (area <= 0.0) throw Error(ErrorCode::InvalidArgument, "sectional curvature of a degenerate plane");
  return (*this)(x, y, y, x) / area;
}

double CurvatureTensor::ricci(const Vector& s) const {
  const int d = alpha_.domain_dim();
  double total = 0.0;
  for (int k = 0; k < d; ++k) {
    const Vector e = Vector::Unit(d, k);
    total += (*this)(s, e, e, s);
  }
  return total;
}

CurvatureTensor curvature_tensor(const ProductImmersion& imm, const PointFrame& frame) {
  return CurvatureTensor(second_fundamental_form(imm, frame).alpha_g, frame.J.matrix());
}

double curvature(const ProductImmersion& imm, const PointFrame& frame, const Vector& x, const Vector& y,
                 const Vector& z, const Vector& t) {
  return curvature_tensor(imm, frame)(x, y, z, t);
}

KaehlerPair kaehler_pair_at(const ProductImmersion& imm, const PointFrame& frame, double tol) {
  const SecondFundamentalData sff = second_fundamental_form(imm, frame);
  const int d = 2 * imm.n();
  const int p = frame.codim();
  return build_pair(sff.alpha_g, frame.J, Matrix::Identity(d, d), Vector(Vector::Unit(p + 1, p)), tol);
}

FlatSubspaceWitness flat_subspace_witness(const ProductImmersion& imm, const PointFrame& frame, int samples,
                                          std::uint64_t seed, double tol) {
  if (imm.codim() > imm.n() - 2)
    throw Error(ErrorCode::HypothesisViolated,
                "codimension " + std::to_string(imm.codim()) + " exceeds n - 2 = " + std::to_string(imm.n() - 2));
  const KaehlerPair pair = kaehler_pair_at(imm, frame, tol);
  const DegenerateSplit split = degenerate_split(pair, tol);
  FlatSubspaceWitness out;
  out.analysis = umbilical_analysis(pair, split, samples, seed, tol);
  out.V = out.analysis.P;
  out.ell = out.V.rank() / 2;
  out.j_invariance_defect = out.analysis.j_invariance_defect;

  const CurvatureTensor r(pair.alpha(), frame.J.matrix());
  Rng rng(seed);
  out.max_holomorphic = -std::numeric_limits<double>::infinity();
  out.max_ricci = -std::numeric_limits<double>::infinity();
  if (out.V.is_zero()) return out;
  for (int i = 0; i < samples; ++i) {
    const Vector s = (out.V.basis() * rng.normal_vector(out.V.rank())).normalized();
    out.max_holomorphic = std::max(out.max_holomorphic, r.holomorphic(s));
    out.max_ricci = std::max(out.max_ricci, r.ricci(s));
  }
  return out;
}

Matrix shape_operator(const SecondFundamentalData& sff, const PointFrame& frame, const Vector& xi_coords) {
  const int d = sff.alpha_g.domain_dim();
  const Vector g_xi = frame.normal_g_signs.cwiseProduct(xi_coords);
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = sff.alpha_g.at(i, j).dot(g_xi);
  return a;
}

EigenSplit eigen_split(const ProductImmersion& imm, const PointFrame& frame, std::uint64_t seed, double tol) {
  const SecondFundamentalData sff = second_fundamental_form(imm, frame);
  const int q = frame.codim() + 1;
  const int d = 2 * imm.n();
  std::vector<Matrix> shapes;
  double scale = 1.0;
  for (int k = 0; k < q; ++k) {
    shapes.push_back(shape_operator(sff, frame, Vector::Unit(q, k)));
    scale = std::max(scale, shapes.back().cwiseAbs().maxCoeff());
  }
  EigenSplit out;
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b)
      out.commutator_defect = std::max(
          out.commutator_defect, (shapes[a] * shapes[b] - shapes[b] * shapes[a]).cwiseAbs().maxCoeff());
  if (out.commutator_defect > 100.0 * tol * scale * scale)
    throw Error(ErrorCode::NotFlatNormalBundle,
                "shape operators fail to commute: " + std::to_string(out.commutator_defect));

  Rng rng(seed);
  const Vector c = rng.normal_vector(q);
  Matrix combo = Matrix::Zero(d, d);
  for (int k = 0; k < q; ++k) combo += c[k] * shapes[k];
  Eigen::SelfAdjointEigenSolver<Matrix> eig(combo);
  const Vector& lambda = eig.eigenvalues();
  const Matrix& vecs = eig.eigenvectors();
  const double gap = 1e-6 * (1.0 + lambda.cwiseAbs().maxCoeff());

  int start = 0;
  for (int i = 1; i <= d; ++i) {
    if (i < d && lambda[i] - lambda[i - 1] <= gap) continue;
    EigenComponent comp;
    const Matrix basis = vecs.middleCols(start, i - start);
    comp.F = Subspace::span(basis, tol);
    comp.eta = Vector(q);
    for (int k = 0; k < q; ++k)
      comp.eta[k] = frame.normal_g_signs[k] * (basis.transpose() * shapes[k] * basis).trace() / (i - start);
    comp.eta_ambient = ambient_normal(frame, comp.eta);
    out.components.push_back(std::move(comp));
    start = i;
  }
  for (int k = 0; k < q; ++k) {
    Matrix rebuilt = Matrix::Zero(d, d);
    for (const EigenComponent& comp : out.components) {
      const double lam = frame.normal_g_signs[k] * comp.eta[k];
      rebuilt += lam * comp.F.basis() * comp.F.basis().transpose();
    }
    out.reconstruction_residual = std::max(out.reconstruction_residual, (rebuilt - shapes[k]).cwiseAbs().maxCoeff());
  }
  return out;
}

Vector geodesic_point(const ProductImmersion& imm, const PointFrame& frame, const Vector& x, double t) {
  const int n = imm.n();
  if (x.size() != 2 * n) throw Error(ErrorCode::DimensionMismatch, "tangent vector");
  const Vector& params = frame.params;
  auto arc = [t](const Eigen::Vector3d& point, const Eigen::Vector3d& velocity, double r, bool sphere) {
    const double speed = sphere ? velocity.norm() : std::sqrt(std::max(0.0, lorentz3(velocity, velocity)));
    if (speed == 0.0) return Eigen::Vector3d(point);
    const double angle = speed * t / r;
    const Eigen::Vector3d dir = velocity / speed;
    return Eigen::Vector3d(sphere ? std::cos(angle) * point + r * std::sin(angle) * dir
                                  : std::cosh(angle) * point + r * std::sinh(angle) * dir);
  };

  if (imm.kind() == ImmersionKind::Horosphere) {
    const double r = imm.factors()[0].r;
    const auto [t_theta, t_phi] = sphere_tangents(params[0], params[1]);
    const Eigen::Vector3d vel = x[0] * t_theta + imm.factors()[0].orientation * x[1] * t_phi;
    Vector src(2 * n + 1);
    src.head(3) = arc(r * sphere_unit(params[0], params[1]), vel, r, true);
    src.tail(2 * n - 2) = params.tail(2 * n - 2) + t * x.tail(2 * n - 2);
    return horosphere(src);
  }

  Vector out(3 * n);
  for (int i = 0; i < n; ++i) {
    const SurfaceImmersion& f = imm.factors()[i];
    const double a = params[2 * i];
    const double b = params[2 * i + 1];
    const bool sphere = f.is_sphere();
    const auto tang = sphere ? sphere_tangents(a, b) : hyperboloid_tangents(a, b);
    const Eigen::Vector3d point = f.r * (sphere ? sphere_unit(a, b) : hyperboloid_unit(a, b));
    const Eigen::Vector3d vel = x[2 * i] * tang.first + f.orientation * x[2 * i + 1] * tang.second;
    out.segment<3>(3 * i) = arc(point, vel, f.r, sphere);
  }
  return out;
}

Vector reference_point(const PointFrame& frame, const QuadSpace& ambient, const Vector& direction, double distance) {
  const Vector& f = frame.position;
  Vector u = direction + ambient.inner(direction, f) * f;
  const double nsq = ambient.norm_sq(u);
  if (nsq <= 1e-24) throw Error(ErrorCode::InvalidArgument, "direction is parallel to the position");
  u /= std::sqrt(nsq);
  return std::cosh(distance) * f + std::sinh(distance) * u;
}

HessianResult hessian_check(const ProductImmersion& imm, const PointFrame& frame, const Vector& x,
                            const Vector& reference, double step) {
  const QuadSpace& amb = imm.ambient();
  const Vector& f = frame.position;
  // <f - o, f - o> = 4 sinh^2(r / 2) on the hyperboloid.
  const Vector chord = f - reference;
  HessianResult out;
  out.distance = 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, amb.norm_sq(chord))));
  if (out.distance < 1e-8) throw Error(ErrorCode::ReferencePointCoincides, "reference point equals f(x)");
  const double ch = std::cosh(out.distance);
  const double sh = std::sinh(out.distance);

  const double xx = x.squaredNorm();
  Vector alpha_g = Vector::Zero(amb.dim());
  for (const FactorBlock& block : frame.blocks) alpha_g += x.segment(block.begin, block.size).squaredNorm() * block.eta;
  const Vector alpha_f = alpha_g - xx * f;
  const Vector grad_r = (ch * f - reference) / sh;
  out.analytic = ch * xx + sh * amb.inner(grad_r, alpha_f);

  auto h = [&](double t) { return -amb.inner(geodesic_point(imm, frame, x, t), reference); };
  out.numeric = (h(step) - 2.0 * h(0.0) + h(-step)) / (step * step);
  const double denom = std::max(std::abs(out.analytic), xx);
  out.relative_error = denom > 0.0 ? std::abs(out.analytic - out.numeric) / denom : std::abs(out.numeric);
  return out;
}

Vector umbilical_normal(const ProductImmersion& imm, const PointFrame& frame, double* residual, double tol) {
  const SecondFundamentalData sff = second_fundamental_form(imm, frame);
  const int p = frame.codim();
  const int d = 2 * imm.n();
  Matrix system(d * d, p);
  for (int k = 0; k < p; ++k) {
    const Matrix a = shape_operator(sff, frame, Vector::Unit(p + 1, k));
    system.col(k) = Eigen::Map<const Vector>(a.data(), a.size());
  }
  const Matrix id = Matrix::Identity(d, d);
  const Vector rhs = Eigen::Map<const Vector>(id.data(), id.size());
  const Vector c = system.colPivHouseholderQr().solve(rhs);
  const double res = (system * c - rhs).cwiseAbs().maxCoeff();
  if (residual) *residual = res;
  if (res > std::sqrt(tol)) throw Error(ErrorCode::NoUmbilicalNormal, "no normal with A = I; residual " + std::to_string(res));
  return frame.normal_f() * c;
}

ParallelNormalReport parallel_normal_check(const ProductImmersion& imm, const std::vector<Vector>& params,
                                           double step, double tol) {
  const QuadSpace& amb = imm.ambient();
  ParallelNormalReport out;
  for (const Vector& base : params) {
    const PointFrame frame = frame_at(imm, base);
    double res = 0.0;
    umbilical_normal(imm, frame, &res, tol);
    out.shape_residual = std::max(out.shape_residual, res);
    const Matrix nf = frame.normal_f();
    for (int a = 0; a < imm.param_dim(); ++a) {
      Vector plus = base, minus = base;
      plus[a] += step;
      minus[a] -= step;
      const PointFrame fp = frame_at(imm, plus);
      const PointFrame fm = frame_at(imm, minus);
      const Vector deta = (umbilical_normal(imm, fp, nullptr, tol) - umbilical_normal(imm, fm, nullptr, tol)) / (2 * step);
      const double speed = pseudo_norm(amb, (fp.position - fm.position) / (2 * step));
      const Vector normal_part = nf.transpose() * amb.gram() * deta;
      out.defect = std::max(out.defect, normal_part.norm() / speed);
    }
  }
  return out;
}

}  // namespace kaehler
