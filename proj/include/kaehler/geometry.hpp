#pragma once

// Concrete Kaehler submanifolds of hyperbolic space: extrinsic products of
// umbilical surfaces inside the hyperboloid, and real Kaehler hypersurfaces
// S^2 x R^{2n-2} composed with a horosphere. Everything is expressed in a
// pointwise orthonormal tangent frame.

#include <cstdint>
#include <vector>

#include "kaehler/kaehler_forms.hpp"
#include "kaehler/random.hpp"

namespace kaehler {

enum class AmbientKind { Euclidean, Lorentzian };

/// A round sphere in R^3 (c > 0) or a hyperbolic plane in L^3 (c < 0).
struct SurfaceImmersion {
  double c = 1.0;
  double r = 1.0;
  AmbientKind ambient = AmbientKind::Euclidean;
  int orientation = 1;

  static SurfaceImmersion sphere(double r);
  static SurfaceImmersion hyperbolic(double r);
  bool is_sphere() const { return c > 0; }
};

enum class ImmersionKind { SphereProduct, Horosphere };

class ProductImmersion {
public:
  ImmersionKind kind() const { return kind_; }
  int n() const { return n_; }
  /// Codimension of f in hyperbolic space: n - 1 for products, 2 for horosphere compositions.
  int codim() const { return kind_ == ImmersionKind::SphereProduct ? n_ - 1 : 2; }
  const std::vector<SurfaceImmersion>& factors() const { return factors_; }
  const QuadSpace& ambient() const { return ambient_; }
  int param_dim() const { return 2 * n_; }

  /// f(params); chart parameters per factor are (u, v) on hyperbolic planes,
  /// (theta, phi) on spheres, then the flat coordinates of a horosphere composition.
  Vector position(const Vector& params) const;

private:
  friend ProductImmersion make_example1(const std::vector<double>& radii, double tol);
  friend ProductImmersion make_horosphere_composition(int n, const SurfaceImmersion& surface);

  ProductImmersion(ImmersionKind kind, int n, std::vector<SurfaceImmersion> factors, QuadSpace ambient)
      : kind_(kind), n_(n), factors_(std::move(factors)), ambient_(std::move(ambient)) {}

  ImmersionKind kind_;
  int n_;
  std::vector<SurfaceImmersion> factors_;
  QuadSpace ambient_;
};

/// Radii with -r_1^2 + r_2^2 + ... + r_n^2 = -1; the first factor is hyperbolic.
ProductImmersion make_example1(const std::vector<double>& radii, double tol = 1e-12);
ProductImmersion make_horosphere_composition(int n, const SurfaceImmersion& surface);

/// Parameters drawn from the interior sampling domain of each chart.
Vector random_params(const ProductImmersion& imm, Rng& rng);

/// A factor's frame slots [begin, begin + size) and its umbilical normal.
struct FactorBlock {
  int begin = 0;
  int size = 0;
  Vector eta;  // ambient vector
};

struct PointFrame {
  Vector params;
  Vector position;
  Matrix tangent;         // ambient x 2n, ordered (e_1, J e_1, ...)
  Matrix normal_g;        // ambient x (codim + 1): normal frame of g, position last
  Vector normal_g_signs;  // diag of the normal Gram: (1, ..., 1, -1)
  ComplexStructure J = ComplexStructure::standard(1);
  std::vector<FactorBlock> blocks;

  int codim() const { return static_cast<int>(normal_g.cols()) - 1; }
  Matrix normal_f() const { return normal_g.leftCols(codim()); }
  /// Tangent coordinates to ambient vector.
  Vector push(const Vector& x) const { return tangent * x; }
};

PointFrame frame_at(const ProductImmersion& imm, const Vector& params);

struct SecondFundamentalData {
  BilinearMap alpha_f{0, QuadSpace::euclidean(1)};  // N_f coordinates
  BilinearMap alpha_g{0, QuadSpace::euclidean(1)};  // N_g coordinates, position slot last
  std::vector<Vector> etas;                         // ambient umbilical normals per factor
  std::vector<Vector> eta_coords;                   // the same in N_g coordinates
};

SecondFundamentalData second_fundamental_form(const ProductImmersion& imm, const PointFrame& frame);

/// Coordinates of an ambient normal vector in the N_g frame, and back.
Vector normal_coordinates(const PointFrame& frame, const QuadSpace& ambient, const Vector& v);
Vector ambient_normal(const PointFrame& frame, const Vector& coords);

/// The Gauss equation of g in the flat ambient:
/// <R(X,Y)Z,T> = <a(X,T), a(Y,Z)> - <a(X,Z), a(Y,T)>.
class CurvatureTensor {
public:
  CurvatureTensor(BilinearMap alpha_g, Matrix j) : alpha_(std::move(alpha_g)), j_(std::move(j)) {}

  double operator()(const Vector& x, const Vector& y, const Vector& z, const Vector& t) const;
  double sectional(const Vector& x, const Vector& y) const;
  double holomorphic(const Vector& s) const { return sectional(s, j_ * s); }
  /// sum_k <R(S, e_k) e_k, S> over the orthonormal frame.
  double ricci(const Vector& s) const;

private:
  BilinearMap alpha_;
  Matrix j_;
};

CurvatureTensor curvature_tensor(const ProductImmersion& imm, const PointFrame& frame);
double curvature(const ProductImmersion& imm, const PointFrame& frame, const Vector& x, const Vector& y,
                 const Vector& z, const Vector& t);

/// The pair (alpha^g, J, w = position) at a point.
KaehlerPair kaehler_pair_at(const ProductImmersion& imm, const PointFrame& frame, double tol = kDefaultTol);

struct FlatSubspaceWitness {
  Subspace V;
  int ell = 0;
  double max_holomorphic = 0.0;
  double max_ricci = 0.0;
  double j_invariance_defect = 0.0;
  UmbilicalAnalysis analysis;
};

FlatSubspaceWitness flat_subspace_witness(const ProductImmersion& imm, const PointFrame& frame,
                                          int samples = kDefaultCurvatureSamples, std::uint64_t seed = 0,
                                          double tol = kDefaultTol);

struct EigenComponent {
  Subspace F;
  Vector eta;          // N_g coordinates
  Vector eta_ambient;
};

struct EigenSplit {
  std::vector<EigenComponent> components;
  double commutator_defect = 0.0;
  double reconstruction_residual = 0.0;
};

/// Common eigenspaces of the shape operators of g over N_g, where the
/// eigenvalue functionals are represented by pairwise orthogonal normals.
EigenSplit eigen_split(const ProductImmersion& imm, const PointFrame& frame, std::uint64_t seed = 0,
                       double tol = kDefaultTol);

/// Shape operator of g in the direction of an N_g coordinate vector.
Matrix shape_operator(const SecondFundamentalData& sff, const PointFrame& frame, const Vector& xi_coords);

/// Point of M reached at time t along the geodesic with initial velocity X
/// (tangent coordinates).
Vector geodesic_point(const ProductImmersion& imm, const PointFrame& frame, const Vector& x, double t);

/// cosh(d) f + sinh(d) u for the unit vector obtained by projecting `direction` onto T_f H.
Vector reference_point(const PointFrame& frame, const QuadSpace& ambient, const Vector& direction,
                       double distance);

struct HessianResult {
  double analytic = 0.0;
  double numeric = 0.0;
  double distance = 0.0;
  /// |analytic - numeric| / max(|analytic|, |X|^2), zero when both vanish.
  double relative_error = 0.0;
};

inline constexpr double kDefaultStep = 1e-4;

HessianResult hessian_check(const ProductImmersion& imm, const PointFrame& frame, const Vector& x,
                            const Vector& reference, double step = kDefaultStep);

/// Solves A_eta = I over N_f; NoUmbilicalNormal when no such normal exists.
Vector umbilical_normal(const ProductImmersion& imm, const PointFrame& frame, double* residual = nullptr,
                        double tol = kDefaultTol);

struct ParallelNormalReport {
  double defect = 0.0;             // finite-difference normal derivative of eta
  double shape_residual = 0.0;     // max |A_eta - I|
};

ParallelNormalReport parallel_normal_check(const ProductImmersion& imm, const std::vector<Vector>& params,
                                           double step = kDefaultStep, double tol = kDefaultTol);

}  // namespace kaehler
