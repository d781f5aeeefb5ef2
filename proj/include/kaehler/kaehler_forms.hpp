#pragma once

// The doubled forms beta and gamma built from a symmetric form alpha and a
// complex structure J, together with the structure theory that consumes them:
// span splittings, degenerate decompositions, umbilical analysis, kernel
// bounds, and the constructive diagonalization of flat beta.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "kaehler/bilinear.hpp"

namespace kaehler {

/// J with J^2 = -I that is an isometry of the positive definite domain form.
class ComplexStructure {
public:
  ComplexStructure(Matrix j, const Matrix& domain_inner, double tol = kDefaultTol);

  /// Blocks [[0, -1], [1, 0]]: J e_{2k} = e_{2k+1}.
  static ComplexStructure standard(int n);

  int dim() const { return static_cast<int>(j_.rows()); }
  int n() const { return dim() / 2; }
  const Matrix& matrix() const { return j_; }
  Vector operator()(const Vector& x) const { return j_ * x; }

private:
  Matrix j_;
};

/// W = L + L with <<(a, b), (c, d)>> = <a, c> - <b, d>.
struct DoubledSpace {
  QuadSpace base;
  QuadSpace whole;

  explicit DoubledSpace(QuadSpace base_space);
  int p() const { return base.dim(); }
  Vector first(const Vector& xy) const { return xy.head(p()); }
  Vector second(const Vector& xy) const { return xy.tail(p()); }
  Vector join(const Vector& a, const Vector& b) const;
};

/// What the diagonalization machinery consumes: beta on V with its complex
/// structure and domain inner product. Restrictions to J-invariant subspaces
/// stay in this representation.
struct ComplexForm {
  BilinearMap beta;
  Matrix j;
  Matrix inner;

  int dim() const { return beta.domain_dim(); }
  int n() const { return dim() / 2; }
  int p() const { return beta.target_dim() / 2; }
  QuadSpace base() const;
};

/// Restricts to span(q); q must be orthonormal for the domain inner product
/// and span a J-invariant subspace. J is re-orthonormalized when its defect
/// exceeds tol / 10.
ComplexForm restrict(const ComplexForm& form, const Matrix& q, double tol = kDefaultTol);

class KaehlerPair {
public:
  const BilinearMap& alpha() const { return alpha_; }
  const BilinearMap& beta() const { return beta_; }
  const BilinearMap& gamma() const { return gamma_; }
  const ComplexStructure& J() const { return j_; }
  const Matrix& domain_inner() const { return inner_; }
  const std::optional<Vector>& w() const { return w_; }
  const DoubledSpace& doubled() const { return doubled_; }
  const QuadSpace& base() const { return doubled_.base; }

  int n() const { return j_.n(); }
  int p() const { return doubled_.p(); }
  /// (X, Y) in coordinates.
  double domain_product(const Vector& x, const Vector& y) const { return x.dot(inner_ * y); }

  ComplexForm complex_form() const { return {beta_, j_.matrix(), inner_}; }

  /// Applies a corruption to beta after construction; used for negative
  /// controls in verification suites only.
  void corrupt_beta(int i, int j, int component, double delta);

private:
  friend KaehlerPair build_pair(BilinearMap, ComplexStructure, Matrix, std::optional<Vector>, double);

  KaehlerPair(BilinearMap alpha, ComplexStructure j, Matrix inner, std::optional<Vector> w,
              DoubledSpace doubled, BilinearMap beta, BilinearMap gamma)
      : alpha_(std::move(alpha)), j_(std::move(j)), inner_(std::move(inner)), w_(std::move(w)),
        doubled_(std::move(doubled)), beta_(std::move(beta)), gamma_(std::move(gamma)) {}

  BilinearMap alpha_;
  ComplexStructure j_;
  Matrix inner_;
  std::optional<Vector> w_;
  DoubledSpace doubled_;
  BilinearMap beta_;
  BilinearMap gamma_;
};

/// beta(X,Y) = (a(X,Y) + a(JX,JY), a(X,JY) - a(JX,Y)), gamma(X,Y) = (a(X,Y), a(X,JY)).
/// With w given it must be time-like unit and satisfy <a(X,Y), w> = -(X,Y);
/// otherwise ShapeIdViolation.
KaehlerPair build_pair(BilinearMap alpha, ComplexStructure j, Matrix domain_inner,
                       std::optional<Vector> w, double tol = kDefaultTol);

/// Max residual over basis pairs of beta(X,JY) + beta(JX,Y) and of the three
/// component identities for beta(X,JY), beta(Y,X), beta(JY,X).
double symmetry_report(const BilinearMap& beta, const Matrix& j);
double symmetry_report(const KaehlerPair& pair);

/// max |<<beta(X,Y),(w,0)>> + 2(X,Y)| over basis pairs.
double conditional_alpha_defect(const KaehlerPair& pair);

struct SpanAnalysis {
  Subspace u0;        // first projection of S(beta), inside L
  int s = 0;          // dim u0
  bool degenerate = false;
  std::optional<Vector> v;  // null direction of the radical, when degenerate
  Subspace radical;   // S(beta) intersected with its complement, inside W
  double split_defect = 0.0;    // S(beta) versus u0 + u0
  double radical_defect = 0.0;  // radical versus span{(v,0),(0,v)}
  bool s_in_range = true;       // 1 <= s <= p-1 when degenerate
};

SpanAnalysis span_analysis(const ComplexForm& form, double tol = kDefaultTol);
SpanAnalysis span_analysis(const KaehlerPair& pair, double tol = kDefaultTol);

struct DegenerateSplit {
  Vector v;           // null, <v, w> = -1
  Subspace plane_l;   // span{v, w}
  BilinearMap beta1{0, QuadSpace::euclidean(1)};  // beta projected onto L^perp + L^perp
  int s = 0;
  Subspace kernel1;
  double decomposition_residual = 0.0;
  /// Only meaningful when s <= n.
  bool kernel_bound_holds = true;
};

DegenerateSplit degenerate_split(const KaehlerPair& pair, double tol = kDefaultTol);

/// max |<<beta(X,Y), gamma(Z,T)>> - <<beta(X,T), gamma(Z,Y)>>| over basis 4-tuples.
double compatibility_defect(const KaehlerPair& pair);

struct UmbilicalAnalysis {
  Vector v;
  Vector eta;   // v - w, unit space-like
  Subspace P;   // kernel of beta1, J-invariant
  int m = 0;    // dim P / 2
  double umbilic_defect = 0.0;   // max |<a(X,Y), v>|
  double alphapar_residual = 0.0;
  double j_invariance_defect = 0.0;
  std::vector<double> k_values;
  std::vector<double> ric_values;
  double max_k() const;
  double max_ric() const;
};

inline constexpr int kDefaultCurvatureSamples = 1000;

UmbilicalAnalysis umbilical_analysis(const KaehlerPair& pair, const DegenerateSplit& split,
                                     int samples = kDefaultCurvatureSamples,
                                     std::uint64_t seed = 0, double tol = kDefaultTol);

/// K(S) = <a(S,S), a(JS,JS)> - |a(S,JS)|^2.
double holomorphic_functional(const KaehlerPair& pair, const Vector& s);
/// R(S) = sum_i <a(X_i,X_i), a(S,S)> - |a(X_i,S)|^2 over an orthonormal basis.
double ricci_functional(const KaehlerPair& pair, const Vector& s);

struct LightlikeWitness {
  Vector v;
  double lower_inclusion = 0.0;  // span{v}+span{v} inside S(beta|V x N(X))
  double upper_inclusion = 0.0;  // S(beta|V x N(X)) inside B_X(V) and its complement
  double nullity = 0.0;          // |<v, v>|
  /// max |<pi_i z, v>| over a basis of B_X(V); null components orthogonal
  /// to v are multiples of v.
  double moreover_defect = 0.0;
};

LightlikeWitness kernel_lightlike(const ComplexForm& form, const Vector& x,
                                  double tol = kDefaultTol);
LightlikeWitness kernel_lightlike(const KaehlerPair& pair, const Vector& x,
                                  double tol = kDefaultTol);

struct KernelBound {
  bool holds = false;
  int kernel_dim = 0;
  int bound = 0;
  int regular_rank = 0;
  /// Set when the kernel vanishes: B_X : V -> W is an isomorphism.
  std::optional<bool> isomorphism;
};

KernelBound kernel_bound_check(const ComplexForm& form, double tol = kDefaultTol);
KernelBound kernel_bound_check(const KaehlerPair& pair, double tol = kDefaultTol);

std::pair<Vector, Vector> zero_product_pair(const ComplexForm& form, std::uint64_t seed,
                                            double tol = kDefaultTol);
std::pair<Vector, Vector> zero_product_pair(const KaehlerPair& pair, std::uint64_t seed,
                                            double tol = kDefaultTol);

Vector corank2_element(const ComplexForm& form, std::uint64_t seed, double tol = kDefaultTol);
Vector corank2_element(const KaehlerPair& pair, std::uint64_t seed, double tol = kDefaultTol);

struct Kercod2Split {
  Subspace bzv;
  Subspace rest;
  Vector xi;                    // B_Z Z = (xi, 0)
  double second_component = 0.0; // |second half of B_Z Z|
  double cross_gram = 0.0;
  double xi_norm_sq = 0.0;      // <xi, xi>, nonzero
  bool bzv_is_xi_pair = false;  // B_Z(V) = span{(xi,0),(0,xi)}
  bool sums_to_span = false;    // B_Z(V) + rest = S(beta)
};

Kercod2Split kercod2_split(const ComplexForm& form, const Vector& z, double tol = kDefaultTol);

struct DiagonalizingBasis {
  std::vector<Vector> pairs;    // X_i, unit for the domain inner product
  std::vector<Vector> j_pairs;  // J X_i
  std::vector<Vector> xis;      // normalized xi_i, |<xi_i, xi_i>| = 1
  std::vector<int> norms;       // sign of <xi_i, xi_i>, time-like first
};

/// Residuals of the defining properties of a diagonalizing basis.
struct DiagonalizationDefects {
  double off_block = 0.0;          // max |beta(Y_i, Y_j)|, i != j, 4 choices
  double gram_off_diagonal = 0.0;  // normalized span vectors
  double gram_diagonal = 0.0;      // | |diag| - 1 |
  double basis_orthogonality = 0.0;
  double max() const;
};

DiagonalizingBasis diagonalize(const ComplexForm& form, std::uint64_t seed, double tol = kDefaultTol);
/// Checks the full hypothesis set, including the compatibility of beta with
/// gamma, before running the construction.
DiagonalizingBasis diagonalize(const KaehlerPair& pair, std::uint64_t seed, double tol = kDefaultTol);

DiagonalizationDefects diagonalization_defects(const ComplexForm& form, const DiagonalizingBasis& basis);

/// Sampled necessary check for the absence of J-invariant V1 with
/// S(beta|V1 x V1) degenerate and dim S <= dim V1 - 2. Returns the number of
/// offending samples; zero does not certify the universal condition.
int sampled_degenerate_subspaces(const ComplexForm& form, std::uint64_t seed, int samples = 200,
                                 double tol = kDefaultTol);

}  // namespace kaehler
