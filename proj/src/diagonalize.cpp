#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "internal.hpp"
#include "kaehler/error.hpp"
#include "kaehler/kaehler_forms.hpp"
#include "kaehler/random.hpp"

namespace kaehler {

namespace {

constexpr int kSearchSamples = 64;

double unit_norm(const Matrix& inner, const Vector& x) { return std::sqrt(x.dot(inner * x)); }

Vector normalized(const Matrix& inner, const Vector& x) { return x / unit_norm(inner, x); }

// Pair search with the hypotheses already established by the caller.
std::pair<Vector, Vector> zero_product_search(const ComplexForm& form, Rng& rng, double tol) {
  const BilinearMap& beta = form.beta;
  const int d = form.dim();
  const Matrix& j = form.j;

  const RegularElement z1 = find_regular_element(beta, rng.next_seed(), kDefaultRegularSamples, tol);
  if (z1.rank != d) throw Error(ErrorCode::SearchFailed, "no element with invertible left map");
  Matrix plane(d, 2);
  plane << z1.x, j * z1.x;
  const Subspace z1_plane = Subspace::span(plane, tol);

  std::optional<Vector> z2;
  for (int attempt = 0; attempt < kSearchSamples && !z2; ++attempt) {
    const Vector cand = rng.unit_vector(d);
    if (z1_plane.distance(cand) < 0.1) continue;
    if (left_map(beta, cand, tol).rank() == d) z2 = cand;
  }
  if (!z2) throw Error(ErrorCode::SearchFailed, "no second element off span{Z1, JZ1}");

  const Matrix m1 = left_map(beta, z1.x, tol).matrix;
  const Matrix m2 = left_map(beta, *z2, tol).matrix;
  const Matrix a = m1.colPivHouseholderQr().solve(m2);
  const double transfer = (m1 * a - m2).norm();
  if (transfer > std::sqrt(tol) * (1.0 + m2.norm()))
    throw Error(ErrorCode::SearchFailed, "B_Z2(V) is not contained in B_Z1(V)");

  Eigen::EigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::SearchFailed, "eigen decomposition failed");
  const Eigen::VectorXcd lambdas = eig.eigenvalues();
  const Eigen::MatrixXcd vectors = eig.eigenvectors();
  std::vector<int> order(static_cast<std::size_t>(lambdas.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
    return std::abs(lambdas[l].imag()) < std::abs(lambdas[r].imag());
  });

  const double thr = tol * std::max(1.0, beta.max_entry_norm());
  for (int idx : order) {
    const std::complex<double> lambda = lambdas[idx];
    const Vector s1 = *z2 - lambda.real() * z1.x;
    const Vector s2 = -lambda.imag() * z1.x;
    const Vector t1 = vectors.col(idx).real();
    const Vector t2 = vectors.col(idx).imag();
    const std::pair<Vector, Vector> cands[2] = {{s1 - j * s2, t1 + j * t2}, {s1 + j * s2, t1 - j * t2}};
    double best = std::numeric_limits<double>::infinity();
    std::optional<std::pair<Vector, Vector>> chosen;
    for (const auto& [x, y] : cands) {
      if (x.norm() < tol || y.norm() < tol) continue;
      const Vector xn = x.normalized();
      const Vector yn = y.normalized();
      const double residual = beta(xn, yn).norm();
      if (residual <= thr && residual < best) {
        best = residual;
        chosen = std::make_pair(xn, yn);
      }
    }
    if (chosen) return *chosen;
  }
  throw Error(ErrorCode::SearchFailed, "no eigenpair yields a zero product");
}

int left_rank(const BilinearMap& beta, const Vector& x, double tol) { return left_map(beta, x, tol).rank(); }

Vector corank2_search(const ComplexForm& form, Rng& rng, double tol, int depth) {
  const int d = form.dim();
  const int n = form.n();
  if (n == 1) return normalized(form.inner, Vector::Unit(d, 0));

  const Vector x = zero_product_search(form, rng, tol).first;
  const int rank = left_rank(form.beta, x, tol);
  if (rank % 2 != 0 || rank < 2 || rank > d - 2)
    throw Error(ErrorCode::RecursionFailed, "left map of a zero-product vector has rank " + std::to_string(rank));
  const int r = rank / 2;
  if (r == 1) return x;

  const Subspace kernel = left_map(form.beta, x, tol).kernel();
  if (r == n - 1) return normalized(form.inner, kernel.vector(0));

  // 2 <= r <= n - 2: descend into N(X), whose span must be nondegenerate.
  const Matrix q = detail::orthonormal_basis(form.inner, kernel.basis());
  const ComplexForm sub = restrict(form, q, tol);
  if (is_degenerate(sub.beta.target(), image_span(sub.beta, tol), tol))
    throw Error(ErrorCode::RecursionFailed, "restricted span is degenerate at depth " + std::to_string(depth));
  const Vector z = q * corank2_search(sub, rng, tol, depth + 1);
  return normalized(form.inner, z);
}

void require_nondegenerate_span(const ComplexForm& form, double tol) {
  const Subspace s = image_span(form.beta, tol);
  if (is_degenerate(form.beta.target(), s, tol)) throw Error(ErrorCode::DegenerateSpan, "S(beta) is degenerate");
}

void require_diag_hypotheses(const ComplexForm& form, double tol) {
  if (!flatness_report(form.beta, tol).is_flat) throw Error(ErrorCode::NotFlat, "beta is not flat");
  require_nondegenerate_span(form, tol);
  if (!right_kernel(form.beta, tol).is_zero()) throw Error(ErrorCode::KernelNonzero, "N(beta) is nonzero");
}

}  // namespace

std::pair<Vector, Vector> zero_product_pair(const ComplexForm& form, std::uint64_t seed, double tol) {
  if (form.n() < 2) throw Error(ErrorCode::InvalidArgument, "a zero-product pair needs n >= 2");
  try {
    require_diag_hypotheses(form, tol);
  } catch (const Error& e) {
    throw Error(ErrorCode::HypothesisViolated, e.what());
  }
  Rng rng(seed);
  return zero_product_search(form, rng, tol);
}

std::pair<Vector, Vector> zero_product_pair(const KaehlerPair& pair, std::uint64_t seed, double tol) {
  return zero_product_pair(pair.complex_form(), seed, tol);
}

Vector corank2_element(const ComplexForm& form, std::uint64_t seed, double tol) {
  require_diag_hypotheses(form, tol);
  Rng rng(seed);
  const Vector z = corank2_search(form, rng, tol, 0);
  const int rank = left_rank(form.beta, z, tol);
  if (rank != 2) throw Error(ErrorCode::RecursionFailed, "result has left map rank " + std::to_string(rank));
  return z;
}

Vector corank2_element(const KaehlerPair& pair, std::uint64_t seed, double tol) {
  return corank2_element(pair.complex_form(), seed, tol);
}

Kercod2Split kercod2_split(const ComplexForm& form, const Vector& z, double tol) {
  const BilinearMap& beta = form.beta;
  if (!flatness_report(beta, tol).is_flat) throw Error(ErrorCode::NotFlat, "beta is not flat");
  require_nondegenerate_span(form, tol);
  const LinearMap bz = left_map(beta, z, tol);
  const Subspace kernel = bz.kernel();
  if (kernel.rank() != form.dim() - 2)
    throw Error(ErrorCode::BadCorank, "dim N(Z) = " + std::to_string(kernel.rank()));

  const int p = form.p();
  const QuadSpace& whole = beta.target();
  const QuadSpace base = form.base();
  Kercod2Split out;
  out.bzv = bz.image();
  out.rest = kernel.is_zero() ? Subspace::zero(2 * p) : restricted_span(beta, kernel, kernel, tol);
  const Vector bzz = beta(z, z);
  out.xi = bzz.head(p);
  out.second_component = bzz.tail(p).norm();
  out.xi_norm_sq = base.norm_sq(out.xi);
  if (out.rest.rank() > 0)
    out.cross_gram = (out.bzv.basis().transpose() * whole.gram() * out.rest.basis()).cwiseAbs().maxCoeff();

  Matrix xi_pair = Matrix::Zero(2 * p, 2);
  xi_pair.col(0).head(p) = out.xi;
  xi_pair.col(1).tail(p) = out.xi;
  const Subspace xis = Subspace::span(xi_pair, tol);
  out.bzv_is_xi_pair = xis.rank() == 2 && same_span(xis, out.bzv, tol) &&
                       std::abs(out.xi_norm_sq) > std::sqrt(tol) * out.xi.squaredNorm();
  out.sums_to_span = same_span(sum(out.bzv, out.rest, tol), image_span(beta, tol), tol);
  return out;
}

DiagonalizingBasis diagonalize(const ComplexForm& form, std::uint64_t seed, double tol) {
  require_diag_hypotheses(form, tol);
  const SpanAnalysis sa = span_analysis(form, tol);
  if (sa.s != form.n())
    throw Error(ErrorCode::HypothesisViolated, "s = " + std::to_string(sa.s) + " differs from n");
  if (form.p() >= 4 && sampled_degenerate_subspaces(form, seed, 200, tol) > 0)
    throw Error(ErrorCode::HypothesisViolated, "found a degenerate J-invariant subspace");

  Rng rng(seed);
  const int d = form.dim();
  const int n = form.n();
  const int p = form.p();
  const QuadSpace base = form.base();
  Matrix lift = Matrix::Identity(d, d);
  ComplexForm current = form;

  struct Slot {
    Vector x;
    Vector xi;
    int sign;
  };
  std::vector<Slot> slots;
  for (int level = 0; level < n; ++level) {
    const Vector local = corank2_search(current, rng, tol, 0);
    const int rank = left_rank(current.beta, local, tol);
    if (rank != 2)
      throw Error(ErrorCode::RecursionFailed, "level " + std::to_string(level) + " element has rank " +
                                                  std::to_string(rank));
    const Vector x = normalized(form.inner, lift * local);
    const Vector xi = form.beta(x, x).head(p);
    const double nsq = base.norm_sq(xi);
    if (std::abs(nsq) <= std::sqrt(tol) * xi.squaredNorm())
      throw Error(ErrorCode::RecursionFailed, "xi is null at level " + std::to_string(level));
    slots.push_back({x, xi / std::sqrt(std::abs(nsq)), nsq > 0 ? 1 : -1});
    if (level + 1 == n) break;

    const Subspace kernel = left_map(current.beta, local, tol).kernel();
    const Matrix q = detail::orthonormal_basis(current.inner, kernel.basis());
    current = restrict(current, q, tol);
    lift = lift * q;
    if (is_degenerate(current.beta.target(), image_span(current.beta, tol), tol))
      throw Error(ErrorCode::RecursionFailed, "restricted span is degenerate at level " + std::to_string(level));
  }

  std::stable_partition(slots.begin(), slots.end(), [](const Slot& s) { return s.sign < 0; });
  DiagonalizingBasis out;
  for (const Slot& s : slots) {
    out.pairs.push_back(s.x);
    out.j_pairs.push_back(form.j * s.x);
    out.xis.push_back(s.xi);
    out.norms.push_back(s.sign);
  }
  return out;
}

DiagonalizingBasis diagonalize(const KaehlerPair& pair, std::uint64_t seed, double tol) {
  const ComplexForm form = pair.complex_form();
  if (!flatness_report(form.beta, tol).is_flat) throw Error(ErrorCode::NotFlat, "beta is not flat");
  require_nondegenerate_span(form, tol);
  const double compat = compatibility_defect(pair);
  if (compat > detail::compat_threshold(pair.beta(), pair.gamma(), tol))
    throw Error(ErrorCode::HypothesisViolated, "beta and gamma are incompatible: " + std::to_string(compat));
  return diagonalize(form, seed, tol);
}

double DiagonalizationDefects::max() const {
  return std::max({off_block, gram_off_diagonal, gram_diagonal, basis_orthogonality});
}

DiagonalizationDefects diagonalization_defects(const ComplexForm& form, const DiagonalizingBasis& basis) {
  DiagonalizationDefects out;
  const BilinearMap& beta = form.beta;
  const int n = static_cast<int>(basis.pairs.size());
  const int p = form.p();
  const QuadSpace base = form.base();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (i == k) continue;
      for (const Vector* a : {&basis.pairs[i], &basis.j_pairs[i]})
        for (const Vector* b : {&basis.pairs[k], &basis.j_pairs[k]}) {
          out.off_block = std::max(out.off_block, beta(*a, *b).norm());
          out.basis_orthogonality = std::max(out.basis_orthogonality, std::abs(a->dot(form.inner * *b)));
        }
    }

  Matrix u(2 * p, 2 * n);
  std::vector<double> expected(2 * n);
  for (int i = 0; i < n; ++i) {
    const Vector& x = basis.pairs[i];
    const Vector bxx = beta(x, x);
    const double scale = std::sqrt(std::abs(base.norm_sq(bxx.head(p))));
    u.col(2 * i) = bxx / scale;
    u.col(2 * i + 1) = beta(x, basis.j_pairs[i]) / scale;
    expected[2 * i] = basis.norms[i];
    expected[2 * i + 1] = -basis.norms[i];
  }
  const Matrix gram = u.transpose() * beta.target().gram() * u;
  for (int a = 0; a < 2 * n; ++a)
    for (int b = 0; b < 2 * n; ++b) {
      if (a == b)
        out.gram_diagonal = std::max(out.gram_diagonal, std::abs(gram(a, a) - expected[a]));
      else
        out.gram_off_diagonal = std::max(out.gram_off_diagonal, std::abs(gram(a, b)));
    }
  return out;
}

int sampled_degenerate_subspaces(const ComplexForm& form, std::uint64_t seed, int samples, double tol) {
  Rng rng(seed ^ 0x5bd1e995ULL);
  const int d = form.dim();
  const int n = form.n();
  int offending = 0;
  for (int k = 1; k < n; ++k) {
    for (int s = 0; s < samples; ++s) {
      Matrix gens(d, 2 * k);
      for (int i = 0; i < k; ++i) {
        const Vector y = rng.normal_vector(d);
        gens.col(2 * i) = y;
        gens.col(2 * i + 1) = form.j * y;
      }
      const Subspace v1 = Subspace::span(gens, tol);
      if (v1.rank() != 2 * k) continue;
      const Matrix q = detail::orthonormal_basis(form.inner, v1.basis());
      const Subspace span = image_span(form.beta.restrict(q), tol);
      if (span.rank() <= 2 * k - 2 && is_degenerate(form.beta.target(), span, tol)) ++offending;
    }
  }
  return offending;
}

}  // namespace kaehler
