#include <chrono>
#include <cmath>
#include <map>
#include <numbers>

#include "internal.hpp"
#include "kaehler/driver.hpp"
#include "kaehler/error.hpp"
#include "kaehler/geometry.hpp"
#include "kaehler/random.hpp"

namespace kaehler {

namespace {

using json = nlohmann::ordered_json;

class Timer {
public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  std::int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

// Per-check maxima over a sweep, emitted in first-seen order.
class Sweep {
public:
  void note(const std::string& name, double value, double tolerance) {
    auto it = index_.find(name);
    if (it == index_.end()) {
      index_[name] = entries_.size();
      entries_.push_back({name, value, tolerance});
      return;
    }
    Entry& e = entries_[it->second];
    if (std::isnan(value) || value > e.value) e.value = value;
  }
  void at_least(const std::string& name, double value, double bound) { note(name, std::max(0.0, bound - value), 0.0); }
  void flag(const std::string& name, bool ok) { note(name, ok ? 0.0 : 1.0, 0.0); }

  void emit(Report& report) const {
    for (const Entry& e : entries_) report.add(e.name, e.value, e.tolerance);
  }

private:
  struct Entry {
    std::string name;
    double value;
    double tolerance;
  };
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
};

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

void fail_with(Report& report, const Error& e) {
  report.reason = std::string(to_string(e.code()));
  report.values["error"] = e.what();
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double frame_gram_defect(const QuadSpace& amb, const PointFrame& frame) {
  const Matrix& t = frame.tangent;
  return max_abs(t.transpose() * amb.gram() * t - Matrix::Identity(t.cols(), t.cols()));
}

double shapeid_defect(const KaehlerPair& pair) {
  const int d = pair.alpha().domain_dim();
  const Vector gw = pair.base().gram() * *pair.w();
  double defect = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      defect = std::max(defect, std::abs(pair.alpha().at(a, b).dot(gw) + pair.domain_inner()(a, b)));
  return defect;
}

Subspace plane(const Vector& x, const Vector& jx) {
  Matrix m(x.size(), 2);
  m << x, jx;
  return Subspace::span(m);
}

Subspace coordinate_block(int dim, int begin, int size) {
  return Subspace::span(Matrix(Matrix::Identity(dim, dim).middleCols(begin, size)));
}

// Matches each recovered subspace to its closest expected one; pi/2 unless
// the matching is a bijection.
double alignment(const std::vector<Subspace>& recovered, const std::vector<Subspace>& expected,
                 std::vector<int>* match = nullptr) {
  std::vector<int> assigned(recovered.size(), -1);
  std::vector<bool> used(expected.size(), false);
  double worst = 0.0;
  for (std::size_t i = 0; i < recovered.size(); ++i) {
    double best = std::numbers::pi / 2;
    for (std::size_t j = 0; j < expected.size(); ++j) {
      const double angle = max_principal_angle(recovered[i], expected[j]);
      if (angle < best) {
        best = angle;
        assigned[i] = static_cast<int>(j);
      }
    }
    if (assigned[i] < 0 || used[assigned[i]]) return std::numbers::pi / 2;
    used[assigned[i]] = true;
    worst = std::max(worst, best);
  }
  if (recovered.size() != expected.size()) return std::numbers::pi / 2;
  if (match) *match = assigned;
  return worst;
}

Matrix random_complex_structure(Rng& rng, int n) {
  const Matrix q = Eigen::HouseholderQR<Matrix>(rng.normal_matrix(2 * n, 2 * n)).householderQ();
  return q * ComplexStructure::standard(n).matrix() * q.transpose();
}

// Random symmetric alpha into diag(1, ..., 1, -1) whose last component is
// the domain inner product, so <alpha(X,Y), e_last> = -(X,Y).
BilinearMap random_shape_form(Rng& rng, int d, int p) {
  Vector signs = Vector::Ones(p);
  signs[p - 1] = -1.0;
  BilinearMap alpha(d, QuadSpace::diagonal(signs));
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      Vector v = rng.normal_vector(p);
      v[p - 1] = a == b ? 1.0 : 0.0;
      alpha.set(a, b, v);
      alpha.set(b, a, v);
    }
  return alpha;
}

// Symmetric alpha factoring through a random rank-m projection, so its beta
// has a kernel of dimension at least 2n - 2m generically.
BilinearMap random_low_rank_form(Rng& rng, int d, int m, const QuadSpace& target) {
  BilinearMap core(m, target);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      const Vector v = rng.normal_vector(target.dim());
      core.set(a, b, v);
      core.set(b, a, v);
    }
  return core.restrict(rng.normal_matrix(m, d));
}

// Flat form: separable terms along orthonormal space-like directions plus an
// arbitrary bilinear coefficient along a null direction orthogonal to them,
// all moved by a random boost.
BilinearMap random_flat_form(Rng& rng, int d, int q) {
  const int terms = std::max(1, std::min(q - 2, d - 2));
  const QuadSpace w = QuadSpace::minkowski(q);
  Matrix boost = Matrix::Identity(q, q);
  const double rapidity = rng.uniform(-1.0, 1.0);
  boost(0, 0) = boost(1, 1) = std::cosh(rapidity);
  boost(0, 1) = boost(1, 0) = std::sinh(rapidity);
  Matrix rot = Matrix::Identity(q, q);
  if (q > 2) {
    const Matrix r = Eigen::HouseholderQR<Matrix>(rng.normal_matrix(q - 1, q - 1)).householderQ();
    rot.bottomRightCorner(q - 1, q - 1) = r;
  }
  const Matrix lambda = rot * boost;
  Vector null_dir = Vector::Zero(q);
  null_dir[0] = 1.0;
  null_dir[q - 1] = 1.0;
  BilinearMap phi(d, w);
  std::vector<std::pair<Vector, Vector>> coeffs;
  for (int k = 0; k < terms; ++k) coeffs.emplace_back(rng.normal_vector(d), rng.normal_vector(d));
  const Matrix m = rng.normal_matrix(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Vector v = m(a, b) * null_dir;
      for (int k = 0; k < terms; ++k) v[1 + k] += coeffs[k].first[a] * coeffs[k].second[b];
      phi.set(a, b, lambda * v);
    }
  return phi;
}

// Degenerate L in diag(1..1, -1..-1): a null vector and random vectors orthogonal to it.
Subspace random_degenerate_subspace(Rng& rng, const QuadSpace& w, int n_plus, int extra) {
  const int dim = w.dim();
  Vector u = Vector::Zero(dim);
  u.head(n_plus) = rng.unit_vector(n_plus);
  u.tail(dim - n_plus) = rng.unit_vector(dim - n_plus);
  Matrix gens(dim, extra + 1);
  gens.col(0) = u;
  Vector partner = Vector::Zero(dim);
  partner.head(n_plus) = u.head(n_plus);
  const double up = w.inner(u, partner);
  for (int k = 0; k < extra; ++k) {
    Vector y = rng.normal_vector(dim);
    y -= w.inner(y, u) / up * partner;
    gens.col(k + 1) = y;
  }
  return Subspace::span(gens);
}

}  // namespace

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::InvalidArgument:
    case ErrorCode::CurvatureConstraintViolated:
    case ErrorCode::ChartDomainError:
      return true;
    default:
      return false;
  }
}

std::string basis_document(const DiagonalizingBasis& basis) {
  json j;
  json pairs = json::array(), jpairs = json::array(), xis = json::array();
  for (std::size_t i = 0; i < basis.pairs.size(); ++i) {
    pairs.push_back(vector_json(basis.pairs[i]));
    jpairs.push_back(vector_json(basis.j_pairs[i]));
    xis.push_back(vector_json(basis.xis[i]));
  }
  j["pairs"] = std::move(pairs);
  j["j_pairs"] = std::move(jpairs);
  j["xis"] = std::move(xis);
  j["norms"] = basis.norms;
  return j.dump(1) + "\n";
}

CommandResult cmd_check_flat(const FormFile& file, double tol) {
  Timer timer;
  CommandResult out;
  Report& rep = out.report;
  rep.suite = "check-flat";
  try {
    const BilinearMap phi = file.describes_alpha() ? file.pair(tol).beta() : file.form();
    const FlatnessReport fr = flatness_report(phi, tol);
    rep.add("flatness", fr.max_defect, fr.threshold);
    rep.values["form"] = file.describes_alpha() ? "beta" : "raw";
    rep.values["worst_tuple"] = fr.worst_tuple;
  } catch (const Error& e) {
    if (is_input_error(e.code())) throw;
    fail_with(rep, e);
  }
  rep.runtime_ms = timer.elapsed_ms();
  return out;
}

CommandResult cmd_diagonalize(const FormFile& file, double tol, std::uint64_t seed) {
  Timer timer;
  CommandResult out;
  Report& rep = out.report;
  rep.suite = "diagonalize";
  rep.seed = seed;
  if (!file.J) throw Error(ErrorCode::ParseError, "diagonalize needs a complex structure J");
  try {
    const ComplexForm form = file.complex_form(tol);
    const DiagonalizingBasis basis =
        file.describes_alpha() ? diagonalize(file.pair(tol), seed, tol) : diagonalize(form, seed, tol);
    const DiagonalizationDefects defects = diagonalization_defects(form, basis);
    rep.add("off_block", defects.off_block, 10 * tol);
    rep.add("gram_off_diagonal", defects.gram_off_diagonal, 10 * tol);
    rep.add("gram_diagonal", defects.gram_diagonal, 10 * tol);
    if (file.describes_alpha()) rep.add("basis_orthogonality", defects.basis_orthogonality, 10 * tol);
    rep.values["pairs"] = basis.pairs.size();
    rep.values["norms"] = basis.norms;
    out.document = basis_document(basis);
  } catch (const Error& e) {
    if (is_input_error(e.code()) && e.code() != ErrorCode::InvalidArgument) throw;
    fail_with(rep, e);
  }
  rep.runtime_ms = timer.elapsed_ms();
  return out;
}

CommandResult cmd_example_suite(const std::vector<double>& radii, const SuiteOptions& opt) {
  Timer timer;
  if (opt.points < 1) throw Error(ErrorCode::InvalidArgument, "--points must be positive");
  const ProductImmersion imm = make_example1(radii);
  const double tol = opt.tol;
  const int n = imm.n();
  const int d = 2 * n;
  const QuadSpace& amb = imm.ambient();
  CommandResult out;
  Report& rep = out.report;
  rep.suite = "example-suite";
  rep.seed = opt.seed;
  Sweep sweep;

  double reciprocal = 1.0;
  std::vector<double> curv;
  for (const SurfaceImmersion& f : imm.factors()) {
    reciprocal += 1.0 / f.c;
    curv.push_back(f.c);
  }
  sweep.note("curvature_constraint", std::abs(reciprocal), 1e-12);

  Rng rng(opt.seed);
  try {
    for (int pt = 0; pt < opt.points; ++pt) {
      const PointFrame frame = frame_at(imm, random_params(imm, rng));
      sweep.note("position_norm", std::abs(amb.norm_sq(frame.position) + 1.0), 1e-12);
      sweep.note("tangent_frame", frame_gram_defect(amb, frame), 1e-10);
      sweep.note("position_orthogonal", max_abs(frame.tangent.transpose() * amb.gram() * frame.position), 1e-10);

      const SecondFundamentalData sff = second_fundamental_form(imm, frame);
      const KaehlerPair pair = kaehler_pair_at(imm, frame, tol);
      if (pt == 0) out.document = FormFile::from_pair(pair).dump();
      sweep.note("shapeid", shapeid_defect(pair), 1e-10);
      sweep.note("flatness", flatness_report(pair.beta(), tol).max_defect, tol);
      sweep.note("product_star", compatibility_defect(pair), tol);
      sweep.note("symmetries", symmetry_report(pair), tol);
      sweep.note("conditional_alpha", conditional_alpha_defect(pair), tol);

      const SpanAnalysis sa = span_analysis(pair, tol);
      sweep.note("span_split", sa.split_defect, tol);
      sweep.flag("span_nondegenerate", !sa.degenerate);
      sweep.note("span_rank", std::abs(sa.s - n), 0.0);
      const KernelBound kb = kernel_bound_check(pair, tol);
      sweep.flag("regular_isomorphism", kb.isomorphism.value_or(false));

      const DiagonalizingBasis basis = diagonalize(pair, rng.next_seed(), tol);
      const DiagonalizationDefects defects = diagonalization_defects(pair.complex_form(), basis);
      sweep.note("diag_off_block", defects.off_block, 1e-8);
      sweep.note("diag_gram_off_diagonal", defects.gram_off_diagonal, 1e-8);
      sweep.note("diag_gram_diagonal", defects.gram_diagonal, 1e-8);
      sweep.note("diag_basis_orthogonality", defects.basis_orthogonality, 1e-8);
      std::vector<Subspace> recovered, factor_planes;
      for (int i = 0; i < n; ++i) {
        recovered.push_back(plane(basis.pairs[i], basis.j_pairs[i]));
        factor_planes.push_back(coordinate_block(d, 2 * i, 2));
      }
      sweep.note("diag_factor_planes", alignment(recovered, factor_planes), 1e-7);
      int rank_defect = 0;
      for (const Vector& xi : basis.xis) rank_defect = std::max(rank_defect, std::abs(numerical_rank(shape_operator(sff, frame, xi), tol) - 2));
      sweep.note("shape_operator_rank", rank_defect, 0.0);

      const CurvatureTensor r(sff.alpha_g, frame.J.matrix());
      json kvals = json::array(), rics = json::array();
      for (int j = 0; j < n; ++j) {
        const Vector x = Vector::Unit(d, 2 * j);
        const double k = r.holomorphic(x);
        const double ric = r.ricci(x);
        sweep.note("holomorphic_curvature", std::abs(k - curv[j]), tol);
        sweep.note("ricci", std::abs(ric - curv[j]), tol);
        kvals.push_back(k);
        rics.push_back(ric);
      }
      if (pt == 0) {
        rep.values["K"] = kvals;
        rep.values["Ric"] = rics;
        rep.values["c"] = curv;
      }
      double mixed = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          if (a / 2 != b / 2) mixed = std::max(mixed, std::abs(r.sectional(Vector::Unit(d, a), Vector::Unit(d, b))));
      sweep.note("mixed_sectional", mixed, 1e-10);
      double kaehler = 0.0;
      for (int s = 0; s < 10; ++s) {
        const Vector x = rng.normal_vector(d), y = rng.normal_vector(d), z = rng.normal_vector(d),
                     t = rng.normal_vector(d);
        const Matrix& j = frame.J.matrix();
        kaehler = std::max(kaehler, std::abs(r(x, y, j * z, j * t) - r(x, y, z, t)));
      }
      sweep.note("kaehler_curvature", kaehler, tol);

      const EigenSplit es = eigen_split(imm, frame, rng.next_seed(), tol);
      sweep.note("normal_commutators", es.commutator_defect, 1e-10);
      sweep.note("eigen_reconstruction", es.reconstruction_residual, tol);
      std::vector<Subspace> fs;
      for (const EigenComponent& c : es.components) fs.push_back(c.F);
      std::vector<int> match;
      sweep.note("eigen_factor_planes", alignment(fs, factor_planes, &match), 1e-7);
      double eta_err = match.empty() ? 1.0 : 0.0, eta_orth = 0.0;
      const QuadSpace normal_space = QuadSpace::diagonal(frame.normal_g_signs);
      for (std::size_t i = 0; i < es.components.size(); ++i) {
        if (!match.empty()) eta_err = std::max(eta_err, (es.components[i].eta - sff.eta_coords[match[i]]).norm());
        for (std::size_t k = i + 1; k < es.components.size(); ++k)
          eta_orth = std::max(eta_orth, std::abs(normal_space.inner(es.components[i].eta, es.components[k].eta)));
      }
      sweep.note("eigen_normals", eta_err, 100 * tol);
      sweep.note("eigen_normals_orthogonal", eta_orth, tol);

      const Vector x = rng.normal_vector(d);
      const Vector o = reference_point(frame, amb, rng.normal_vector(amb.dim()), 1.0);
      sweep.note("hessian", hessian_check(imm, frame, x, o).relative_error, 1e-4);
    }
  } catch (const Error& e) {
    if (is_input_error(e.code())) throw;
    fail_with(rep, e);
  }
  sweep.emit(rep);
  rep.values["points"] = opt.points;
  rep.runtime_ms = timer.elapsed_ms();
  return out;
}

CommandResult cmd_horosphere_suite(int n, const SuiteOptions& opt) {
  Timer timer;
  if (opt.points < 1) throw Error(ErrorCode::InvalidArgument, "--points must be positive");
  const ProductImmersion imm = make_horosphere_composition(n, SurfaceImmersion::sphere(1.0));
  const double tol = opt.tol;
  const int d = 2 * n;
  const int p = imm.codim();
  const QuadSpace& amb = imm.ambient();
  CommandResult out;
  Report& rep = out.report;
  rep.suite = "horosphere-suite";
  rep.seed = opt.seed;
  Sweep sweep;
  Rng rng(opt.seed);
  std::vector<Vector> points;
  try {
    for (int pt = 0; pt < opt.points; ++pt) {
      const Vector params = random_params(imm, rng);
      points.push_back(params);
      const PointFrame frame = frame_at(imm, params);
      sweep.note("position_norm", std::abs(amb.norm_sq(frame.position) + 1.0), 1e-12);
      sweep.note("pullback_metric", frame_gram_defect(amb, frame), 1e-12);
      const KaehlerPair pair = kaehler_pair_at(imm, frame, tol);
      if (pt == 0) out.document = FormFile::from_pair(pair).dump();
      sweep.note("shapeid", shapeid_defect(pair), 1e-10);
      sweep.note("flatness", flatness_report(pair.beta(), tol).max_defect, tol);
      sweep.note("product_star", compatibility_defect(pair), tol);
      sweep.note("symmetries", symmetry_report(pair), tol);

      const SpanAnalysis sa = span_analysis(pair, tol);
      sweep.flag("span_degenerate", sa.degenerate);
      sweep.note("span_split", sa.split_defect, tol);
      sweep.note("span_radical", sa.radical_defect, tol);
      sweep.flag("span_rank_range", sa.s_in_range);
      Vector expected_v = Vector::Zero(p + 1);
      expected_v.tail(2).setOnes();
      if (sa.v) sweep.note("null_direction", Subspace::span(Matrix(expected_v)).distance(sa.v->normalized()), 10 * tol);

      const DegenerateSplit split = degenerate_split(pair, tol);
      sweep.note("betadecomp", split.decomposition_residual, tol);
      sweep.at_least("kernel1_bound", split.kernel1.rank(), 2 * n - 2 * split.s + 2);

      // The witness statement needs p <= n - 2; below that only the umbilical analysis applies.
      UmbilicalAnalysis ua;
      if (p <= n - 2) {
        const FlatSubspaceWitness wit =
            flat_subspace_witness(imm, frame, kDefaultCurvatureSamples, rng.next_seed(), tol);
        sweep.note("witness_j_invariant", wit.j_invariance_defect, tol);
        sweep.at_least("witness_dimension", wit.V.rank(), 2 * (n - p + 1));
        sweep.note("witness_holomorphic", std::max(0.0, wit.max_holomorphic), 1e-10);
        sweep.note("witness_ricci", std::max(0.0, wit.max_ricci), 1e-10);
        if (pt == 0) rep.values["witness_dimension"] = wit.V.rank();
        ua = wit.analysis;
      } else {
        ua = umbilical_analysis(pair, split, kDefaultCurvatureSamples, rng.next_seed(), tol);
        sweep.note("umbilical_j_invariant", ua.j_invariance_defect, tol);
      }
      sweep.note("umbilic", ua.umbilic_defect, tol);
      sweep.note("alphapar", ua.alphapar_residual, tol);
      sweep.note("functional_holomorphic", std::max(0.0, ua.max_k()), 1e-10);
      sweep.note("functional_ricci", std::max(0.0, ua.max_ric()), 1e-10);
      if (pt == 0) {
        rep.values["s"] = split.s;
        rep.values["v"] = vector_json(split.v);
      }

      const RegularElement reg = find_regular_element(pair.beta(), rng.next_seed(), kDefaultRegularSamples, tol);
      const LightlikeWitness lw = kernel_lightlike(pair, reg.x, tol);
      sweep.note("lightlike_inclusions", std::max(lw.lower_inclusion, lw.upper_inclusion), tol);
      sweep.note("lightlike_moreover", lw.moreover_defect, tol);
      sweep.note("lightlike_collinear", Subspace::span(Matrix(split.v)).distance(lw.v), 10 * tol);

      const EigenSplit es = eigen_split(imm, frame, rng.next_seed(), tol);
      sweep.note("normal_commutators", es.commutator_defect, 1e-10);
      sweep.note("eigen_reconstruction", es.reconstruction_residual, tol);

      const Vector o = reference_point(frame, amb, rng.normal_vector(amb.dim()), 1.0);
      sweep.note("hessian", hessian_check(imm, frame, rng.normal_vector(d), o).relative_error, 1e-4);
      const Vector eta = umbilical_normal(imm, frame, nullptr, tol);
      const Vector s = (ua.P.basis() * rng.normal_vector(ua.P.rank())).normalized();
      const HessianResult hs = hessian_check(imm, frame, s, o);
      const HessianResult hjs = hessian_check(imm, frame, frame.J(s), o);
      const double ch = std::cosh(hs.distance), sh = std::sinh(hs.distance);
      const Vector grad_r = (ch * frame.position - o) / sh;
      const double expected = 2.0 * ch + 2.0 * sh * amb.inner(grad_r, eta);
      sweep.note("hessian_pair_sum", std::abs(hs.analytic + hjs.analytic - expected) / std::abs(expected), tol);
      sweep.note("hessian_pair_numeric", std::abs(hs.numeric + hjs.numeric - expected) / std::abs(expected), 1e-4);
    }
    const ParallelNormalReport pn = parallel_normal_check(imm, points, kDefaultStep, tol);
    sweep.note("shape_eta_identity", pn.shape_residual, tol);
    sweep.note("parallel_normal", pn.defect, 1e-6);
  } catch (const Error& e) {
    if (is_input_error(e.code())) throw;
    fail_with(rep, e);
  }
  sweep.emit(rep);
  rep.values["points"] = opt.points;
  rep.runtime_ms = timer.elapsed_ms();
  return out;
}

CommandResult cmd_random_suite(int trials, int n, int p, bool corrupt, const SuiteOptions& opt) {
  Timer timer;
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "--trials must be positive");
  if (n < 1 || p < 2) throw Error(ErrorCode::InvalidArgument, "--dims needs n >= 1 and p >= 2");
  const double tol = opt.tol;
  const int d = 2 * n;
  CommandResult out;
  Report& rep = out.report;
  rep.suite = "random-suite";
  rep.seed = opt.seed;
  Sweep sweep;
  Rng rng(opt.seed);
  try {
    for (int t = 0; t < trials; ++t) {
      const Matrix jm = random_complex_structure(rng, n);
      const ComplexStructure j(jm, Matrix::Identity(d, d));
      KaehlerPair pair = build_pair(random_shape_form(rng, d, p), j, Matrix::Identity(d, d),
                                    Vector(Vector::Unit(p, p - 1)), tol);
      if (corrupt) pair.corrupt_beta(0, 1, 0, 1.0);
      sweep.note("symmetries", symmetry_report(pair), tol);
      sweep.note("conditional_alpha", conditional_alpha_defect(pair), tol);
      const SpanAnalysis sa = span_analysis(pair, tol);
      sweep.note("span_split", sa.split_defect, tol);
      sweep.note("span_rank", std::abs(image_span(pair.beta(), tol).rank() - 2 * sa.s), 0.0);
      sweep.note("kernel_shapeid", right_kernel(pair.beta(), tol).rank(), 0.0);

      const KaehlerPair loose = build_pair(random_low_rank_form(rng, d, std::max(1, n / 2), QuadSpace::minkowski(2)),
                                           j, Matrix::Identity(d, d), std::nullopt, tol);
      const Subspace kernel = right_kernel(loose.beta(), tol);
      sweep.at_least("kernel_loose_dimension", kernel.rank(), 2 * (n - std::max(1, n / 2)));
      sweep.note("kernel_j_invariant", detail::j_invariance_defect(jm, kernel), tol);
      sweep.note("span_split_loose", span_analysis(loose, tol).split_defect, tol);

      const int np = 2 + static_cast<int>(rng.uniform() * 2.0);
      const int nm = 1 + static_cast<int>(rng.uniform() * 2.0);
      Vector signs = Vector::Ones(np + nm);
      signs.tail(nm).setConstant(-1.0);
      const QuadSpace w = QuadSpace::diagonal(signs);
      const Subspace l = random_degenerate_subspace(rng, w, np, 1);
      const RadicalDecomposition dec = decompose_degenerate(w, l, tol);
      sweep.note("decomposition", decomposition_defects(w, l, dec, tol).max(), tol);

      const BilinearMap phi = random_flat_form(rng, d, p + 2);
      const RegularElement reg = find_regular_element(phi, rng.next_seed(), kDefaultRegularSamples, tol);
      sweep.note("moore", moore_verify(phi, reg.x, tol).max(), tol);
    }
  } catch (const Error& e) {
    if (is_input_error(e.code())) throw;
    fail_with(rep, e);
  }
  sweep.emit(rep);
  rep.values["trials"] = trials;
  rep.values["dims"] = {n, p};
  rep.values["corrupt"] = corrupt;
  rep.runtime_ms = timer.elapsed_ms();
  return out;
}

}  // namespace kaehler
