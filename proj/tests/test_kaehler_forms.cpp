#include <doctest.h>

#include "kaehler/error.hpp"
#include "support.hpp"

using namespace kaehler;
using testing::last_unit;

namespace {

KaehlerPair random_pair(Rng& rng, int n, int p) {
  const ComplexStructure j(testing::random_j(rng, n), Matrix::Identity(2 * n, 2 * n));
  return build_pair(testing::random_shape_alpha(rng, 2 * n, p), j, Matrix::Identity(2 * n, 2 * n), last_unit(p));
}

KaehlerPair synthetic_pair(int n, double c) {
  return build_pair(testing::synthetic_umbilic_alpha(n, c), ComplexStructure::standard(n),
                    Matrix::Identity(2 * n, 2 * n), last_unit(3));
}

KaehlerPair horosphere_pair(std::uint64_t seed, int n = 4) {
  return testing::pair_at(make_horosphere_composition(n, SurfaceImmersion::sphere(1.0)), seed);
}

// The expansion of beta written out by hand.
Vector beta_by_hand(const KaehlerPair& pair, const Vector& x, const Vector& y) {
  const BilinearMap& a = pair.alpha();
  const Matrix& j = pair.J().matrix();
  Vector out(2 * pair.p());
  out << a(x, y) + a(j * x, j * y), a(x, j * y) - a(j * x, y);
  return out;
}

}  // namespace

TEST_CASE("complex structures are validated") {
  const ComplexStructure j = ComplexStructure::standard(2);
  CHECK((j.matrix() * j.matrix() + Matrix::Identity(4, 4)).norm() == 0.0);
  CHECK_THROWS_AS(ComplexStructure(Matrix::Identity(2, 2), Matrix::Identity(2, 2)), Error);
  Matrix skew(2, 2);
  skew << 0, -0.5, 2, 0;
  CHECK_THROWS_AS(ComplexStructure(skew, Matrix::Identity(2, 2)), Error);
  Matrix g(2, 2);
  g << 4, 0, 0, 1;
  CHECK_NOTHROW(ComplexStructure(skew, g));
}

TEST_CASE("build_pair derives beta and gamma") {
  Rng rng(21);
  const KaehlerPair zero =
      build_pair(BilinearMap::zero(4, QuadSpace::minkowski(2)), ComplexStructure::standard(2), Matrix::Identity(4, 4),
                 std::nullopt);
  CHECK(zero.beta().max_entry_norm() == 0.0);
  CHECK(zero.gamma().max_entry_norm() == 0.0);
  const KaehlerPair pair = random_pair(rng, 3, 4);
  for (int k = 0; k < 20; ++k) {
    const Vector x = rng.normal_vector(6), y = rng.normal_vector(6);
    CHECK((pair.beta()(x, y) - beta_by_hand(pair, x, y)).norm() < 1e-12);
    Vector g(8);
    g << pair.alpha()(x, y), pair.alpha()(x, pair.J()(y));
    CHECK((pair.gamma()(x, y) - g).norm() < 1e-12);
  }
}

TEST_CASE("anti-holomorphic alpha gives vanishing beta") {
  // alpha(X,Y) = (x0 y0 - x1 y1, x0 y1 + x1 y0) on C with J the standard structure.
  BilinearMap a(2, QuadSpace::euclidean(2));
  Vector e0 = Vector::Unit(2, 0), e1 = Vector::Unit(2, 1);
  a.set(0, 0, e0);
  a.set(1, 1, -e0);
  a.set(0, 1, e1);
  a.set(1, 0, e1);
  const KaehlerPair pair = build_pair(a, ComplexStructure::standard(1), Matrix::Identity(2, 2), std::nullopt);
  CHECK(pair.beta().max_entry_norm() < 1e-15);
}

TEST_CASE("build_pair rejects inconsistent input") {
  Rng rng(22);
  BilinearMap a = testing::random_symmetric(rng, 4, testing::random_shape_alpha(rng, 4, 3).target());
  CHECK_THROWS_WITH_AS(build_pair(a, ComplexStructure::standard(2), Matrix::Identity(4, 4), last_unit(3)),
                       doctest::Contains("ShapeIdViolation"), Error);
  BilinearMap asym(2, QuadSpace::euclidean(1));
  asym.set(0, 1, Vector::Ones(1));
  CHECK_THROWS_AS(build_pair(asym, ComplexStructure::standard(1), Matrix::Identity(2, 2), std::nullopt), Error);
}

TEST_CASE("conditional alpha identity") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const KaehlerPair pair = random_pair(rng, 2 + trial % 2, 3 + trial % 3);
    CHECK(conditional_alpha_defect(pair) <= 1e-9);
    const int p = pair.p();
    Vector w0 = Vector::Zero(2 * p);
    w0.head(p) = *pair.w();
    for (int k = 0; k < 100; ++k) {
      const Vector x = rng.normal_vector(pair.J().dim()), y = rng.normal_vector(pair.J().dim());
      CHECK(pair.doubled().whole.inner(pair.beta()(x, y), w0) == doctest::Approx(-2.0 * x.dot(y)).epsilon(1e-10));
    }
  }
}

TEST_CASE("symmetry identities over random instances") {
  Rng rng(24);
  CHECK(symmetry_report(BilinearMap::zero(4, QuadSpace::minkowski(4)), ComplexStructure::standard(2).matrix()) == 0.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3, p = 2 + trial % 4;
    const KaehlerPair pair = random_pair(rng, n, p);
    CHECK(symmetry_report(pair) <= 1e-9);
    const BilinearMap& b = pair.beta();
    const Matrix& j = pair.J().matrix();
    const Vector x = rng.normal_vector(2 * n), y = rng.normal_vector(2 * n);
    const Vector bxy = b(x, y);
    Vector rotated(2 * p);
    rotated << bxy.tail(p), -bxy.head(p);
    CHECK((b(x, j * y) - rotated).norm() < 1e-9);
    CHECK((b(x, j * y) + b(j * x, y)).norm() < 1e-9);
  }
}

TEST_CASE("kernel of beta is J-invariant and trivial under the shape identity") {
  Rng rng(25);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 2;
    const Matrix jm = testing::random_j(rng, n);
    const ComplexStructure j(jm, Matrix::Identity(2 * n, 2 * n));
    const KaehlerPair loose = build_pair(testing::random_low_rank(rng, 2 * n, 1, QuadSpace::minkowski(2)), j,
                                         Matrix::Identity(2 * n, 2 * n), std::nullopt);
    const Subspace k = right_kernel(loose.beta());
    CHECK(k.rank() >= 2 * n - 2);
    CHECK(k.rank() % 2 == 0);
    if (!k.is_zero()) CHECK(same_span(Subspace::span(Matrix(jm * k.basis())), k));
    CHECK(right_kernel(random_pair(rng, n, 3).beta()).is_zero());
  }
}

TEST_CASE("span analysis") {
  const KaehlerPair zero =
      build_pair(BilinearMap::zero(4, QuadSpace::minkowski(2)), ComplexStructure::standard(2), Matrix::Identity(4, 4),
                 std::nullopt);
  const SpanAnalysis z = span_analysis(zero);
  CHECK(z.s == 0);
  CHECK(z.u0.is_zero());
  CHECK_FALSE(z.degenerate);

  Rng rng(26);
  for (int trial = 0; trial < 50; ++trial) {
    const KaehlerPair pair = random_pair(rng, 3, 4);
    const SpanAnalysis sa = span_analysis(pair);
    CHECK(sa.split_defect <= 1e-9);
    CHECK(image_span(pair.beta()).rank() == 2 * sa.s);
  }

  const SpanAnalysis e1 = span_analysis(testing::pair_at(testing::example1(), 4));
  CHECK(e1.s == 3);
  CHECK_FALSE(e1.degenerate);
  CHECK(e1.radical.is_zero());

  const SpanAnalysis h = span_analysis(horosphere_pair(5));
  CHECK(h.degenerate);
  REQUIRE(h.v);
  CHECK(h.s_in_range);
  Vector ell = Vector::Zero(3);
  ell[1] = ell[2] = 1.0;
  CHECK(Subspace::span(Matrix(ell)).distance(*h.v) < 1e-9);
}

TEST_CASE("degenerate split on the horosphere composition") {
  const KaehlerPair pair = horosphere_pair(6);
  const DegenerateSplit split = degenerate_split(pair);
  CHECK(split.decomposition_residual <= 1e-9);
  CHECK(split.kernel1.rank() >= 2 * pair.n() - 2 * split.s + 2);
  CHECK(split.kernel_bound_holds);
  CHECK(pair.base().inner(split.v, *pair.w()) == doctest::Approx(-1.0));
  CHECK(std::abs(pair.base().norm_sq(split.v)) < 1e-12);
  const BilinearMap& b = pair.beta();
  const Matrix& j = pair.J().matrix();
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const Vector x = rng.normal_vector(8), y = rng.normal_vector(8);
    Vector expected = split.beta1(x, y);
    expected.head(3) += 2.0 * x.dot(y) * split.v;
    expected.tail(3) += 2.0 * x.dot(j * y) * split.v;
    CHECK((b(x, y) - expected).norm() < 1e-9);
  }
}

TEST_CASE("degenerate split on the synthetic umbilic form") {
  const KaehlerPair flat_only = synthetic_pair(3, 0.0);
  const DegenerateSplit a = degenerate_split(flat_only);
  CHECK(a.beta1.max_entry_norm() < 1e-12);
  CHECK(a.kernel1.rank() == 6);
  Vector v(3);
  v << 0, 1, 1;
  CHECK((a.v - v).norm() < 1e-12);

  const KaehlerPair with_line = synthetic_pair(3, 0.7);
  const DegenerateSplit b = degenerate_split(with_line);
  CHECK(b.s == 2);
  CHECK(b.kernel1.rank() == 2 * 3 - 2 * b.s + 2);
  CHECK(b.decomposition_residual <= 1e-12);
}

TEST_CASE("degenerate split preconditions") {
  CHECK_THROWS_WITH_AS(degenerate_split(testing::pair_at(testing::example1(), 1)), doctest::Contains("NotDegenerate"),
                       Error);
}

TEST_CASE("compatibility defect") {
  const KaehlerPair zero =
      build_pair(BilinearMap::zero(4, QuadSpace::minkowski(2)), ComplexStructure::standard(2), Matrix::Identity(4, 4),
                 std::nullopt);
  CHECK(compatibility_defect(zero) == 0.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(compatibility_defect(testing::pair_at(testing::example1(), seed)) <= 1e-9);
    CHECK(compatibility_defect(horosphere_pair(seed)) <= 1e-9);
  }
  Rng rng(2024);
  const KaehlerPair generic = random_pair(rng, 2, 3);
  CHECK(compatibility_defect(generic) == doctest::Approx(7.6000907316498179).epsilon(1e-9));
}

TEST_CASE("umbilical analysis") {
  const KaehlerPair pair = horosphere_pair(7);
  const DegenerateSplit split = degenerate_split(pair);
  const UmbilicalAnalysis ua = umbilical_analysis(pair, split, 1000, 3);
  CHECK(ua.umbilic_defect <= 1e-9);
  CHECK(ua.alphapar_residual <= 1e-9);
  CHECK(ua.j_invariance_defect <= 1e-9);
  CHECK(ua.P.rank() == 2 * ua.m);
  CHECK(ua.m >= pair.n() - split.s + 1);
  CHECK(ua.k_values.size() == 1000);
  CHECK(ua.max_k() <= 1e-10);
  CHECK(ua.max_ric() <= 1e-10);
  CHECK(std::abs(pair.base().norm_sq(ua.eta) - 1.0) < 1e-9);

  const KaehlerPair synth = synthetic_pair(3, 0.0);
  const UmbilicalAnalysis us = umbilical_analysis(synth, degenerate_split(synth), 100, 1);
  CHECK(us.alphapar_residual <= 1e-12);
  CHECK(us.P.rank() == 6);
}

TEST_CASE("curvature functionals agree with their definitions") {
  const KaehlerPair pair = horosphere_pair(8);
  Rng rng(3);
  const BilinearMap& a = pair.alpha();
  const QuadSpace& l = pair.base();
  for (int k = 0; k < 10; ++k) {
    const Vector s = rng.unit_vector(8);
    const Vector js = pair.J()(s);
    const double expected = l.inner(a(s, s), a(js, js)) - l.norm_sq(a(s, js));
    CHECK(holomorphic_functional(pair, s) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("lightlike vector in the kernel image") {
  const KaehlerPair e1 = testing::pair_at(testing::example1(), 2);
  CHECK_THROWS_WITH_AS(kernel_lightlike(e1, find_regular_element(e1.beta(), 1).x), doctest::Contains("HypothesisViolated"),
                       Error);

  const KaehlerPair synth = synthetic_pair(3, 0.7);
  const RegularElement reg = find_regular_element(synth.beta(), 4);
  const LightlikeWitness lw = kernel_lightlike(synth, reg.x);
  Vector v(3);
  v << 0, 1, 1;
  CHECK(Subspace::span(Matrix(v)).distance(lw.v) < 1e-9);
  CHECK(lw.nullity < 1e-12);
  CHECK(lw.lower_inclusion <= 1e-9);
  CHECK(lw.upper_inclusion <= 1e-9);
  CHECK(lw.moreover_defect <= 1e-9);

  const KaehlerPair horo = horosphere_pair(9);
  const LightlikeWitness hw = kernel_lightlike(horo, find_regular_element(horo.beta(), 5).x);
  CHECK(Subspace::span(Matrix(degenerate_split(horo).v)).distance(hw.v) < 1e-9);
}

TEST_CASE("kernel bound") {
  const KaehlerPair e1 = testing::pair_at(testing::example1(), 3);
  const KernelBound kb = kernel_bound_check(e1);
  CHECK(kb.holds);
  CHECK(kb.kernel_dim == 0);
  REQUIRE(kb.isomorphism);
  CHECK(*kb.isomorphism);
  CHECK(kb.regular_rank == 6);

  const ComplexForm zero{BilinearMap::zero(4, DoubledSpace(QuadSpace::minkowski(2)).whole),
                         ComplexStructure::standard(2).matrix(), Matrix::Identity(4, 4)};
  CHECK_THROWS_WITH_AS(kernel_bound_check(zero), doctest::Contains("HypothesisViolated"), Error);

  for (int k = 1; k <= 3; ++k) {
    const ComplexForm padded = testing::pad_form(e1.complex_form(), k);
    const KernelBound pb = kernel_bound_check(padded);
    CHECK(pb.holds);
    CHECK(pb.kernel_dim == 2 * k);
    CHECK(pb.bound == 2 * padded.n() - 2 * padded.p());
    CHECK(pb.kernel_dim == pb.bound);
  }
}

TEST_CASE("restriction to a J-invariant subspace keeps a complex structure") {
  const KaehlerPair e1 = testing::pair_at(testing::example1(), 5);
  const ComplexForm form = e1.complex_form();
  const Matrix q = Matrix::Identity(6, 6).leftCols(4);
  const ComplexForm r = restrict(form, q);
  CHECK(r.dim() == 4);
  CHECK((r.j * r.j + Matrix::Identity(4, 4)).norm() < 1e-12);
  CHECK(flatness_report(r.beta).is_flat);
}
