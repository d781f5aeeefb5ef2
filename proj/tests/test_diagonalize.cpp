#include <doctest.h>

#include "kaehler/error.hpp"
#include "support.hpp"

using namespace kaehler;

namespace {

ComplexForm example_form(std::uint64_t seed) { return testing::pair_at(testing::example1(), seed).complex_form(); }

Subspace factor_plane(int d, int i) { return Subspace::span(Matrix(Matrix::Identity(d, d).middleCols(2 * i, 2))); }

// Block form on C^2: a separate flat factor in each complex line, into a
// Euclidean base of dimension 2, so the diagonal structure is known.
ComplexForm two_block_form() {
  const QuadSpace base = QuadSpace::euclidean(2);
  BilinearMap alpha(4, base);
  alpha.set(0, 0, Vector::Unit(2, 0));
  alpha.set(1, 1, Vector::Unit(2, 0));
  alpha.set(2, 2, 2.0 * Vector::Unit(2, 1));
  alpha.set(3, 3, 2.0 * Vector::Unit(2, 1));
  const KaehlerPair pair = build_pair(alpha, ComplexStructure::standard(2), Matrix::Identity(4, 4), std::nullopt);
  return pair.complex_form();
}

}  // namespace

TEST_CASE("zero product pair on the sphere product example") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ComplexForm form = example_form(seed);
    const auto [x, y] = zero_product_pair(form, seed);
    CHECK(x.norm() > 1e-6);
    CHECK(y.norm() > 1e-6);
    CHECK(form.beta(x, y).norm() <= 1e-8);
  }
  const ComplexForm form = example_form(0);
  CHECK(form.beta(Vector::Unit(6, 0), Vector::Unit(6, 3)).norm() < 1e-12);
}

TEST_CASE("zero product pair on a two-block form lands in the blocks") {
  const ComplexForm form = two_block_form();
  const auto [x, y] = zero_product_pair(form, 3);
  CHECK(form.beta(x, y).norm() <= 1e-8);
  const Subspace b0 = factor_plane(4, 0), b1 = factor_plane(4, 1);
  const bool split = (b0.distance(x.normalized()) < 1e-7 && b1.distance(y.normalized()) < 1e-7) ||
                     (b1.distance(x.normalized()) < 1e-7 && b0.distance(y.normalized()) < 1e-7);
  CHECK(split);
}

TEST_CASE("zero product pair needs n >= 2") {
  BilinearMap alpha(2, QuadSpace::euclidean(1));
  alpha.set(0, 0, Vector::Ones(1));
  alpha.set(1, 1, Vector::Ones(1));
  const KaehlerPair pair = build_pair(alpha, ComplexStructure::standard(1), Matrix::Identity(2, 2), std::nullopt);
  CHECK_THROWS_AS(zero_product_pair(pair, 1), Error);
}

TEST_CASE("corank two elements") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ComplexForm form = example_form(seed);
    const Vector z = corank2_element(form, seed);
    CHECK(left_map(form.beta, z).kernel().rank() == 4);
    const Kercod2Split ks = kercod2_split(form, z);
    CHECK(ks.second_component <= 1e-9);
    CHECK(std::abs(ks.xi_norm_sq) > 1e-6);
    CHECK(ks.bzv_is_xi_pair);
    CHECK(ks.sums_to_span);
    CHECK(ks.cross_gram <= 1e-10);
    CHECK(ks.rest.rank() == 4);
  }
  const ComplexForm form = example_form(1);
  CHECK(left_map(form.beta, Vector::Unit(6, 0)).kernel().rank() == 4);
  const Kercod2Split ks = kercod2_split(form, Vector::Unit(6, 0));
  CHECK(ks.bzv.rank() == 2);
  CHECK(ks.bzv.contains(form.beta.at(0, 0)));
  CHECK(ks.bzv.contains(form.beta.at(0, 1)));
  CHECK_THROWS_WITH_AS(kercod2_split(form, Vector::Ones(6)), doctest::Contains("BadCorank"), Error);
}

TEST_CASE("diagonalization of the sphere product example recovers the factor planes") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const KaehlerPair pair = testing::pair_at(testing::example1(), seed);
    const DiagonalizingBasis basis = diagonalize(pair, seed);
    REQUIRE(basis.pairs.size() == 3);
    const DiagonalizationDefects dd = diagonalization_defects(pair.complex_form(), basis);
    CHECK(dd.off_block <= 1e-8);
    CHECK(dd.gram_off_diagonal <= 1e-8);
    CHECK(dd.gram_diagonal <= 1e-8);
    CHECK(dd.basis_orthogonality <= 1e-8);
    std::vector<bool> hit(3, false);
    for (int i = 0; i < 3; ++i) {
      Matrix pl(6, 2);
      pl << basis.pairs[i], basis.j_pairs[i];
      const Subspace rec = Subspace::span(pl);
      for (int j = 0; j < 3; ++j)
        if (max_principal_angle(rec, factor_plane(6, j)) <= 1e-7) hit[j] = true;
    }
    CHECK((hit[0] && hit[1] && hit[2]));
    CHECK(basis.norms[0] == -1);
    CHECK(basis.norms[1] == 1);
    CHECK(basis.norms[2] == 1);
  }
}

TEST_CASE("diagonalization Gram pairs have opposite signs") {
  const KaehlerPair pair = testing::pair_at(testing::example1(), 3);
  const DiagonalizingBasis basis = diagonalize(pair, 3);
  const QuadSpace& whole = pair.doubled().whole;
  for (std::size_t i = 0; i < basis.pairs.size(); ++i) {
    const Vector a = pair.beta()(basis.pairs[i], basis.pairs[i]);
    const Vector b = pair.beta()(basis.pairs[i], basis.j_pairs[i]);
    const double ga = whole.norm_sq(a), gb = whole.norm_sq(b);
    CHECK(ga * gb < 0);
    CHECK(std::abs(ga + gb) < 1e-9 * (std::abs(ga) + 1));
    CHECK(std::abs(whole.inner(a, b)) < 1e-9);
  }
}

TEST_CASE("n = 1 diagonalization matches the direct computation") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const double sign = trial % 2 ? 1.0 : -1.0;
    const QuadSpace base = QuadSpace::diagonal(Vector::Constant(1, sign));
    BilinearMap alpha = testing::random_symmetric(rng, 2, base);
    const KaehlerPair pair = build_pair(alpha, ComplexStructure::standard(1), Matrix::Identity(2, 2), std::nullopt);
    const DiagonalizingBasis basis = diagonalize(pair.complex_form(), rng.next_seed());
    REQUIRE(basis.xis.size() == 1);
    const double xi = alpha.at(0, 0)[0] + alpha.at(1, 1)[0];
    CHECK(std::abs(std::abs(basis.xis[0][0]) - 1.0) < 1e-10);
    CHECK(basis.xis[0][0] * xi > 0);
    CHECK(basis.norms[0] == static_cast<int>(sign));
    CHECK(std::abs(basis.pairs[0].norm() - 1.0) < 1e-10);
    const Vector bxx = pair.beta()(basis.pairs[0], basis.pairs[0]);
    CHECK(std::abs(bxx[0] - xi) < 1e-10 * (1 + std::abs(xi)));
    CHECK(std::abs(bxx[1]) < 1e-10);
  }
}

TEST_CASE("two-block diagonalization") {
  const ComplexForm form = two_block_form();
  const DiagonalizingBasis basis = diagonalize(form, 4);
  CHECK(diagonalization_defects(form, basis).max() <= 1e-8);
}

TEST_CASE("diagonalization preconditions") {
  const KaehlerPair horo = testing::pair_at(make_horosphere_composition(4, SurfaceImmersion::sphere(1.0)), 1);
  CHECK_THROWS_WITH_AS(diagonalize(horo, 1), doctest::Contains("DegenerateSpan"), Error);
  const ComplexForm padded = testing::pad_form(example_form(2), 1);
  CHECK_THROWS_AS(diagonalize(padded, 1), Error);
  BilinearMap inner(2, DoubledSpace(QuadSpace::euclidean(1)).whole);
  inner.set(0, 0, Vector::Unit(2, 0));
  inner.set(1, 1, Vector::Unit(2, 0));
  const ComplexForm not_flat{inner, ComplexStructure::standard(1).matrix(), Matrix::Identity(2, 2)};
  CHECK_THROWS_AS(diagonalize(not_flat, 1), Error);
}

TEST_CASE("diagonalization is deterministic for a seed") {
  const KaehlerPair pair = testing::pair_at(testing::example1(), 6);
  const DiagonalizingBasis a = diagonalize(pair, 77), b = diagonalize(pair, 77);
  for (std::size_t i = 0; i < a.pairs.size(); ++i) CHECK((a.pairs[i] - b.pairs[i]).norm() == 0.0);
}

TEST_CASE("sampled degenerate subspaces on the sphere product example") {
  CHECK(sampled_degenerate_subspaces(example_form(1), 5, 50) == 0);
}
