#pragma once

#include "kaehler/bilinear.hpp"

namespace kaehler::detail {

/// Columns spanning the same space as `basis`, orthonormal for `inner`.
Matrix orthonormal_basis(const Matrix& inner, const Matrix& basis);

double compat_threshold(const BilinearMap& beta, const BilinearMap& gamma, double tol);
double flat_threshold(const BilinearMap& beta, double tol);
/// max distance of J s_i from s over the stored basis.
double j_invariance_defect(const Matrix& j, const Subspace& s);

}  // namespace kaehler::detail
