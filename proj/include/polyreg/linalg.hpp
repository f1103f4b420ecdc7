#pragma once

#include <optional>
#include <vector>

#include "polyreg/rational.hpp"

namespace polyreg {

using RatMat = std::vector<RatVec>;

int rank(RatMat m);

/// In-place reduced row echelon form, scanning columns left to right.
/// Returns the pivot column of each surviving row; zero rows are erased.
std::vector<int> rref(RatMat& m);

/// Solve the square system a?x = rhs; nullopt when a is singular.
std::optional<RatVec> solve_linear(RatMat a, RatVec rhs);

/// Basis of the nullspace of m (rows = functionals), primitive-scaled.
std::vector<RatVec> kernel_basis(const RatMat& m, int dim);

}  // namespace polyreg
