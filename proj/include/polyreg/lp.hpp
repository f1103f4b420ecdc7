#pragma once

#include "polyreg/polyhedron.hpp"

namespace polyreg {

enum class LPStatus { Optimal, Infeasible, Unbounded };
enum class Sense { Max, Min };

struct LPOutcome {
  LPStatus status = LPStatus::Infeasible;
  Rat value;    // objective at optimum (valid for Optimal)
  RatVec point; // an optimal vertex          (valid for Optimal)
};

/// Exact two-phase dense simplex with Bland's rule; deterministic and
/// termination-safe on every input. Dimensions beyond "desk scale" (tens of
/// rows, single-digit dim) fall outside the intended envelope, not
/// correctness.
LPOutcome solve_lp(const RatVec& objective, Sense sense, const HPolyhedron& p);

/// Phase-1 feasibility, with a feasible point when one exists.
LPOutcome find_point(const HPolyhedron& p);

bool is_feasible(const HPolyhedron& p);

}  // namespace polyreg
