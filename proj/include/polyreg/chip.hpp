#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "polyreg/constants.hpp"
#include "polyreg/convex_set.hpp"

namespace polyreg {

enum class Verdict { True, False, Undecided };
const char* verdict_name(Verdict v);

/// Per-point verdicts for the hull-intersection properties of a collection.
/// `chip` compares the tangent cone of the intersection against the
/// intersection of the member tangent cones; `chip_closure_variant` asks the
/// weaker closure question about the raw (possibly non-closed) conical
/// hulls; `strong_chip` compares normal cones against the summed member
/// normals. The normal variant is evaluated on the closed tangent cones and
/// downgraded to Undecided when the closure variant fails, because the
/// literal value on the raw hulls may then differ. `weak_normal_chip` covers
/// the tested functionals only (facet normals plus the sampled batch);
/// Undecided means the mode cannot run the per-functional bisection.
struct ChipReport {
  RatVec point;
  bool chip = false;
  bool chip_closure_variant = false;
  bool strong_chip = false;
  Verdict normal_chip = Verdict::Undecided;
  ConstVal normal_chip_constant = const_finite(Rat(0));
  Verdict weak_normal_chip = Verdict::Undecided;
  std::map<std::string, RatVec> witnesses;
};

/// Tangent cone of the intersection at x, taken from the one H-form the
/// collection admits: concatenated members, an explicit override, or the
/// family's {0}. DomainError when the intersection is empty, x is outside
/// it, or no H-form exists.
HPolyhedron tangent_of_intersection(const Collection& c, const RatVec& x);

/// Points worth reporting on: the callers' points in their order, then every
/// vertex of the intersection not already listed.
std::vector<RatVec> chip_points(const Collection& c,
                                const std::vector<RatVec>& user_points);

ChipReport chip_report_at(const Collection& c, const RatVec& x,
                          int dual_samples, uint64_t seed);

}  // namespace polyreg
