#pragma once

#include <optional>

#include "polyreg/double_description.hpp"
#include "polyreg/polyhedron.hpp"

namespace polyreg {

/// {y : <y,x> <= 1 for all x in s}. Pre: 0 in s (DomainError otherwise).
/// Result is canonical.
HPolyhedron polar(const HPolyhedron& s);
HPolyhedron polar_of_v(const VPolyhedron& s);

/// {y : <y,x> <= 0 for all x in s}; equals the polar of the closed conical
/// hull, so no origin precondition. Canonical.
HPolyhedron dual_cone_of(const HPolyhedron& s);
HPolyhedron dual_cone_of_v(const VPolyhedron& s);
HPolyhedron dual_cone_of_rays(const GeneratedCone& c);

/// Recession cone of a nonempty polyhedron. Canonical.
HPolyhedron recession_cone(const HPolyhedron& s);

/// Minkowski sum via V-forms (pairwise point sums, ray union). Canonical.
HPolyhedron minkowski_sum(const HPolyhedron& a, const HPolyhedron& b);
VPolyhedron minkowski_sum_v(const VPolyhedron& a, const VPolyhedron& b);

/// Raw row concatenation; canonicalize when a contract-level object is
/// needed. Dimensions must agree.
HPolyhedron intersect(const HPolyhedron& a, const HPolyhedron& b);
HPolyhedron intersect(const std::vector<HPolyhedron>& parts, int dim);

/// lambda * s, exact for any rational lambda (lambda = 0 gives {0}).
HPolyhedron scale_set(const Rat& lambda, const HPolyhedron& s);

/// Exact membership for V-forms and generated cones, each one small
/// feasibility LP (barycentric resp. conic coefficients).
bool vpoly_contains(const VPolyhedron& v, const RatVec& x);
bool cone_contains(const GeneratedCone& c, const RatVec& x);

struct InclusionResult {
  bool included = false;
  std::optional<RatVec> witness;  // point of p outside q, on failure
};

/// p subset of q, decided by maximizing each row functional of q over p.
/// Unbounded suprema are caught by capping each LP at its own bound + 1,
/// which doubles as the witness construction.
InclusionResult inclusion(const HPolyhedron& p, const HPolyhedron& q);

bool set_equal(const HPolyhedron& p, const HPolyhedron& q);

struct ConicalHull {
  HPolyhedron hull;  // closure of cone(s), canonical
  bool was_closed = true;
};

/// Closed conical hull of a nonempty polyhedron. was_closed reports whether
/// cone(s) itself was already closed (it can fail to be when s is unbounded
/// and misses the origin).
ConicalHull conical_hull(const HPolyhedron& s);
ConicalHull conical_hull_of_v(const VPolyhedron& s);

}  // namespace polyreg
