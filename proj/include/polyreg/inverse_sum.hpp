#pragma once

#include "polyreg/convex_set.hpp"

namespace polyreg {

/// The inverse sum s1 # s2 of two closed polyhedra containing 0: the union
/// over t in (0,1) of t*s1 ∩ (1-t)*s2 together with the two endpoint terms
/// s1 ∩ rec(s2) and s2 ∩ rec(s1). Computed as
///   polar(minkowski_sum(polar(s1), polar(s2))),
/// which matches the literal union because all sets involved are closed,
/// contain 0, and polyhedral sums stay closed. Result is canonical.
HPolyhedron inverse_sum(const HPolyhedron& s1, const HPolyhedron& s2);
HPolyhedron inverse_sum(const ConvexSet& s1, const ConvexSet& s2);

/// Direct-definition membership: decides the three-term union literally by
/// intersecting per-row feasibility intervals for t over the open unit
/// interval, plus the two recession endpoint checks. Independent of the
/// polar route on purpose; the two are cross-checked in tests.
bool inverse_sum_membership(const HPolyhedron& s1, const HPolyhedron& s2,
                            const RatVec& x);
bool inverse_sum_membership(const ConvexSet& s1, const ConvexSet& s2,
                            const RatVec& x);

/// Same feasibility system relaxed to t in [0,1]. At the closed endpoints
/// the scaled rows degenerate to recession-cone rows, so on closed polyhedra
/// this coincides with the literal three-term test; kept separate so that
/// the coincidence is testable rather than assumed.
bool inverse_sum_membership_relaxed(const HPolyhedron& s1,
                                    const HPolyhedron& s2, const RatVec& x);

}  // namespace polyreg
