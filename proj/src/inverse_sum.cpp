#include "polyreg/inverse_sum.hpp"

#include <cassert>

namespace polyreg {

namespace {

void require_origin(const HPolyhedron& s, const char* who) {
  if (!hpoly_contains(s, zero_vec(s.dim)))
    throw DomainError(std::string(who) + ": operand must contain the origin");
}

// Feasible t-interval with strictness flags; rows only ever tighten with
// closed bounds, the open/closed character of the unit interval comes from
// the caller.
struct TInterval {
  Rat lo, hi;
  bool lo_strict = false, hi_strict = false;
  bool dead = false;

  void at_least(const Rat& v) {
    if (v > lo) {
      lo = v;
      lo_strict = false;
    }
  }
  void at_most(const Rat& v) {
    if (v < hi) {
      hi = v;
      hi_strict = false;
    }
  }
  bool feasible() const {
    if (dead) return false;
    if (lo < hi) return true;
    return lo == hi && !lo_strict && !hi_strict;
  }
};

// x in t*s1 and x in (1-t)*s2, as constraints on t. With 0 in both sets,
// equality rows have b = 0 and inequality rows b >= 0, so each row is either
// t-free or a single closed bound.
bool scaled_pair_feasible(const HPolyhedron& s1, const HPolyhedron& s2,
                          const RatVec& x, TInterval iv) {
  for (const auto& row : s1.rows) {
    const Rat s = dot(row.a, x);
    if (row.eq) {
      assert(row.b == 0);
      if (s != 0) iv.dead = true;
    } else if (row.b > 0) {
      iv.at_least(s / row.b);  // a.x <= t b
    } else if (s > 0) {
      iv.dead = true;
    }
    if (iv.dead) return false;
  }
  for (const auto& row : s2.rows) {
    const Rat s = dot(row.a, x);
    if (row.eq) {
      assert(row.b == 0);
      if (s != 0) iv.dead = true;
    } else if (row.b > 0) {
      iv.at_most((row.b - s) / row.b);  // a.x <= (1-t) b
    } else if (s > 0) {
      iv.dead = true;
    }
    if (iv.dead) return false;
  }
  return iv.feasible();
}

// Membership in the recession cone read straight off the rows (for a
// nonempty H-polyhedron the recession cone is exactly the homogenized rows).
bool recession_contains(const HPolyhedron& s, const RatVec& x) {
  for (const auto& row : s.rows) {
    const Rat v = dot(row.a, x);
    if (row.eq ? v != 0 : v > 0) return false;
  }
  return true;
}

}  // namespace

HPolyhedron inverse_sum(const HPolyhedron& s1, const HPolyhedron& s2) {
  require_origin(s1, "inverse_sum");
  require_origin(s2, "inverse_sum");
  return polar(minkowski_sum(polar(s1), polar(s2)));
}

HPolyhedron inverse_sum(const ConvexSet& s1, const ConvexSet& s2) {
  return inverse_sum(to_hform(s1), to_hform(s2));
}

bool inverse_sum_membership(const HPolyhedron& s1, const HPolyhedron& s2,
                            const RatVec& x) {
  require_origin(s1, "inverse_sum_membership");
  require_origin(s2, "inverse_sum_membership");
  TInterval open{Rat(0), Rat(1), true, true, false};
  if (scaled_pair_feasible(s1, s2, x, open)) return true;
  if (hpoly_contains(s1, x) && recession_contains(s2, x)) return true;
  return hpoly_contains(s2, x) && recession_contains(s1, x);
}

bool inverse_sum_membership(const ConvexSet& s1, const ConvexSet& s2,
                            const RatVec& x) {
  return inverse_sum_membership(to_hform(s1), to_hform(s2), x);
}

bool inverse_sum_membership_relaxed(const HPolyhedron& s1,
                                    const HPolyhedron& s2, const RatVec& x) {
  require_origin(s1, "inverse_sum_membership_relaxed");
  require_origin(s2, "inverse_sum_membership_relaxed");
  TInterval closed{Rat(0), Rat(1), false, false, false};
  return scaled_pair_feasible(s1, s2, x, closed);
}

}  // namespace polyreg
