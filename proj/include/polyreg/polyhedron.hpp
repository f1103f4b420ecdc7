#pragma once

#include <string>
#include <vector>

#include "polyreg/rational.hpp"

namespace polyreg {

/// One constraint a.x <= b, or a.x == b when eq is set.
struct HRow {
  RatVec a;
  Rat b;
  bool eq = false;

  bool operator==(const HRow&) const = default;
};

/// Intersection of finitely many halfspaces and hyperplanes.
///
/// `canonical` is only set by canonicalize(): rows are primitive integer
/// vectors, the affine hull is recorded as an equality subsystem in reduced
/// echelon form, inequality rows are reduced against that subsystem,
/// redundant rows are dropped, and rows are sorted. Two canonical forms
/// describe the same point set iff they compare equal member-wise.
struct HPolyhedron {
  int dim = 0;
  std::vector<HRow> rows;
  bool canonical = false;
  bool known_empty = false;  // set on the canonical empty form  0.x <= -1

  static HPolyhedron whole_space(int dim);
  static HPolyhedron empty_set(int dim);
};

/// conv(points) + cone(rays). A nonempty set always carries at least one
/// point; a line shows up as an antipodal ray pair. Rays are primitive
/// integer vectors.
struct VPolyhedron {
  int dim = 0;
  std::vector<RatVec> points;
  std::vector<RatVec> rays;
};

/// cone(rays), i.e. a VPolyhedron whose single point is the origin.
struct GeneratedCone {
  int dim = 0;
  std::vector<RatVec> rays;
};

HPolyhedron make_hpoly(int dim, std::vector<HRow> rows);
VPolyhedron v_of_cone(const GeneratedCone& c);

/// Row-wise membership test; exact.
bool hpoly_contains(const HPolyhedron& p, const RatVec& x);

/// Rewrite p into the canonical form described on HPolyhedron. Uses one LP
/// per row for implicit-equality detection and one per row for redundancy.
void canonicalize(HPolyhedron& p);

inline HPolyhedron canonicalized(HPolyhedron p) {
  canonicalize(p);
  return p;
}

/// Cheap syntactic cleanup (no LP): drops 0.x <= b rows with b >= 0,
/// deduplicates rows, keeps the tighter of two parallel copies. Detects the
/// trivially empty cases 0.x <= b (b < 0) and 0.x == b (b != 0).
void dedup_rows(HPolyhedron& p);

std::string to_string(const HPolyhedron& p);
std::string to_string(const VPolyhedron& v);

}  // namespace polyreg
