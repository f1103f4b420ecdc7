#pragma once

#include "polyreg/polyhedron.hpp"

namespace polyreg {

/// Generators of a cone {y : r.y <= 0 (or = 0)}: a lineality basis plus the
/// extreme rays modulo that lineality. All vectors primitive integer.
struct ConeGens {
  std::vector<RatVec> lineality;
  std::vector<RatVec> rays;
};

/// Incremental double description with explicit lineality handling. Rows are
/// processed in the order given; ray adjacency is decided by the algebraic
/// rank test on the shared active set.
ConeGens dd_generators(int dim, const std::vector<HRow>& homogeneous_rows);

/// H -> V. Pre: p nonempty (DomainError otherwise). Output is sorted and
/// deduplicated, so equal inputs give byte-equal outputs.
VPolyhedron convert_to_v(const HPolyhedron& p);

/// V -> H, canonicalized. Pre: at least one point.
HPolyhedron convert_to_h(const VPolyhedron& v);

void vpoly_sort(VPolyhedron& v);

}  // namespace polyreg
