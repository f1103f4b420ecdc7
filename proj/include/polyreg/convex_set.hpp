#pragma once

#include <optional>
#include <variant>

#include "polyreg/set_calculus.hpp"

namespace polyreg {

enum class NormKind { L1, L2, Linf };
enum class EvalMode { Exact, Float };

NormKind dual_kind(NormKind k);  // l1 <-> linf, l2 self-dual
const char* norm_kind_name(NormKind k);

/// Exact norm value; DomainError for l2 (only its square is rational).
Rat norm_exact(NormKind k, const RatVec& v);
double norm_value(NormKind k, const RatVec& v);

/// The closed ball of the given radius in H-form, canonical. l1 writes one
/// row per sign pattern (2^dim rows), linf one row per signed axis; l2 is
/// not polyhedral and raises UnsupportedError.
HPolyhedron ball_hpoly(NormKind k, int dim, const Rat& radius);

struct NormContext {
  NormKind kind = NormKind::Linf;
  EvalMode mode = EvalMode::Exact;
  Rat tol = Rat(1, 1000000);
};

/// Euclidean ball; balls in the polyhedral norms are just H-polyhedra and
/// get lowered to one when an instance is read.
struct Ball {
  RatVec center;
  Rat radius;
};

/// The countable family [-1/i, 1/i] on the line, i = 1, 2, ...; its
/// intersection is {0}. Stands for the whole family, so it must be the only
/// member of a collection. Only analytic operations apply: membership in the
/// intersection, distances (sup_i d(x, A_i) = |x|), and the cones at 0.
struct ShrinkingIntervalFamily {};

using ConvexSet =
    std::variant<HPolyhedron, VPolyhedron, GeneratedCone, Ball,
                 ShrinkingIntervalFamily>;

struct Collection {
  int dim = 0;
  NormContext norm;
  std::vector<ConvexSet> sets;
  std::optional<HPolyhedron> override_intersection;
};

bool is_family(const ConvexSet& s);
bool is_polyhedral(const ConvexSet& s);  // hpoly, vpoly or generated cone
bool all_polyhedral(const Collection& c);
int set_dim(const ConvexSet& s);

/// Canonical H-form of a polyhedral payload (fresh copy; V-forms and cones
/// are converted). DomainError for ball / family payloads.
HPolyhedron to_hform(const ConvexSet& s);

/// Exact membership. For the family this means membership in the
/// intersection of all its intervals, i.e. x == 0.
bool set_contains(const ConvexSet& s, const RatVec& x);

/// Intersection of the collection in H-form. An explicit override wins, the
/// family contributes {0}; a ball without an override has no exact H-form
/// (DomainError; validation rejects that shape up front). May come back
/// known_empty, which callers surface as the empty-intersection outcome.
HPolyhedron intersection_hform(const Collection& c);

/// Structural checks: dimensions agree, members are nonempty, the family is
/// alone on the line, a ball is Euclidean-only and comes with an override,
/// exact mode has a polyhedral ball, and any override is spot-checked to sit
/// inside every member. Throws DomainError / UnsupportedError.
void validate_collection(const Collection& c);

struct Projection {
  std::optional<RatVec> point;  // exact nearest point, when representable
  std::optional<Rat> dist;      // exact distance (l1/linf on polyhedra)
  std::optional<Rat> dist_sq;   // exact squared distance (l2 on polyhedra)
  double dist_d = 0.0;          // always filled
  std::vector<double> point_d;  // float nearest point (ball exterior case)
  std::vector<std::size_t> active_rows;  // tight H-form rows at the point
};

/// Nearest point of s from x in the context norm. Polyhedra: l1/linf by LP,
/// l2 by KKT enumeration over active sets (both exact; the squared l2
/// distance stays rational). The Euclidean ball yields a float point and
/// distance from the exterior; its exact nearest point is irrational.
Projection project_point(const ConvexSet& s, const RatVec& x,
                         const NormContext& nc);

/// conical_hull over the full payload range. Polyhedra go through the
/// H-form version; a ball centered at distance = radius adds the one
/// genuinely non-closed case (open halfspace plus origin), a ball away from
/// the origin spans a circular cone with no H-form and is rejected, and the
/// family stand-in has no single hull (its cones live at 0, per member).
ConicalHull conical_hull(const ConvexSet& s);

/// Tangent cone of s at a member point x: active rows homogenized (whole
/// space at interior points). Ball: supporting halfspace at the boundary.
/// Family: every member's tangent cone at 0 is the whole line.
HPolyhedron tangent_cone(const ConvexSet& s, const RatVec& x);

/// Normal cone generators at a member point: active inequality normals, both
/// signs of equality normals, the outward radial direction on a ball. Equals
/// the dual cone of tangent_cone at the same point.
GeneratedCone normal_cone(const ConvexSet& s, const RatVec& x);

}  // namespace polyreg
