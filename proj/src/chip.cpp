#include "polyreg/chip.hpp"

#include <algorithm>
#include <cassert>

#include "polyreg/lp.hpp"
#include "polyreg/sampling.hpp"
#include "polyreg/set_calculus.hpp"

namespace polyreg {
namespace {

// Fixed stream for the override trust check and a tag for the weak-normal
// functional batch, so chip sampling never collides with the constants
// sweeps run from the same user seed.
const uint64_t kOverrideStream = 0xbe5466cf34e90c6cull;
const uint64_t kTagWeakNormal = 0x452821e638d01377ull;

ConvexSet shifted(const ConvexSet& s, const RatVec& x) {
  if (const auto* b = std::get_if<Ball>(&s))
    return Ball{vec_sub(b->center, x), b->radius};
  HPolyhedron h = to_hform(s);
  for (auto& row : h.rows) row.b -= dot(row.a, x);
  h.canonical = false;
  return h;
}

HPolyhedron zero_cone(int dim) {
  HPolyhedron z;
  z.dim = dim;
  for (int j = 0; j < dim; ++j) {
    RatVec a = zero_vec(dim);
    a[static_cast<std::size_t>(j)] = 1;
    z.rows.push_back({std::move(a), Rat(0), true});
  }
  canonicalize(z);
  return z;
}

/// Any nonzero element of a cone known to be bigger than {0}.
RatVec nonzero_element(const HPolyhedron& cone) {
  VPolyhedron v = convert_to_v(cone);
  for (const auto& p : v.points)
    if (!is_zero_vec(p)) return p;
  if (!v.rays.empty()) return v.rays.front();
  throw DomainError("nonzero_element: the cone is {0} after all");
}

/// Is there a d in tt with n.d < 0 strictly for every listed normal? Since
/// tt is a cone we can look inside the unit box; max t subject to
/// n.d + t <= 0 is positive exactly when yes.
bool strictly_feasible(const HPolyhedron& tt,
                       const std::vector<RatVec>& normals) {
  const int dim = tt.dim;
  HPolyhedron prog;
  prog.dim = dim + 1;  // variables (d, t)
  auto lift = [](const RatVec& a, Rat tail) {
    RatVec r = a;
    r.push_back(std::move(tail));
    return r;
  };
  for (const auto& row : tt.rows)
    prog.rows.push_back({lift(row.a, Rat(0)), row.b, row.eq});
  for (const auto& n : normals)
    prog.rows.push_back({lift(n, Rat(1)), Rat(0), false});
  for (int j = 0; j < dim; ++j) {
    RatVec up = zero_vec(dim + 1), dn = zero_vec(dim + 1);
    up[static_cast<std::size_t>(j)] = 1;
    dn[static_cast<std::size_t>(j)] = -1;
    prog.rows.push_back({std::move(up), Rat(1), false});
    prog.rows.push_back({std::move(dn), Rat(1), false});
  }
  RatVec tvar = zero_vec(dim + 1);
  tvar[static_cast<std::size_t>(dim)] = 1;
  prog.rows.push_back({tvar, Rat(1), false});
  RatVec tneg = zero_vec(dim + 1);
  tneg[static_cast<std::size_t>(dim)] = -1;
  prog.rows.push_back({std::move(tneg), Rat(0), false});
  LPOutcome o = solve_lp(tvar, Sense::Max, prog);
  return o.status == LPStatus::Optimal && o.value > 0;
}

/// The override stands in for an intersection with no H-form, so before any
/// verdict leans on it, probe that it and the members tell the same story on
/// a fixed sample batch, both directions.
void check_override(const Collection& c) {
  const HPolyhedron& ov = *c.override_intersection;
  VPolyhedron v = convert_to_v(ov);
  Rat scale(1);
  for (const auto& p : v.points)
    for (const auto& coord : p) scale = max_rat(scale, abs_rat(coord));
  for (const auto& p : v.points)
    for (const auto& s : c.sets)
      if (!set_contains(s, p))
        throw DomainError(
            "intersection override has a vertex outside a member");
  const Rat rho = 2 * scale;
  for (int i = 0; i < 1000; ++i) {
    SampleRng g = rng_at(kOverrideStream, static_cast<uint64_t>(i));
    RatVec p = sample_in_box(g, c.dim, rho);
    bool in_all = true;
    for (const auto& s : c.sets)
      if (!set_contains(s, p)) {
        in_all = false;
        break;
      }
    if (in_all != hpoly_contains(ov, p))
      throw DomainError(
          "intersection override disagrees with the members on a sampled "
          "point");
  }
}

bool family_only(const Collection& c) {
  return c.sets.size() == 1 && is_family(c.sets[0]);
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Undecided: return "undecided";
  }
  assert(false);
  return "?";
}

HPolyhedron tangent_of_intersection(const Collection& c, const RatVec& x) {
  HPolyhedron cap = intersection_hform(c);
  if (cap.known_empty)
    throw DomainError("tangent_of_intersection: empty intersection");
  return tangent_cone(ConvexSet{std::move(cap)}, x);
}

std::vector<RatVec> chip_points(const Collection& c,
                                const std::vector<RatVec>& user_points) {
  HPolyhedron cap = intersection_hform(c);
  if (cap.known_empty) throw DomainError("chip_points: empty intersection");
  std::vector<RatVec> pts = user_points;
  for (const auto& v : convert_to_v(cap).points)
    if (std::find(pts.begin(), pts.end(), v) == pts.end()) pts.push_back(v);
  return pts;
}

ChipReport chip_report_at(const Collection& c, const RatVec& x,
                          int dual_samples, uint64_t seed) {
  validate_collection(c);
  if (static_cast<int>(x.size()) != c.dim)
    throw DomainError("chip_report_at: point dimension mismatch");
  if (c.override_intersection) {
    check_override(c);
    if (!hpoly_contains(*c.override_intersection, x))
      throw DomainError("chip_report_at: point outside the intersection");
  }
  for (const auto& s : c.sets)
    if (!set_contains(s, x))
      throw DomainError("chip_report_at: point outside the intersection");

  ChipReport rep;
  rep.point = x;

  // Member tangent cones, with the raw conical hulls cross-checked against
  // them; the closure flags drive the closure-variant verdict.
  std::vector<HPolyhedron> tangents;
  bool all_closed = true;
  std::vector<RatVec> strict_normals;
  for (const auto& s : c.sets) {
    HPolyhedron t = tangent_cone(s, x);
    if (!is_family(s)) {
      ConicalHull ch = conical_hull(shifted(s, x));
      if (!set_equal(ch.hull, t))
        throw DomainError(
            "chip_report_at: conical hull and tangent cone disagree");
      if (!ch.was_closed) {
        all_closed = false;
        const auto* b = std::get_if<Ball>(&s);
        if (b == nullptr)
          throw DomainError(
              "chip_report_at: non-closed hull from a non-ball member");
        strict_normals.push_back(primitive_scale(vec_sub(x, b->center)));
      }
    }
    tangents.push_back(std::move(t));
  }

  HPolyhedron t_cap = tangent_of_intersection(c, x);
  HPolyhedron tt = canonicalized(intersect(tangents, c.dim));
  InclusionResult bwd = inclusion(tt, t_cap);
  InclusionResult fwd = inclusion(t_cap, tt);
  rep.chip = fwd.included && bwd.included;
  if (!bwd.included)
    rep.witnesses.emplace("chip", *bwd.witness);
  else if (!fwd.included)
    rep.witnesses.emplace("chip", *fwd.witness);

  if (all_closed) {
    // closed hulls: closing the intersection can only add points
    rep.chip_closure_variant = true;
  } else if (set_equal(tt, zero_cone(c.dim))) {
    rep.chip_closure_variant = true;
  } else {
    // The raw intersection is tt with the ball halfspaces strict. If some
    // direction satisfies all of them strictly, the closure sweeps back out
    // to tt and nothing is lost; otherwise the raw intersection is {0} and
    // every other direction of tt certifies failure.
    rep.chip_closure_variant = strictly_feasible(tt, strict_normals);
    if (!rep.chip_closure_variant)
      rep.witnesses.emplace("chip_closure_variant", nonzero_element(tt));
  }

  GeneratedCone n_cap = normal_cone(ConvexSet{intersection_hform(c)}, x);
  GeneratedCone sum;
  sum.dim = c.dim;
  for (const auto& s : c.sets) {
    GeneratedCone n = normal_cone(s, x);
    sum.rays.insert(sum.rays.end(), n.rays.begin(), n.rays.end());
  }
  std::sort(sum.rays.begin(), sum.rays.end());
  sum.rays.erase(std::unique(sum.rays.begin(), sum.rays.end()),
                 sum.rays.end());
  std::optional<RatVec> strong_wit;
  bool strong = true;
  for (const auto& g : n_cap.rays)
    if (!cone_contains(sum, g)) {
      strong = false;
      strong_wit = g;
      break;
    }
  for (const auto& g : sum.rays)
    if (!cone_contains(n_cap, g)) {
      strong = false;
      if (!strong_wit) strong_wit = g;
      break;
    }
  rep.strong_chip = strong;
  if (strong_wit) rep.witnesses.emplace("strong_chip", *strong_wit);

  // The tangent collection at x. For the family every member's cone at 0 is
  // the whole line, so one whole-space entry stands for them all.
  Collection tc;
  tc.dim = c.dim;
  tc.norm = c.norm;
  if (family_only(c))
    tc.sets.push_back(HPolyhedron::whole_space(c.dim));
  else
    for (const auto& t : tangents) tc.sets.push_back(t);

  ConstantsOptions opt;
  opt.tol = c.norm.tol;
  opt.seed = seed;
  if (dual_samples > 0) opt.samples = dual_samples;

  ConstVal ln = lambda_N(tc, opt);
  rep.normal_chip_constant = ln;
  const bool positive = ln.infinite || ln.value > 0;
  rep.normal_chip = rep.chip_closure_variant
                        ? (positive ? Verdict::True : Verdict::False)
                        : Verdict::Undecided;

  rep.weak_normal_chip = Verdict::True;
  std::vector<RatVec> funcs;
  for (const auto& t : tangents)
    for (const auto& row : t.rows) {
      funcs.push_back(row.a);
      if (row.eq) funcs.push_back(vec_neg(row.a));
    }
  std::sort(funcs.begin(), funcs.end());
  funcs.erase(std::unique(funcs.begin(), funcs.end()), funcs.end());
  for (int i = 0; i < dual_samples; ++i) {
    SampleRng g = rng_at(seed ^ kTagWeakNormal, static_cast<uint64_t>(i));
    funcs.push_back(sample_direction(g, c.dim));
  }
  for (const auto& f : funcs) {
    if (is_zero_vec(f)) continue;
    WeakNormalEta w;
    try {
      w = weak_normal_eta(tc, f, opt);
    } catch (const UnsupportedError&) {
      rep.weak_normal_chip = Verdict::Undecided;
      break;
    }
    if (w.kind == WeakNormalEta::Kind::None) {
      rep.weak_normal_chip = Verdict::False;
      rep.witnesses.emplace("weak_normal_chip", f);
      break;
    }
  }
  return rep;
}

}  // namespace polyreg
