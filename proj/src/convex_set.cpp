#include "polyreg/convex_set.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "polyreg/double_description.hpp"
#include "polyreg/linalg.hpp"
#include "polyreg/lp.hpp"

namespace polyreg {

NormKind dual_kind(NormKind k) {
  switch (k) {
    case NormKind::L1: return NormKind::Linf;
    case NormKind::Linf: return NormKind::L1;
    case NormKind::L2: return NormKind::L2;
  }
  assert(false);
  return k;
}

const char* norm_kind_name(NormKind k) {
  switch (k) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::Linf: return "linf";
  }
  assert(false);
  return "?";
}

Rat norm_exact(NormKind k, const RatVec& v) {
  switch (k) {
    case NormKind::L1: return norm_l1(v);
    case NormKind::Linf: return norm_linf(v);
    case NormKind::L2:
      throw DomainError("norm_exact: l2 norms are irrational, use norm_value");
  }
  assert(false);
  return Rat(0);
}

double norm_value(NormKind k, const RatVec& v) {
  if (k == NormKind::L2) return std::sqrt(rat_to_double(norm_l2_sq(v)));
  return rat_to_double(norm_exact(k, v));
}

HPolyhedron ball_hpoly(NormKind k, int dim, const Rat& radius) {
  if (radius <= 0) throw DomainError("ball_hpoly: radius must be positive");
  HPolyhedron b;
  b.dim = dim;
  if (k == NormKind::Linf) {
    for (int i = 0; i < dim; ++i) {
      RatVec plus = zero_vec(dim), minus = zero_vec(dim);
      plus[static_cast<std::size_t>(i)] = 1;
      minus[static_cast<std::size_t>(i)] = -1;
      b.rows.push_back({std::move(plus), radius, false});
      b.rows.push_back({std::move(minus), radius, false});
    }
  } else if (k == NormKind::L1) {
    const int patterns = 1 << dim;
    for (int mask = 0; mask < patterns; ++mask) {
      RatVec a(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i)
        a[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? Rat(-1) : Rat(1);
      b.rows.push_back({std::move(a), radius, false});
    }
  } else {
    throw UnsupportedError("the euclidean ball has no exact H-form");
  }
  canonicalize(b);
  return b;
}

bool is_family(const ConvexSet& s) {
  return std::holds_alternative<ShrinkingIntervalFamily>(s);
}

bool is_polyhedral(const ConvexSet& s) {
  return std::holds_alternative<HPolyhedron>(s) ||
         std::holds_alternative<VPolyhedron>(s) ||
         std::holds_alternative<GeneratedCone>(s);
}

bool all_polyhedral(const Collection& c) {
  return std::all_of(c.sets.begin(), c.sets.end(), is_polyhedral);
}

int set_dim(const ConvexSet& s) {
  if (const auto* h = std::get_if<HPolyhedron>(&s)) return h->dim;
  if (const auto* v = std::get_if<VPolyhedron>(&s)) return v->dim;
  if (const auto* g = std::get_if<GeneratedCone>(&s)) return g->dim;
  if (const auto* b = std::get_if<Ball>(&s)) return static_cast<int>(b->center.size());
  return 1;  // the family lives on the line
}

HPolyhedron to_hform(const ConvexSet& s) {
  if (const auto* h = std::get_if<HPolyhedron>(&s))
    return h->canonical ? *h : canonicalized(*h);
  if (const auto* v = std::get_if<VPolyhedron>(&s)) return convert_to_h(*v);
  if (const auto* g = std::get_if<GeneratedCone>(&s))
    return convert_to_h(v_of_cone(*g));
  throw DomainError("to_hform: only polyhedral members have an H-form");
}

bool set_contains(const ConvexSet& s, const RatVec& x) {
  if (const auto* h = std::get_if<HPolyhedron>(&s)) return hpoly_contains(*h, x);
  if (const auto* v = std::get_if<VPolyhedron>(&s)) return vpoly_contains(*v, x);
  if (const auto* g = std::get_if<GeneratedCone>(&s)) return cone_contains(*g, x);
  if (const auto* b = std::get_if<Ball>(&s))
    return norm_l2_sq(vec_sub(x, b->center)) <= b->radius * b->radius;
  return is_zero_vec(x);  // the family's intersection
}

HPolyhedron intersection_hform(const Collection& c) {
  if (c.override_intersection) return *c.override_intersection;
  if (c.sets.size() == 1 && is_family(c.sets[0])) {
    HPolyhedron origin;
    origin.dim = 1;
    origin.rows.push_back({{Rat(1)}, Rat(0), true});
    canonicalize(origin);
    return origin;
  }
  std::vector<HPolyhedron> parts;
  for (const auto& s : c.sets) {
    if (!is_polyhedral(s))
      throw DomainError(
          "intersection_hform: a ball member needs an explicit override");
    parts.push_back(to_hform(s));
  }
  return canonicalized(intersect(parts, c.dim));
}

void validate_collection(const Collection& c) {
  if (c.dim < 1) throw DomainError("collection: space_dim must be >= 1");
  if (c.sets.empty()) throw DomainError("collection: needs at least one set");
  if (c.norm.tol <= 0) throw DomainError("collection: tol must be positive");

  bool has_ball = false;
  for (std::size_t i = 0; i < c.sets.size(); ++i) {
    const auto& s = c.sets[i];
    const std::string tag = "set " + std::to_string(i);
    if (is_family(s)) {
      if (c.sets.size() != 1)
        throw DomainError("the interval family stands alone in a collection");
      if (c.dim != 1)
        throw DomainError("the interval family lives on the line");
      continue;
    }
    if (set_dim(s) != c.dim) throw DomainError(tag + ": dimension mismatch");
    if (const auto* h = std::get_if<HPolyhedron>(&s)) {
      if (h->known_empty || (!h->canonical && !is_feasible(*h)))
        throw DomainError(tag + ": empty member set");
    } else if (const auto* v = std::get_if<VPolyhedron>(&s)) {
      if (v->points.empty())
        throw DomainError(tag + ": V-form member carries no point");
    } else if (const auto* b = std::get_if<Ball>(&s)) {
      has_ball = true;
      if (b->radius <= 0) throw DomainError(tag + ": ball radius must be > 0");
      if (c.norm.kind != NormKind::L2)
        throw DomainError(tag + ": a surviving Ball payload must be euclidean");
    }
  }

  if (c.norm.kind == NormKind::L2 && c.norm.mode == EvalMode::Exact)
    throw UnsupportedError(
        "exact mode needs a polyhedral unit ball; use mode \"float\" with l2");
  if (has_ball && !c.override_intersection)
    throw DomainError(
        "a ball member needs intersection_override (no exact H-form)");

  if (c.override_intersection) {
    const HPolyhedron& ov = *c.override_intersection;
    if (ov.dim != c.dim) throw DomainError("override: dimension mismatch");
    if (ov.known_empty) return;  // surfaced later as the empty outcome
    // Spot check: the override must sit inside every member. Polyhedral
    // members get the real inclusion test; a ball checks the override's
    // vertices (and rejects rays, since a ball traps nothing unbounded).
    std::optional<VPolyhedron> ov_v;
    for (std::size_t i = 0; i < c.sets.size(); ++i) {
      const auto& s = c.sets[i];
      const std::string tag = "override vs set " + std::to_string(i);
      if (is_polyhedral(s)) {
        if (!inclusion(ov, to_hform(s)).included)
          throw DomainError(tag + ": override point leaves the member");
      } else if (const auto* b = std::get_if<Ball>(&s)) {
        if (!ov_v) ov_v = convert_to_v(ov);
        if (!ov_v->rays.empty())
          throw DomainError(tag + ": unbounded override inside a ball");
        for (const auto& p : ov_v->points)
          if (norm_l2_sq(vec_sub(p, b->center)) > b->radius * b->radius)
            throw DomainError(tag + ": override vertex outside the ball");
      }
    }
  }
}

namespace {

std::vector<std::size_t> tight_rows(const HPolyhedron& h, const RatVec& p) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < h.rows.size(); ++i)
    if (dot(h.rows[i].a, p) == h.rows[i].b) idx.push_back(i);
  return idx;
}

// Squared-euclidean projection onto a canonical H-form: enumerate active
// candidate sets (equality rows always in), solve the stationarity system
//   p = x - A^T lambda,  A A^T lambda = A x - b,
// and accept the first subset whose multipliers are feasible. The minimizer
// is unique, so subset order cannot change the answer.
RatVec project_l2_hpoly(const HPolyhedron& s, const RatVec& x) {
  std::vector<std::size_t> eq_rows, ineq_rows;
  for (std::size_t i = 0; i < s.rows.size(); ++i)
    (s.rows[i].eq ? eq_rows : ineq_rows).push_back(i);
  const int m = static_cast<int>(ineq_rows.size());
  if (m > 20)
    throw DomainError("project_point: too many facets for l2 enumeration");

  for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
    std::vector<std::size_t> active = eq_rows;
    for (int j = 0; j < m; ++j)
      if ((mask >> j) & 1ul) active.push_back(ineq_rows[static_cast<std::size_t>(j)]);

    RatVec p;
    const std::size_t first_ineq_lambda = eq_rows.size();
    RatVec lambda;
    if (active.empty()) {
      p = x;
    } else {
      const std::size_t k = active.size();
      RatMat gram(k, RatVec(k));
      RatVec rhs(k);
      for (std::size_t i = 0; i < k; ++i) {
        const HRow& ri = s.rows[active[i]];
        for (std::size_t j = 0; j < k; ++j)
          gram[i][j] = dot(ri.a, s.rows[active[j]].a);
        rhs[i] = dot(ri.a, x) - ri.b;
      }
      auto sol = solve_linear(std::move(gram), std::move(rhs));
      if (!sol) continue;  // dependent subset; an independent one covers it
      lambda = std::move(*sol);
      p = x;
      for (std::size_t i = 0; i < k; ++i)
        p = vec_sub(p, vec_scale(lambda[i], s.rows[active[i]].a));
    }

    bool ok = true;
    for (std::size_t i = first_ineq_lambda; ok && i < lambda.size(); ++i)
      if (lambda[i] < 0) ok = false;
    if (ok && hpoly_contains(s, p)) return p;
  }
  throw DomainError("project_point: KKT enumeration found no feasible point");
}

// Distance LP in variables (p, t): minimize t subject to p in s and
// x - p in t * unit ball, the latter written with the ball's facet rows.
Projection project_lp_hpoly(const HPolyhedron& s, const RatVec& x,
                            NormKind kind) {
  const int n = s.dim;
  HPolyhedron prog;
  prog.dim = n + 1;
  for (const auto& row : s.rows) {
    RatVec a = row.a;
    a.push_back(Rat(0));
    prog.rows.push_back({std::move(a), row.b, row.eq});
  }
  const HPolyhedron unit = ball_hpoly(kind, n, Rat(1));
  for (const auto& facet : unit.rows) {
    // facet.a . (x - p) <= t * facet.b with facet.b > 0 after scaling
    assert(!facet.eq && facet.b > 0);
    RatVec a = vec_neg(facet.a);
    a.push_back(-facet.b);
    prog.rows.push_back({std::move(a), -dot(facet.a, x), false});
  }
  RatVec c = zero_vec(n + 1);
  c.back() = 1;
  const LPOutcome out = solve_lp(c, Sense::Min, prog);
  if (out.status != LPStatus::Optimal)
    throw DomainError("project_point: distance LP failed (empty member?)");
  Projection res;
  res.point = RatVec(out.point.begin(), out.point.begin() + n);
  res.dist = out.value;
  res.dist_d = rat_to_double(out.value);
  res.active_rows = tight_rows(s, *res.point);
  return res;
}

}  // namespace

Projection project_point(const ConvexSet& s, const RatVec& x,
                         const NormContext& nc) {
  Projection res;
  if (is_family(s)) {
    // Distance to the family's intersection {0}; sup_i d(x, A_i) = |x| and
    // all three norms agree on the line.
    res.point = zero_vec(1);
    res.dist = abs_rat(x.at(0));
    res.dist_sq = *res.dist * *res.dist;
    res.dist_d = rat_to_double(*res.dist);
    return res;
  }
  if (const auto* b = std::get_if<Ball>(&s)) {
    if (nc.kind != NormKind::L2)
      throw DomainError("project_point: ball payloads are euclidean-only");
    const Rat dsq = norm_l2_sq(vec_sub(x, b->center));
    if (dsq <= b->radius * b->radius) {
      res.point = x;
      res.dist = Rat(0);
      res.dist_sq = Rat(0);
      res.dist_d = 0.0;
      return res;
    }
    const double len = std::sqrt(rat_to_double(dsq));
    const double r = rat_to_double(b->radius);
    res.dist_d = len - r;
    res.point_d.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double ci = rat_to_double(b->center[i]);
      res.point_d[i] = ci + (rat_to_double(x[i]) - ci) * (r / len);
    }
    return res;  // nearest point irrational: float data only
  }

  const HPolyhedron h = to_hform(s);
  if (h.known_empty) throw DomainError("project_point: empty member set");
  if (nc.kind == NormKind::L2) {
    RatVec p = project_l2_hpoly(h, x);
    res.dist_sq = norm_l2_sq(vec_sub(x, p));
    res.dist_d = std::sqrt(rat_to_double(*res.dist_sq));
    res.active_rows = tight_rows(h, p);
    res.point = std::move(p);
    return res;
  }
  return project_lp_hpoly(h, x, nc.kind);
}

ConicalHull conical_hull(const ConvexSet& s) {
  if (is_family(s))
    throw UnsupportedError(
        "conical_hull: the interval family has per-member cones at 0, not a "
        "single hull");
  if (const auto* b = std::get_if<Ball>(&s)) {
    const int dim = static_cast<int>(b->center.size());
    const Rat csq = norm_l2_sq(b->center);
    const Rat rsq = b->radius * b->radius;
    if (csq < rsq) return {HPolyhedron::whole_space(dim), true};
    if (csq > rsq)
      throw UnsupportedError(
          "conical_hull: a ball away from the origin spans a circular cone "
          "with no H-form");
    // origin on the sphere: the cone is an open halfspace plus the origin
    HPolyhedron h;
    h.dim = dim;
    h.rows.push_back({vec_neg(b->center), Rat(0), false});
    canonicalize(h);
    return {std::move(h), false};
  }
  HPolyhedron h = canonicalized(to_hform(s));
  if (h.known_empty) throw DomainError("conical_hull: empty set");
  return conical_hull(h);
}

HPolyhedron tangent_cone(const ConvexSet& s, const RatVec& x) {
  if (const auto* b = std::get_if<Ball>(&s)) {
    const Rat dsq = norm_l2_sq(vec_sub(x, b->center));
    const Rat rsq = b->radius * b->radius;
    if (dsq > rsq) throw DomainError("tangent_cone: point outside the set");
    if (dsq < rsq) return HPolyhedron::whole_space(static_cast<int>(x.size()));
    HPolyhedron t;
    t.dim = static_cast<int>(x.size());
    t.rows.push_back({vec_sub(x, b->center), Rat(0), false});
    canonicalize(t);
    return t;
  }
  if (is_family(s)) {
    // Every member contains 0 in its interior, so each tangent cone there is
    // the whole line; other points are not common to the family.
    if (!is_zero_vec(x))
      throw DomainError("tangent_cone: family cones only available at 0");
    return HPolyhedron::whole_space(1);
  }

  const HPolyhedron h = to_hform(s);
  HPolyhedron t;
  t.dim = h.dim;
  for (const auto& row : h.rows) {
    const Rat slack = row.b - dot(row.a, x);
    if (row.eq ? slack != 0 : slack < 0)
      throw DomainError("tangent_cone: point outside the set");
    if (slack == 0) t.rows.push_back({row.a, Rat(0), row.eq});
  }
  canonicalize(t);
  return t;
}

GeneratedCone normal_cone(const ConvexSet& s, const RatVec& x) {
  GeneratedCone g;
  g.dim = static_cast<int>(x.size());
  if (const auto* b = std::get_if<Ball>(&s)) {
    const Rat dsq = norm_l2_sq(vec_sub(x, b->center));
    const Rat rsq = b->radius * b->radius;
    if (dsq > rsq) throw DomainError("normal_cone: point outside the set");
    if (dsq == rsq) g.rays.push_back(primitive_scale(vec_sub(x, b->center)));
    return g;
  }
  if (is_family(s)) {
    if (!is_zero_vec(x))
      throw DomainError("normal_cone: family cones only available at 0");
    return g;  // dual of the whole line: {0}
  }

  const HPolyhedron h = to_hform(s);
  for (const auto& row : h.rows) {
    const Rat slack = row.b - dot(row.a, x);
    if (row.eq ? slack != 0 : slack < 0)
      throw DomainError("normal_cone: point outside the set");
    if (slack == 0) {
      g.rays.push_back(primitive_scale(row.a));
      if (row.eq) g.rays.push_back(primitive_scale(vec_neg(row.a)));
    }
  }
  std::sort(g.rays.begin(), g.rays.end(),
            [](const RatVec& l, const RatVec& r) {
              return std::lexicographical_compare(l.begin(), l.end(), r.begin(),
                                                  r.end());
            });
  g.rays.erase(std::unique(g.rays.begin(), g.rays.end()), g.rays.end());
  return g;
}

}  // namespace polyreg
