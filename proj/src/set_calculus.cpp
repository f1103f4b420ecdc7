#include "polyreg/set_calculus.hpp"

#include <cassert>

#include "polyreg/lp.hpp"

namespace polyreg {

HPolyhedron polar_of_v(const VPolyhedron& s) {
  HPolyhedron h;
  h.dim = s.dim;
  for (const auto& p : s.points) h.rows.push_back({p, Rat(1), false});
  for (const auto& r : s.rays) h.rows.push_back({r, Rat(0), false});
  canonicalize(h);
  return h;
}

HPolyhedron polar(const HPolyhedron& s) {
  if (!hpoly_contains(s, zero_vec(s.dim)))
    throw DomainError("polar: set does not contain the origin");
  return polar_of_v(convert_to_v(s));
}

HPolyhedron dual_cone_of_v(const VPolyhedron& s) {
  HPolyhedron h;
  h.dim = s.dim;
  for (const auto& p : s.points) h.rows.push_back({p, Rat(0), false});
  for (const auto& r : s.rays) h.rows.push_back({r, Rat(0), false});
  canonicalize(h);
  return h;
}

HPolyhedron dual_cone_of(const HPolyhedron& s) {
  return dual_cone_of_v(convert_to_v(s));
}

HPolyhedron dual_cone_of_rays(const GeneratedCone& c) {
  return dual_cone_of_v(v_of_cone(c));
}

HPolyhedron recession_cone(const HPolyhedron& s) {
  if (s.known_empty || (!s.canonical && !is_feasible(s)))
    throw DomainError("recession_cone: empty polyhedron");
  HPolyhedron h;
  h.dim = s.dim;
  for (const auto& row : s.rows) h.rows.push_back({row.a, Rat(0), row.eq});
  canonicalize(h);
  return h;
}

VPolyhedron minkowski_sum_v(const VPolyhedron& a, const VPolyhedron& b) {
  assert(a.dim == b.dim);
  VPolyhedron s;
  s.dim = a.dim;
  for (const auto& p : a.points)
    for (const auto& q : b.points) s.points.push_back(vec_add(p, q));
  s.rays = a.rays;
  s.rays.insert(s.rays.end(), b.rays.begin(), b.rays.end());
  vpoly_sort(s);
  return s;
}

HPolyhedron minkowski_sum(const HPolyhedron& a, const HPolyhedron& b) {
  return convert_to_h(minkowski_sum_v(convert_to_v(a), convert_to_v(b)));
}

HPolyhedron intersect(const HPolyhedron& a, const HPolyhedron& b) {
  assert(a.dim == b.dim);
  HPolyhedron h;
  h.dim = a.dim;
  h.rows = a.rows;
  h.rows.insert(h.rows.end(), b.rows.begin(), b.rows.end());
  h.known_empty = a.known_empty || b.known_empty;
  return h;
}

HPolyhedron intersect(const std::vector<HPolyhedron>& parts, int dim) {
  HPolyhedron h = HPolyhedron::whole_space(dim);
  h.canonical = false;
  for (const auto& p : parts) h = intersect(h, p);
  return h;
}

HPolyhedron scale_set(const Rat& lambda, const HPolyhedron& s) {
  if (lambda == 0) {
    if (s.known_empty) return HPolyhedron::empty_set(s.dim);
    HPolyhedron h;
    h.dim = s.dim;
    for (int i = 0; i < s.dim; ++i) {
      RatVec e = zero_vec(s.dim);
      e[static_cast<std::size_t>(i)] = 1;
      h.rows.push_back({std::move(e), Rat(0), true});
    }
    canonicalize(h);
    return h;
  }
  HPolyhedron h;
  h.dim = s.dim;
  h.known_empty = s.known_empty;
  for (const auto& row : s.rows) {
    if (lambda > 0)
      h.rows.push_back({row.a, lambda * row.b, row.eq});
    else
      h.rows.push_back({vec_neg(row.a), -(lambda * row.b), row.eq});
  }
  return h;
}

bool vpoly_contains(const VPolyhedron& v, const RatVec& x) {
  // x = sum a_i p_i + sum b_k r_k with sum a_i = 1, a, b >= 0.
  const std::size_t np = v.points.size(), nr = v.rays.size();
  const int vars = static_cast<int>(np + nr);
  HPolyhedron prog;
  prog.dim = vars;
  for (int d = 0; d < v.dim; ++d) {
    RatVec row(static_cast<std::size_t>(vars));
    for (std::size_t i = 0; i < np; ++i) row[i] = v.points[i][static_cast<std::size_t>(d)];
    for (std::size_t k = 0; k < nr; ++k) row[np + k] = v.rays[k][static_cast<std::size_t>(d)];
    prog.rows.push_back({std::move(row), x[static_cast<std::size_t>(d)], true});
  }
  RatVec ones(static_cast<std::size_t>(vars), Rat(0));
  for (std::size_t i = 0; i < np; ++i) ones[i] = 1;
  prog.rows.push_back({std::move(ones), Rat(1), true});
  for (int j = 0; j < vars; ++j) {
    RatVec row(static_cast<std::size_t>(vars), Rat(0));
    row[static_cast<std::size_t>(j)] = -1;
    prog.rows.push_back({std::move(row), Rat(0), false});
  }
  return is_feasible(prog);
}

bool cone_contains(const GeneratedCone& c, const RatVec& x) {
  return vpoly_contains(v_of_cone(c), x);
}

InclusionResult inclusion(const HPolyhedron& p, const HPolyhedron& q) {
  assert(p.dim == q.dim);
  if (p.known_empty) return {true, std::nullopt};
  const auto base = find_point(p);
  if (base.status != LPStatus::Optimal) return {true, std::nullopt};  // p empty

  for (const auto& row : q.rows) {
    for (int side = 0; side < (row.eq ? 2 : 1); ++side) {
      const RatVec a = side == 0 ? row.a : vec_neg(row.a);
      const Rat b = side == 0 ? row.b : Rat(-row.b);
      // sup a.x over p may be unbounded; capping at b + 1 keeps the LP
      // bounded and still produces a violating vertex when one exists.
      HPolyhedron capped = p;
      capped.rows.push_back({a, b + 1, false});
      const auto out = solve_lp(a, Sense::Max, capped);
      if (out.status == LPStatus::Infeasible)
        return {false, base.point};  // every point of p violates by > 1
      assert(out.status == LPStatus::Optimal);
      if (out.value > b) return {false, out.point};
    }
  }
  return {true, std::nullopt};
}

bool set_equal(const HPolyhedron& p, const HPolyhedron& q) {
  return inclusion(p, q).included && inclusion(q, p).included;
}

ConicalHull conical_hull_of_v(const VPolyhedron& s) {
  ConicalHull out;
  VPolyhedron cone;
  cone.dim = s.dim;
  cone.points.push_back(zero_vec(s.dim));
  for (const auto& p : s.points)
    if (!is_zero_vec(p)) cone.rays.push_back(primitive_scale(p));
  cone.rays.insert(cone.rays.end(), s.rays.begin(), s.rays.end());
  vpoly_sort(cone);
  out.hull = convert_to_h(cone);

  // cone(s) itself is closed iff every recession direction is attained by a
  // positive multiple inside s. Bounded s and 0 in s are immediate.
  out.was_closed = true;
  if (!s.rays.empty()) {
    bool zero_in = false;
    for (const auto& p : s.points)
      if (is_zero_vec(p)) zero_in = true;
    HPolyhedron sh;
    if (!zero_in) {
      sh = convert_to_h(s);
      zero_in = hpoly_contains(sh, zero_vec(s.dim));
    }
    if (!zero_in) {
      for (const auto& r : s.rays) {
        // feasible interval of {t >= 0 : t*r in s}; closedness of this ray
        // direction needs the interval to reach some t > 0.
        Rat lo = 0;
        std::optional<Rat> hi;
        bool empty = false;
        auto cap = [&hi](const Rat& t) {
          if (!hi || t < *hi) hi = t;
        };
        for (const auto& row : sh.rows) {
          const Rat c = dot(row.a, r);  // constraint: t*c <= b (or = b)
          if (row.eq) {
            if (c == 0) {
              if (row.b != 0) empty = true;
            } else {
              lo = max_rat(lo, row.b / c);
              cap(row.b / c);
            }
          } else if (c > 0) {
            cap(row.b / c);
          } else if (c < 0) {
            lo = max_rat(lo, row.b / c);
          } else if (row.b < 0) {
            empty = true;
          }
        }
        if (empty || (hi && (*hi < lo || *hi <= 0))) {
          out.was_closed = false;
          break;
        }
      }
    }
  }
  return out;
}

ConicalHull conical_hull(const HPolyhedron& s) {
  return conical_hull_of_v(convert_to_v(s));
}

}  // namespace polyreg
