#include "polyreg/double_description.hpp"

#include <algorithm>
#include <cassert>
#include <set>

#include "polyreg/linalg.hpp"
#include "polyreg/lp.hpp"

namespace polyreg {

namespace {

bool vec_less(const RatVec& l, const RatVec& r) {
  return std::lexicographical_compare(l.begin(), l.end(), r.begin(), r.end());
}

struct Ray {
  RatVec v;
  std::vector<char> active;  // one flag per processed row
};

void recompute_active(Ray& g, const std::vector<RatVec>& processed) {
  g.active.clear();
  g.active.reserve(processed.size());
  for (const auto& r : processed)
    g.active.push_back(dot(r, g.v) == 0 ? 1 : 0);
}

// p, q extreme rays of the current cone; adjacent iff the smallest face
// containing both has dimension lineality + 2, i.e. the rows active at both
// have rank dim - lineality - 2.
bool adjacent(const Ray& p, const Ray& q, const std::vector<RatVec>& processed,
              int dim, int lineality) {
  const int need = dim - lineality - 2;
  if (need < 0) return true;
  std::vector<std::size_t> common;
  for (std::size_t i = 0; i < processed.size(); ++i)
    if (p.active[i] && q.active[i]) common.push_back(i);
  if (static_cast<int>(common.size()) < need) return false;
  RatMat m;
  m.reserve(common.size());
  for (auto i : common) m.push_back(processed[i]);
  return rank(std::move(m)) == need;
}

void dedup_rays(std::vector<Ray>& rays) {
  std::sort(rays.begin(), rays.end(),
            [](const Ray& l, const Ray& r) { return vec_less(l.v, r.v); });
  rays.erase(std::unique(rays.begin(), rays.end(),
                         [](const Ray& l, const Ray& r) { return l.v == r.v; }),
             rays.end());
}

}  // namespace

ConeGens dd_generators(int dim, const std::vector<HRow>& homogeneous_rows) {
  // Split equalities into opposite inequality pairs; only the functional
  // part of each row matters here (b is ignored by design: rows are already
  // homogeneous).
  std::vector<RatVec> todo;
  for (const auto& row : homogeneous_rows) {
    assert(static_cast<int>(row.a.size()) == dim);
    if (is_zero_vec(row.a)) continue;
    todo.push_back(primitive_scale(row.a));
    if (row.eq) todo.push_back(primitive_scale(vec_neg(row.a)));
  }

  std::vector<RatVec> lineality;
  for (int i = 0; i < dim; ++i) {
    RatVec e = zero_vec(dim);
    e[static_cast<std::size_t>(i)] = 1;
    lineality.push_back(std::move(e));
  }
  std::vector<Ray> rays;
  std::vector<RatVec> processed;

  for (const auto& r : todo) {
    // Lineality pivot: if some basis vector leaves the hyperplane, fold the
    // rest onto it and keep the feasible half of the pivot as a ray.
    int piv = -1;
    for (std::size_t k = 0; k < lineality.size(); ++k)
      if (dot(r, lineality[k]) != 0) {
        piv = static_cast<int>(k);
        break;
      }
    if (piv >= 0) {
      const RatVec v0 = lineality[static_cast<std::size_t>(piv)];
      const Rat d0 = dot(r, v0);
      lineality.erase(lineality.begin() + piv);
      for (auto& v : lineality) {
        const Rat d = dot(r, v);
        if (d != 0) v = primitive_scale(vec_sub(v, vec_scale(d / d0, v0)));
      }
      for (auto& g : rays) {
        const Rat d = dot(r, g.v);
        if (d != 0) g.v = primitive_scale(vec_sub(g.v, vec_scale(d / d0, v0)));
      }
      Ray w;
      w.v = d0 > 0 ? vec_neg(v0) : v0;
      w.v = primitive_scale(w.v);
      rays.push_back(std::move(w));
      processed.push_back(r);
      dedup_rays(rays);
      for (auto& g : rays) recompute_active(g, processed);
      continue;
    }

    std::vector<Ray> plus, minus, zero;
    for (auto& g : rays) {
      const Rat d = dot(r, g.v);
      if (d > 0)
        plus.push_back(std::move(g));
      else if (d < 0)
        minus.push_back(std::move(g));
      else
        zero.push_back(std::move(g));
    }
    std::vector<Ray> next;
    // Combine before consuming minus: both sides must still own their
    // activity flags for the adjacency test.
    if (!plus.empty() && !minus.empty()) {
      const int lin = static_cast<int>(lineality.size());
      for (const auto& p : plus)
        for (const auto& q : minus) {
          if (!adjacent(p, q, processed, dim, lin)) continue;
          const Rat dp = dot(r, p.v), dq = dot(r, q.v);
          Ray c;
          c.v = primitive_scale(vec_sub(vec_scale(dp, q.v), vec_scale(dq, p.v)));
          assert(!is_zero_vec(c.v));
          recompute_active(c, processed);
          c.active.push_back(1);
          next.push_back(std::move(c));
        }
    }
    for (auto& g : zero) {
      g.active.push_back(1);
      next.push_back(std::move(g));
    }
    for (auto& g : minus) {
      g.active.push_back(0);
      next.push_back(std::move(g));
    }
    rays = std::move(next);
    processed.push_back(r);
    dedup_rays(rays);
  }

  ConeGens out;
  out.lineality = std::move(lineality);
  for (auto& g : rays) out.rays.push_back(std::move(g.v));
  std::sort(out.lineality.begin(), out.lineality.end(), vec_less);
  std::sort(out.rays.begin(), out.rays.end(), vec_less);
  return out;
}

void vpoly_sort(VPolyhedron& v) {
  std::sort(v.points.begin(), v.points.end(), vec_less);
  v.points.erase(std::unique(v.points.begin(), v.points.end()), v.points.end());
  std::sort(v.rays.begin(), v.rays.end(), vec_less);
  v.rays.erase(std::unique(v.rays.begin(), v.rays.end()), v.rays.end());
}

VPolyhedron convert_to_v(const HPolyhedron& p) {
  if (p.known_empty || (!p.canonical && !is_feasible(p)))
    throw DomainError("convert_to_v: empty polyhedron has no V-form");
  const int hd = p.dim + 1;

  // Homogenize: (x, t) with a.x <= b t, plus t >= 0.
  std::vector<HRow> hrows;
  for (const auto& row : p.rows) {
    RatVec a = row.a;
    a.push_back(-row.b);
    hrows.push_back({std::move(a), Rat(0), row.eq});
  }
  RatVec tdir = zero_vec(hd);
  tdir[static_cast<std::size_t>(p.dim)] = -1;
  hrows.push_back({std::move(tdir), Rat(0), false});

  const ConeGens gens = dd_generators(hd, hrows);

  VPolyhedron v;
  v.dim = p.dim;
  for (const auto& g : gens.rays) {
    const Rat t = g.back();
    assert(t >= 0);
    RatVec x(g.begin(), g.end() - 1);
    if (t > 0) {
      for (auto& c : x) c /= t;
      v.points.push_back(std::move(x));
    } else {
      v.rays.push_back(primitive_scale(x));
    }
  }
  for (const auto& l : gens.lineality) {
    assert(l.back() == 0);  // lineality is orthogonal to the t >= 0 row
    RatVec x(l.begin(), l.end() - 1);
    v.rays.push_back(primitive_scale(x));
    v.rays.push_back(primitive_scale(vec_neg(x)));
  }
  assert(!v.points.empty());
  vpoly_sort(v);
  return v;
}

HPolyhedron convert_to_h(const VPolyhedron& v) {
  if (v.points.empty())
    throw DomainError("convert_to_h: V-form carries no point");
  const int hd = v.dim + 1;

  // The homogenization cone is generated by (p, 1) and (r, 0); its dual is
  // cut out by those generators as row functionals, and the generators of
  // the dual in turn are the facets we are after.
  std::vector<HRow> rows;
  for (const auto& p : v.points) {
    RatVec g = p;
    g.push_back(1);
    rows.push_back({std::move(g), Rat(0), false});
  }
  for (const auto& r : v.rays) {
    RatVec g = r;
    g.push_back(0);
    rows.push_back({std::move(g), Rat(0), false});
  }
  const ConeGens dual = dd_generators(hd, rows);

  HPolyhedron h;
  h.dim = v.dim;
  for (const auto& w : dual.rays) {
    RatVec a(w.begin(), w.end() - 1);
    h.rows.push_back({std::move(a), Rat(-w.back()), false});
  }
  for (const auto& w : dual.lineality) {
    RatVec a(w.begin(), w.end() - 1);
    h.rows.push_back({std::move(a), Rat(-w.back()), true});
  }
  canonicalize(h);
  assert(!h.known_empty);
  return h;
}

}  // namespace polyreg
