#include "polyreg/polyhedron.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

#include "polyreg/linalg.hpp"
#include "polyreg/lp.hpp"

namespace polyreg {

HPolyhedron HPolyhedron::whole_space(int dim) {
  HPolyhedron p;
  p.dim = dim;
  p.canonical = true;
  return p;
}

HPolyhedron HPolyhedron::empty_set(int dim) {
  HPolyhedron p;
  p.dim = dim;
  p.rows.push_back({zero_vec(dim), Rat(-1), false});
  p.canonical = true;
  p.known_empty = true;
  return p;
}

HPolyhedron make_hpoly(int dim, std::vector<HRow> rows) {
  HPolyhedron p;
  p.dim = dim;
  p.rows = std::move(rows);
  for (const auto& r : p.rows) {
    assert(static_cast<int>(r.a.size()) == dim);
    (void)r;
  }
  return p;
}

VPolyhedron v_of_cone(const GeneratedCone& c) {
  VPolyhedron v;
  v.dim = c.dim;
  v.points.push_back(zero_vec(c.dim));
  v.rays = c.rays;
  return v;
}

bool hpoly_contains(const HPolyhedron& p, const RatVec& x) {
  assert(static_cast<int>(x.size()) == p.dim);
  for (const auto& r : p.rows) {
    const Rat v = dot(r.a, x);
    if (r.eq ? v != r.b : v > r.b) return false;
  }
  return true;
}

namespace {

bool row_less(const HRow& l, const HRow& r) {
  if (l.eq != r.eq) return l.eq;  // equalities first
  if (l.a != r.a) return std::lexicographical_compare(l.a.begin(), l.a.end(),
                                                      r.a.begin(), r.a.end());
  return l.b < r.b;
}

}  // namespace

void dedup_rows(HPolyhedron& p) {
  std::vector<HRow> kept;
  // key: (a, eq) -> tightest b seen
  std::map<std::pair<RatVec, bool>, std::size_t> seen;
  for (auto& row : p.rows) {
    if (is_zero_vec(row.a)) {
      const bool bad = row.eq ? row.b != 0 : row.b < 0;
      if (bad) {
        p = HPolyhedron::empty_set(p.dim);
        return;
      }
      continue;  // trivial row
    }
    auto key = std::make_pair(row.a, row.eq);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(std::move(key), kept.size());
      kept.push_back(row);
    } else if (!row.eq) {
      HRow& have = kept[it->second];
      if (row.b < have.b) have.b = row.b;
    } else if (kept[it->second].b != row.b) {
      p = HPolyhedron::empty_set(p.dim);  // a.x = b1 and a.x = b2
      return;
    }
  }
  p.rows = std::move(kept);
}

void canonicalize(HPolyhedron& p) {
  if (p.canonical) return;
  for (auto& row : p.rows) primitive_scale_row(row.a, row.b);
  dedup_rows(p);
  if (p.known_empty) return;
  if (!is_feasible(p)) {
    p = HPolyhedron::empty_set(p.dim);
    return;
  }

  // Implicit equalities: an inequality row that the whole set satisfies with
  // equality belongs to the affine hull. max a.x <= b holds by feasibility,
  // so the row is tight everywhere iff min a.x == b.
  for (auto& row : p.rows) {
    if (row.eq) continue;
    const auto out = solve_lp(row.a, Sense::Min, p);
    if (out.status == LPStatus::Optimal && out.value == row.b) row.eq = true;
  }

  // Reduced echelon basis for the affine hull. RREF leaves a positive
  // leading coefficient, and primitive scaling keeps its sign.
  RatMat eqm;
  for (const auto& row : p.rows) {
    if (!row.eq) continue;
    RatVec line = row.a;
    line.push_back(row.b);
    eqm.push_back(std::move(line));
  }
  const auto pivots = rref(eqm);
  for (int pc : pivots) {
    assert(pc < p.dim);  // pivot in the b column would mean infeasible
    (void)pc;
  }
  std::vector<HRow> eq_rows;
  for (const auto& line : eqm) {
    HRow r;
    r.a.assign(line.begin(), line.end() - 1);
    r.b = line.back();
    r.eq = true;
    primitive_scale_row(r.a, r.b);
    eq_rows.push_back(std::move(r));
  }

  // Reduce inequality rows modulo the hull so each facet has one primitive
  // representative (zeros in all pivot columns).
  std::vector<HRow> ineq_rows;
  for (auto& row : p.rows) {
    if (row.eq) continue;
    RatVec a = row.a;
    Rat b = row.b;
    for (std::size_t k = 0; k < eqm.size(); ++k) {
      const auto pc = static_cast<std::size_t>(pivots[k]);
      const Rat coef = a[pc] / eqm[k][pc];
      if (coef == 0) continue;
      for (int j = 0; j < p.dim; ++j)
        a[static_cast<std::size_t>(j)] -= coef * eqm[k][static_cast<std::size_t>(j)];
      b -= coef * eqm[k][static_cast<std::size_t>(p.dim)];
    }
    if (is_zero_vec(a)) {
      assert(b >= 0);  // the set is nonempty, so 0 <= b holds on it
      continue;
    }
    primitive_scale_row(a, b);
    ineq_rows.push_back({std::move(a), std::move(b), false});
  }

  HPolyhedron q;
  q.dim = p.dim;
  q.rows = eq_rows;
  q.rows.insert(q.rows.end(), ineq_rows.begin(), ineq_rows.end());
  dedup_rows(q);
  assert(!q.known_empty);

  // Redundancy: a row survives iff the others do not already imply it.
  // Facet rows are unique after the reduction above, so the scan order
  // cannot change the result.
  for (std::size_t i = 0; i < q.rows.size();) {
    if (q.rows[i].eq) {
      ++i;
      continue;
    }
    HPolyhedron rest;
    rest.dim = q.dim;
    for (std::size_t j = 0; j < q.rows.size(); ++j)
      if (j != i) rest.rows.push_back(q.rows[j]);
    const auto out = solve_lp(q.rows[i].a, Sense::Max, rest);
    if (out.status == LPStatus::Optimal && out.value <= q.rows[i].b)
      q.rows.erase(q.rows.begin() + static_cast<long>(i));
    else
      ++i;
  }

  std::sort(q.rows.begin(), q.rows.end(), row_less);
  q.canonical = true;
  p = std::move(q);
}

std::string to_string(const HPolyhedron& p) {
  std::ostringstream os;
  os << "{dim=" << p.dim;
  if (p.known_empty) os << " empty";
  for (const auto& r : p.rows) {
    os << " [";
    for (std::size_t j = 0; j < r.a.size(); ++j)
      os << (j ? "," : "") << rat_to_string(r.a[j]);
    os << (r.eq ? " == " : " <= ") << rat_to_string(r.b) << "]";
  }
  os << "}";
  return os.str();
}

std::string to_string(const VPolyhedron& v) {
  std::ostringstream os;
  os << "{dim=" << v.dim << " points:";
  for (const auto& pt : v.points) {
    os << " (";
    for (std::size_t j = 0; j < pt.size(); ++j)
      os << (j ? "," : "") << rat_to_string(pt[j]);
    os << ")";
  }
  os << " rays:";
  for (const auto& r : v.rays) {
    os << " (";
    for (std::size_t j = 0; j < r.size(); ++j)
      os << (j ? "," : "") << rat_to_string(r[j]);
    os << ")";
  }
  os << "}";
  return os.str();
}

}  // namespace polyreg
