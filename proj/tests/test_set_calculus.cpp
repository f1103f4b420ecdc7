#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "polyreg/linalg.hpp"
#include "polyreg/lp.hpp"
#include "polyreg/set_calculus.hpp"

using namespace polyreg;

namespace {

HRow le(RatVec a, Rat b) { return {std::move(a), std::move(b), false}; }
HRow eq(RatVec a, Rat b) { return {std::move(a), std::move(b), true}; }

struct Rng {
  uint64_t s;
  uint64_t next() {
    s += 0x9e3779b97f4a7c15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  long inRange(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1));
  }
};

HPolyhedron box(int n, Rat r) {
  HPolyhedron p;
  p.dim = n;
  for (int i = 0; i < n; ++i) {
    RatVec plus = zero_vec(n), minus = zero_vec(n);
    plus[i] = 1;
    minus[i] = -1;
    p.rows.push_back(le(plus, r));
    p.rows.push_back(le(minus, r));
  }
  return p;
}

// Independent vertex oracle for bounded polyhedra: solve every dim-subset of
// tight rows and keep the feasible unique solutions. Exponential and proud of
// it; only used to cross-check the conversion on small instances.
std::vector<RatVec> brute_force_vertices(const HPolyhedron& p) {
  const int n = p.dim;
  const int m = static_cast<int>(p.rows.size());
  std::vector<RatVec> found;
  std::vector<int> idx(n);
  auto run = [&](auto&& self, int start, int depth) -> void {
    if (depth == n) {
      RatMat a;
      RatVec rhs;
      for (int k = 0; k < n; ++k) {
        a.push_back(p.rows[idx[k]].a);
        rhs.push_back(p.rows[idx[k]].b);
      }
      auto x = solve_linear(a, rhs);
      if (x && hpoly_contains(p, *x)) found.push_back(*x);
      return;
    }
    for (int i = start; i < m; ++i) {
      idx[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  run(run, 0, 0);
  std::sort(found.begin(), found.end(),
            [](const RatVec& l, const RatVec& r) {
              return std::lexicographical_compare(l.begin(), l.end(), r.begin(),
                                                  r.end());
            });
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

bool v_contains(const VPolyhedron& v, const RatVec& x) {
  // feasibility: x = sum a_i p_i + sum b_k r_k, sum a_i = 1, a,b >= 0
  const int np = static_cast<int>(v.points.size());
  const int nr = static_cast<int>(v.rays.size());
  const int vars = np + nr;
  HPolyhedron lp;
  lp.dim = vars;
  for (int d = 0; d < v.dim; ++d) {
    RatVec row(vars);
    for (int i = 0; i < np; ++i) row[i] = v.points[i][d];
    for (int k = 0; k < nr; ++k) row[np + k] = v.rays[k][d];
    lp.rows.push_back(eq(std::move(row), x[d]));
  }
  RatVec ones(vars, Rat(0));
  for (int i = 0; i < np; ++i) ones[i] = 1;
  lp.rows.push_back(eq(std::move(ones), Rat(1)));
  for (int j = 0; j < vars; ++j) {
    RatVec row(vars, Rat(0));
    row[j] = -1;
    lp.rows.push_back(le(std::move(row), Rat(0)));
  }
  return is_feasible(lp);
}

}  // namespace

TEST_CASE("unit square vertices") {
  auto v = convert_to_v(canonicalized(box(2, Rat(1))));
  CHECK(v.rays.empty());
  REQUIRE(v.points.size() == 4);
  CHECK(v.points[0] == RatVec{Rat(-1), Rat(-1)});
  CHECK(v.points[3] == RatVec{Rat(1), Rat(1)});
}

TEST_CASE("quadrant cone generators") {
  HPolyhedron p = make_hpoly(2, {le({Rat(-1), Rat(0)}, Rat(0)),
                                 le({Rat(0), Rat(-1)}, Rat(0))});
  auto v = convert_to_v(p);
  REQUIRE(v.points.size() == 1);
  CHECK(v.points[0] == zero_vec(2));
  REQUIRE(v.rays.size() == 2);
  CHECK(v.rays[0] == RatVec{Rat(0), Rat(1)});
  CHECK(v.rays[1] == RatVec{Rat(1), Rat(0)});
}

TEST_CASE("halfspace has lineality and one ray") {
  HPolyhedron p = make_hpoly(2, {le({Rat(0), Rat(1)}, Rat(0))});  // y <= 0
  auto v = convert_to_v(p);
  // rays: the x-axis both ways plus -e2
  REQUIRE(v.rays.size() == 3);
  CHECK(std::count(v.rays.begin(), v.rays.end(), RatVec{Rat(1), Rat(0)}) == 1);
  CHECK(std::count(v.rays.begin(), v.rays.end(), RatVec{Rat(-1), Rat(0)}) == 1);
  CHECK(std::count(v.rays.begin(), v.rays.end(), RatVec{Rat(0), Rat(-1)}) == 1);
}

TEST_CASE("unbounded polyhedron with affine offset") {
  // x >= 1, y >= x  -> vertex (1,1), rays e2 and (1,1)
  HPolyhedron p = make_hpoly(2, {le({Rat(-1), Rat(0)}, Rat(-1)),
                                 le({Rat(1), Rat(-1)}, Rat(0))});
  auto v = convert_to_v(p);
  REQUIRE(v.points.size() == 1);
  CHECK(v.points[0] == RatVec{Rat(1), Rat(1)});
  REQUIRE(v.rays.size() == 2);
  CHECK(v.rays[0] == RatVec{Rat(0), Rat(1)});
  CHECK(v.rays[1] == RatVec{Rat(1), Rat(1)});
}

TEST_CASE("conversion matches the brute-force vertex oracle") {
  Rng rng{443311};
  for (int iter = 0; iter < 30; ++iter) {
    const int n = static_cast<int>(rng.inRange(2, 3));
    HPolyhedron p = box(n, Rat(rng.inRange(1, 2)));
    const int extra = static_cast<int>(rng.inRange(1, 4));
    for (int k = 0; k < extra; ++k) {
      RatVec a(n);
      bool allz = true;
      for (auto& c : a) {
        c = Rat(rng.inRange(-2, 2));
        if (c != 0) allz = false;
      }
      if (allz) continue;
      p.rows.push_back(le(std::move(a), Rat(rng.inRange(1, 3))));
    }
    canonicalize(p);
    if (p.known_empty) continue;
    auto v = convert_to_v(p);
    CHECK(v.rays.empty());
    CHECK(v.points == brute_force_vertices(p));
  }
}

TEST_CASE("round trip h -> v -> h is the identity on canonical forms") {
  Rng rng{8675309};
  for (int iter = 0; iter < 30; ++iter) {
    const int n = static_cast<int>(rng.inRange(1, 3));
    HPolyhedron p;
    p.dim = n;
    const int m = static_cast<int>(rng.inRange(1, 5));
    for (int k = 0; k < m; ++k) {
      RatVec a(n);
      for (auto& c : a) c = Rat(rng.inRange(-2, 2));
      p.rows.push_back(le(std::move(a), Rat(rng.inRange(0, 3))));
    }
    canonicalize(p);
    if (p.known_empty) continue;
    HPolyhedron back = convert_to_h(convert_to_v(p));
    CHECK(p.rows == back.rows);
  }
}

TEST_CASE("v -> h -> v reproduces membership") {
  VPolyhedron v;
  v.dim = 2;
  v.points = {{Rat(0), Rat(0)}, {Rat(2), Rat(0)}, {Rat(0), Rat(2)}};
  v.rays = {{Rat(1), Rat(1)}};
  HPolyhedron h = convert_to_h(v);
  CHECK(hpoly_contains(h, {Rat(1), Rat(1, 2)}));
  CHECK(hpoly_contains(h, {Rat(5), Rat(4)}));
  CHECK_FALSE(hpoly_contains(h, {Rat(-1), Rat(0)}));
  CHECK_FALSE(hpoly_contains(h, {Rat(3), Rat(0)}));

  auto v2 = convert_to_v(h);
  for (const auto& pt : v.points) CHECK(v_contains(v2, pt));
  CHECK(v_contains(v2, {Rat(7), Rat(6)}));
}

TEST_CASE("polar of the box is the cross polytope") {
  auto p = polar(canonicalized(box(2, Rat(1))));
  HPolyhedron expect = make_hpoly(2, {le({Rat(-1), Rat(-1)}, Rat(1)),
                                      le({Rat(-1), Rat(1)}, Rat(1)),
                                      le({Rat(1), Rat(-1)}, Rat(1)),
                                      le({Rat(1), Rat(1)}, Rat(1))});
  canonicalize(expect);
  CHECK(p.rows == expect.rows);
}

TEST_CASE("polar requires the origin") {
  HPolyhedron shifted = make_hpoly(1, {le({Rat(1)}, Rat(3)),
                                       le({Rat(-1)}, Rat(-2))});  // [2,3]
  CHECK_THROWS_AS(polar(shifted), DomainError);
}

TEST_CASE("bipolar identity for sets containing the origin") {
  Rng rng{55221100};
  for (int iter = 0; iter < 25; ++iter) {
    const int n = static_cast<int>(rng.inRange(1, 3));
    HPolyhedron p = box(n, Rat(rng.inRange(1, 3), rng.inRange(1, 2)));
    const int extra = static_cast<int>(rng.inRange(0, 3));
    for (int k = 0; k < extra; ++k) {
      RatVec a(n);
      for (auto& c : a) c = Rat(rng.inRange(-3, 3));
      p.rows.push_back(le(std::move(a), Rat(rng.inRange(0, 2))));
    }
    canonicalize(p);
    if (p.known_empty || !hpoly_contains(p, zero_vec(n))) continue;
    HPolyhedron pp = polar(polar(p));
    CHECK(p.rows == pp.rows);
  }
}

TEST_CASE("polar is antitone and scales contravariantly") {
  HPolyhedron small = canonicalized(box(2, Rat(1)));
  HPolyhedron big = canonicalized(box(2, Rat(2)));
  CHECK(inclusion(polar(big), polar(small)).included);
  CHECK_FALSE(inclusion(polar(small), polar(big)).included);

  HPolyhedron scaled = canonicalized(scale_set(Rat(2), small));
  CHECK(set_equal(scaled, big));
  CHECK(set_equal(polar(scaled), canonicalized(scale_set(Rat(1, 2), polar(small)))));
}

TEST_CASE("dual cone of the nonnegative quadrant") {
  HPolyhedron q = make_hpoly(2, {le({Rat(-1), Rat(0)}, Rat(0)),
                                 le({Rat(0), Rat(-1)}, Rat(0))});
  auto d = dual_cone_of(q);
  HPolyhedron expect = make_hpoly(2, {le({Rat(1), Rat(0)}, Rat(0)),
                                      le({Rat(0), Rat(1)}, Rat(0))});
  canonicalize(expect);
  CHECK(d.rows == expect.rows);
}

TEST_CASE("polar of a cone equals its dual cone") {
  HPolyhedron k = make_hpoly(2, {le({Rat(-1), Rat(1)}, Rat(0)),
                                 le({Rat(0), Rat(-1)}, Rat(0))});
  CHECK(polar(k).rows == dual_cone_of(k).rows);
}

TEST_CASE("recession cone of a shifted quadrant") {
  HPolyhedron p = make_hpoly(2, {le({Rat(-1), Rat(0)}, Rat(-1)),
                                 le({Rat(0), Rat(-1)}, Rat(-2))});  // x>=1,y>=2
  auto r = recession_cone(p);
  HPolyhedron expect = make_hpoly(2, {le({Rat(-1), Rat(0)}, Rat(0)),
                                      le({Rat(0), Rat(-1)}, Rat(0))});
  canonicalize(expect);
  CHECK(r.rows == expect.rows);
}

TEST_CASE("recession cone of the polar is the dual cone (unbounded sets)") {
  // A = [-1,1] x R contains 0; 0+A = {0} x R and A-dual = segment duality
  HPolyhedron a = make_hpoly(2, {le({Rat(1), Rat(0)}, Rat(1)),
                                 le({Rat(-1), Rat(0)}, Rat(1))});
  canonicalize(a);
  CHECK(set_equal(recession_cone(polar(a)), dual_cone_of(a)));
}

TEST_CASE("minkowski sum of box and segment") {
  HPolyhedron b = canonicalized(box(2, Rat(1)));
  VPolyhedron seg;
  seg.dim = 2;
  seg.points = {{Rat(0), Rat(0)}, {Rat(2), Rat(0)}};
  HPolyhedron s = convert_to_h(seg);
  HPolyhedron sum = minkowski_sum(b, s);
  HPolyhedron expect = make_hpoly(2, {le({Rat(1), Rat(0)}, Rat(3)),
                                      le({Rat(-1), Rat(0)}, Rat(1)),
                                      le({Rat(0), Rat(1)}, Rat(1)),
                                      le({Rat(0), Rat(-1)}, Rat(1))});
  canonicalize(expect);
  CHECK(sum.rows == expect.rows);
}

TEST_CASE("sum with an unbounded part keeps rays") {
  HPolyhedron quad = make_hpoly(2, {le({Rat(-1), Rat(0)}, Rat(0)),
                                    le({Rat(0), Rat(-1)}, Rat(0))});
  HPolyhedron b = canonicalized(box(2, Rat(1)));
  HPolyhedron sum = minkowski_sum(quad, b);
  HPolyhedron expect = make_hpoly(2, {le({Rat(-1), Rat(0)}, Rat(1)),
                                      le({Rat(0), Rat(-1)}, Rat(1))});
  canonicalize(expect);
  CHECK(sum.rows == expect.rows);
}

TEST_CASE("polar turns cone sums into intersections of polars") {
  // (K1 + K2)-polar == K1-polar intersect K2-polar; this shortcut is a cone
  // privilege, general sets need the inverse sum instead.
  Rng rng{314159};
  for (int iter = 0; iter < 15; ++iter) {
    const int n = 2;
    HPolyhedron a, b;
    a.dim = b.dim = n;
    for (int k = 0; k < 2; ++k) {
      RatVec ra(n), rb(n);
      for (auto& c : ra) c = Rat(rng.inRange(-2, 2));
      for (auto& c : rb) c = Rat(rng.inRange(-2, 2));
      if (!is_zero_vec(ra)) a.rows.push_back(le(std::move(ra), Rat(0)));
      if (!is_zero_vec(rb)) b.rows.push_back(le(std::move(rb), Rat(0)));
    }
    canonicalize(a);
    canonicalize(b);
    HPolyhedron lhs = polar(minkowski_sum(a, b));
    HPolyhedron rhs = canonicalized(intersect(polar(a), polar(b)));
    CHECK(lhs.rows == rhs.rows);
  }
}

TEST_CASE("inclusion produces a violating witness") {
  HPolyhedron small = canonicalized(box(2, Rat(1)));
  HPolyhedron big = canonicalized(box(2, Rat(2)));
  CHECK(inclusion(small, big).included);
  auto res = inclusion(big, small);
  REQUIRE_FALSE(res.included);
  REQUIRE(res.witness.has_value());
  CHECK(hpoly_contains(big, *res.witness));
  CHECK_FALSE(hpoly_contains(small, *res.witness));
}

TEST_CASE("inclusion catches unbounded escape") {
  HPolyhedron line = make_hpoly(2, {eq({Rat(0), Rat(1)}, Rat(0))});  // x-axis
  HPolyhedron origin = make_hpoly(2, {eq({Rat(1), Rat(0)}, Rat(0)),
                                      eq({Rat(0), Rat(1)}, Rat(0))});
  auto res = inclusion(line, origin);
  REQUIRE_FALSE(res.included);
  REQUIRE(res.witness.has_value());
  CHECK((*res.witness)[1] == Rat(0));
  CHECK((*res.witness)[0] != Rat(0));
  CHECK(inclusion(origin, line).included);
}

TEST_CASE("inclusion handles equality rows both ways") {
  HPolyhedron seg = make_hpoly(2, {eq({Rat(0), Rat(1)}, Rat(1)),
                                   le({Rat(1), Rat(0)}, Rat(1)),
                                   le({Rat(-1), Rat(0)}, Rat(0))});
  HPolyhedron plane = make_hpoly(2, {eq({Rat(0), Rat(1)}, Rat(1))});
  CHECK(inclusion(seg, plane).included);
  CHECK_FALSE(inclusion(plane, seg).included);
}

TEST_CASE("conical hull of a polytope through the origin is closed") {
  HPolyhedron p = canonicalized(box(2, Rat(1)));
  auto h = conical_hull(p);
  CHECK(h.was_closed);
  CHECK(h.hull.rows.empty());  // box around 0 spans the plane
}

TEST_CASE("conical hull of an offset polytope (0 outside) is closed") {
  VPolyhedron tri;
  tri.dim = 2;
  tri.points = {{Rat(1), Rat(1)}, {Rat(2), Rat(1)}, {Rat(1), Rat(2)}};
  auto h = conical_hull(convert_to_h(tri));
  CHECK(h.was_closed);
  CHECK(hpoly_contains(h.hull, {Rat(3), Rat(3)}));
  CHECK_FALSE(hpoly_contains(h.hull, {Rat(-1), Rat(0)}));
  CHECK(hpoly_contains(h.hull, {Rat(2), Rat(4)}));   // direction of (1,2)
  CHECK_FALSE(hpoly_contains(h.hull, {Rat(1), Rat(3)}));
}

TEST_CASE("shifted ray: hull closed only after taking closure") {
  // S = (0,1) + cone{e1}: cone(S) misses the recession direction e1
  VPolyhedron s;
  s.dim = 2;
  s.points = {{Rat(0), Rat(1)}};
  s.rays = {{Rat(1), Rat(0)}};
  auto h = conical_hull_of_v(s);
  CHECK_FALSE(h.was_closed);
  // closure = upper halfplane quadrant-like wedge spanned by e1 and (0,1)
  CHECK(hpoly_contains(h.hull, {Rat(5), Rat(0)}));
  CHECK(hpoly_contains(h.hull, {Rat(0), Rat(2)}));
  CHECK_FALSE(hpoly_contains(h.hull, {Rat(-1), Rat(1)}));
}

TEST_CASE("attained recession directions keep the hull closed") {
  // S = {(x, y): x >= 0, 0 <= y <= x} contains 0
  HPolyhedron s = make_hpoly(2, {le({Rat(0), Rat(-1)}, Rat(0)),
                                 le({Rat(-1), Rat(1)}, Rat(0))});
  auto h = conical_hull(s);
  CHECK(h.was_closed);
  CHECK(set_equal(h.hull, canonicalized(s)));
}
