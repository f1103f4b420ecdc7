#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "polyreg/lp.hpp"

using namespace polyreg;

namespace {

HRow le(RatVec a, Rat b) { return {std::move(a), std::move(b), false}; }
HRow eq(RatVec a, Rat b) { return {std::move(a), std::move(b), true}; }

HPolyhedron unit_box(int n) {
  HPolyhedron p;
  p.dim = n;
  for (int i = 0; i < n; ++i) {
    RatVec plus = zero_vec(n), minus = zero_vec(n);
    plus[i] = 1;
    minus[i] = -1;
    p.rows.push_back(le(plus, Rat(1)));
    p.rows.push_back(le(minus, Rat(1)));
  }
  return p;
}

// splitmix64; good enough to shake out pivot paths
struct Rng {
  uint64_t s;
  uint64_t next() {
    s += 0x9e3779b97f4a7c15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  long inRange(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1));
  }
};

}  // namespace

TEST_CASE("maximize x1 + x2 over the unit box") {
  auto out = solve_lp({Rat(1), Rat(1)}, Sense::Max, unit_box(2));
  REQUIRE(out.status == LPStatus::Optimal);
  CHECK(out.value == Rat(2));
  CHECK(out.point == RatVec{Rat(1), Rat(1)});
}

TEST_CASE("degenerate objective still lands on a vertex, deterministically") {
  auto a = solve_lp({Rat(1), Rat(0)}, Sense::Max, unit_box(2));
  auto b = solve_lp({Rat(1), Rat(0)}, Sense::Max, unit_box(2));
  REQUIRE(a.status == LPStatus::Optimal);
  CHECK(a.value == Rat(1));
  CHECK(a.point[0] == Rat(1));
  CHECK(abs_rat(a.point[1]) <= Rat(1));
  CHECK(a.point == b.point);  // Bland's rule fixes the vertex
}

TEST_CASE("infeasible system") {
  HPolyhedron p;
  p.dim = 1;
  p.rows.push_back(le({Rat(1)}, Rat(0)));
  p.rows.push_back(le({Rat(-1)}, Rat(-1)));  // x >= 1
  CHECK(solve_lp({Rat(1)}, Sense::Max, p).status == LPStatus::Infeasible);
  CHECK_FALSE(is_feasible(p));
}

TEST_CASE("unbounded direction is reported") {
  HPolyhedron p;
  p.dim = 2;
  p.rows.push_back(le({Rat(-1), Rat(0)}, Rat(0)));  // x1 >= 0
  CHECK(solve_lp({Rat(1), Rat(0)}, Sense::Max, p).status == LPStatus::Unbounded);
  CHECK(solve_lp({Rat(1), Rat(0)}, Sense::Min, p).status == LPStatus::Optimal);
}

TEST_CASE("equality constraints pass through phase one") {
  HPolyhedron p;
  p.dim = 3;
  p.rows.push_back(eq({Rat(1), Rat(1), Rat(1)}, Rat(1)));
  p.rows.push_back(le({Rat(-1), Rat(0), Rat(0)}, Rat(0)));
  p.rows.push_back(le({Rat(0), Rat(-1), Rat(0)}, Rat(0)));
  p.rows.push_back(le({Rat(0), Rat(0), Rat(-1)}, Rat(0)));
  auto out = solve_lp({Rat(2), Rat(3), Rat(5, 2)}, Sense::Max, p);
  REQUIRE(out.status == LPStatus::Optimal);
  CHECK(out.value == Rat(3));
  CHECK(out.point == RatVec{Rat(0), Rat(1), Rat(0)});
}

TEST_CASE("redundant equality rows are dropped, not fatal") {
  HPolyhedron p;
  p.dim = 2;
  p.rows.push_back(eq({Rat(1), Rat(1)}, Rat(2)));
  p.rows.push_back(eq({Rat(2), Rat(2)}, Rat(4)));  // same hyperplane
  p.rows.push_back(le({Rat(1), Rat(0)}, Rat(5)));
  auto out = solve_lp({Rat(1), Rat(0)}, Sense::Max, p);
  REQUIRE(out.status == LPStatus::Optimal);
  CHECK(out.value == Rat(5));
  CHECK(out.point == RatVec{Rat(5), Rat(-3)});
}

TEST_CASE("fractional data stays exact") {
  HPolyhedron p;
  p.dim = 2;
  p.rows.push_back(le({Rat(1, 3), Rat(1, 7)}, Rat(1)));
  p.rows.push_back(le({Rat(-1), Rat(0)}, Rat(0)));
  p.rows.push_back(le({Rat(0), Rat(-1)}, Rat(0)));
  auto out = solve_lp({Rat(0), Rat(1)}, Sense::Max, p);
  REQUIRE(out.status == LPStatus::Optimal);
  CHECK(out.value == Rat(7));
}

TEST_CASE("optimal point is feasible and optimal on random instances") {
  Rng rng{20260814};
  for (int iter = 0; iter < 60; ++iter) {
    const int n = static_cast<int>(rng.inRange(1, 4));
    HPolyhedron p = unit_box(n);  // keeps everything bounded
    const int extra = static_cast<int>(rng.inRange(0, 5));
    for (int k = 0; k < extra; ++k) {
      RatVec a(n);
      for (auto& c : a) c = Rat(rng.inRange(-3, 3));
      p.rows.push_back(le(std::move(a), Rat(rng.inRange(0, 4))));
    }
    RatVec obj(n);
    for (auto& c : obj) c = Rat(rng.inRange(-5, 5));

    auto out = solve_lp(obj, Sense::Max, p);
    if (out.status != LPStatus::Optimal) {
      CHECK(out.status == LPStatus::Infeasible);
      CHECK_FALSE(is_feasible(p));
      continue;
    }
    CHECK(hpoly_contains(p, out.point));
    CHECK(dot(obj, out.point) == out.value);
    // the optimum dominates a crude interior scan
    for (int probe = 0; probe < 20; ++probe) {
      RatVec x(n);
      for (auto& c : x) c = Rat(rng.inRange(-8, 8), 8);
      if (hpoly_contains(p, x)) CHECK(dot(obj, x) <= out.value);
    }
  }
}
