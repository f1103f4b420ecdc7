#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "polyreg/theorems.hpp"

using namespace polyreg;

namespace {

HRow le(RatVec a, Rat b) { return {std::move(a), std::move(b), false}; }
HRow eq(RatVec a, Rat b) { return {std::move(a), std::move(b), true}; }

Collection right_angle(NormKind kind, EvalMode mode) {
  Collection c;
  c.dim = 2;
  c.norm = {kind, mode, Rat(1, 1000000)};
  c.sets.push_back(make_hpoly(2, {le({Rat(1), Rat(0)}, Rat(0))}));
  c.sets.push_back(make_hpoly(2, {le({Rat(0), Rat(1)}, Rat(0))}));
  return c;
}

Collection tangency() {
  Collection c;
  c.dim = 2;
  c.norm = {NormKind::L2, EvalMode::Float, Rat(1, 1000000)};
  c.sets.push_back(Ball{{Rat(0), Rat(1)}, Rat(1)});
  c.sets.push_back(make_hpoly(2, {le({Rat(0), Rat(1)}, Rat(0))}));
  c.override_intersection = canonicalized(
      make_hpoly(2, {eq({Rat(1), Rat(0)}, Rat(0)),
                     eq({Rat(0), Rat(1)}, Rat(0))}));
  return c;
}

Collection boxes() {
  Collection c;
  c.dim = 2;
  c.sets.push_back(make_hpoly(2, {le({Rat(-1), Rat(0)}, Rat(0)),
                                  le({Rat(1), Rat(0)}, Rat(2)),
                                  le({Rat(0), Rat(-1)}, Rat(0)),
                                  le({Rat(0), Rat(1)}, Rat(2))}));
  c.sets.push_back(make_hpoly(2, {le({Rat(-1), Rat(0)}, Rat(-1)),
                                  le({Rat(1), Rat(0)}, Rat(3)),
                                  le({Rat(0), Rat(-1)}, Rat(-1)),
                                  le({Rat(0), Rat(1)}, Rat(3))}));
  return c;
}

Collection whole_space() {
  Collection c;
  c.dim = 2;
  c.sets.push_back(HPolyhedron::whole_space(2));
  return c;
}

Collection family_line() {
  Collection c;
  c.dim = 1;
  c.sets.push_back(ShrinkingIntervalFamily{});
  return c;
}

// diamond |x1| + |x2| <= 1 and square [-1,1]^2, both holding 0 strictly
Collection diamond_square() {
  Collection c;
  c.dim = 2;
  c.sets.push_back(make_hpoly(2, {le({Rat(1), Rat(1)}, Rat(1)),
                                  le({Rat(1), Rat(-1)}, Rat(1)),
                                  le({Rat(-1), Rat(1)}, Rat(1)),
                                  le({Rat(-1), Rat(-1)}, Rat(1))}));
  c.sets.push_back(make_hpoly(2, {le({Rat(1), Rat(0)}, Rat(1)),
                                  le({Rat(-1), Rat(0)}, Rat(1)),
                                  le({Rat(0), Rat(1)}, Rat(1)),
                                  le({Rat(0), Rat(-1)}, Rat(1))}));
  return c;
}

std::string detail(const TheoremReport& r, const std::string& key) {
  for (const auto& [k, v] : r.details)
    if (k == key) return v;
  return "";
}

using St = TheoremReport::Status;

}  // namespace

TEST_CASE("theorem id table") {
  CHECK(known_theorem_ids().size() == 10);
  CHECK_THROWS_AS(verify("thm_9_9", right_angle(NormKind::Linf, EvalMode::Exact)),
                  DomainError);
  CHECK(std::string(status_name(St::HypothesisNotMet)) == "hypothesis_not_met");
}

TEST_CASE("prop_3_1 on cones and on non-cones") {
  TheoremReport r = verify("prop_3_1", right_angle(NormKind::Linf, EvalMode::Exact));
  CHECK(r.status == St::Pass);
  CHECK(r.theorem_id == "prop_3_1");
  CHECK(detail(r, "lambda_N") == "1");

  CHECK(verify("prop_3_1", boxes()).status == St::HypothesisNotMet);
}

TEST_CASE("thm_4_1 primal and dual weak normality agree per functional") {
  VerifyParams p;
  p.samples = 6;
  TheoremReport r = verify("thm_4_1", right_angle(NormKind::Linf, EvalMode::Exact), p);
  CHECK(r.status == St::Pass);
  CHECK(detail(r, "functionals_checked") != "0");

  CHECK(verify("thm_4_1", diamond_square(), p).status == St::Pass);
  CHECK(verify("thm_4_1", tangency(), p).status == St::Unsupported);

  // shift one member off the origin: the hypothesis fails
  Collection off = right_angle(NormKind::Linf, EvalMode::Exact);
  off.sets[0] = make_hpoly(2, {le({Rat(1), Rat(0)}, Rat(-1))});
  CHECK(verify("thm_4_1", off, p).status == St::HypothesisNotMet);
}

TEST_CASE("thm_4_2 implications along the eta grid") {
  TheoremReport r = verify("thm_4_2", right_angle(NormKind::Linf, EvalMode::Exact));
  CHECK(r.status == St::Pass);
  CHECK(detail(r, "etas_tested") == "21");
  CHECK(detail(r, "primal_held") != "0");
  CHECK(detail(r, "dual_held") != "0");

  CHECK(verify("thm_4_2", diamond_square()).status == St::Pass);
  CHECK(verify("thm_4_2", right_angle(NormKind::L2, EvalMode::Float)).status ==
        St::Unsupported);

  Collection off = right_angle(NormKind::Linf, EvalMode::Exact);
  off.sets[0] = make_hpoly(2, {le({Rat(1), Rat(0)}, Rat(-1))});
  CHECK(verify("thm_4_2", off).status == St::HypothesisNotMet);
}

TEST_CASE("cor_4_2 equal constants on cones") {
  TheoremReport r = verify("cor_4_2", right_angle(NormKind::Linf, EvalMode::Exact));
  CHECK(r.status == St::Pass);
  CHECK(detail(r, "lambda_N") == "1");
  CHECK(detail(r, "lambda_D") == "1");
  CHECK(detail(r, "lambda_G") == "1");

  CHECK(verify("cor_4_2", boxes()).status == St::HypothesisNotMet);

  // sampled route: the three estimates still land on cos(pi/4) together
  TheoremReport s = verify("cor_4_2", right_angle(NormKind::L2, EvalMode::Float));
  CHECK(s.status == St::Pass);
}

TEST_CASE("thm_5_1 chain at the apex") {
  TheoremReport r = verify("thm_5_1", right_angle(NormKind::Linf, EvalMode::Exact));
  CHECK(r.status == St::Pass);
  CHECK(detail(r, "points_tested") == "1");

  TheoremReport t = verify("thm_5_1", tangency());
  CHECK(t.status == St::HypothesisNotMet);
  CHECK(detail(t, "point") == "(0, 0)");
}

TEST_CASE("prop_5_1 strong chip forces the weak normal chip") {
  VerifyParams p;
  p.samples = 6;
  CHECK(verify("prop_5_1", boxes(), p).status == St::Pass);
  CHECK(verify("prop_5_1", tangency(), p).status == St::HypothesisNotMet);
}

TEST_CASE("thm_5_2 gamma against the uniform constant") {
  TheoremReport ws = verify("thm_5_2", whole_space());
  CHECK(ws.status == St::Pass);
  CHECK(detail(ws, "lambda_UN") == "inf");
  CHECK(detail(ws, "gamma_lb") == "0");

  TheoremReport ra = verify("thm_5_2", right_angle(NormKind::Linf, EvalMode::Exact));
  CHECK(ra.status == St::Pass);
  CHECK(detail(ra, "certified_gamma") == "1");

  CHECK(verify("thm_5_2", right_angle(NormKind::L2, EvalMode::Float)).status ==
        St::Pass);

  TheoremReport fam = verify("thm_5_2", family_line());
  CHECK(fam.status == St::Pass);
  CHECK(detail(fam, "lambda_UN") == "1");

  // non-cone, so only the grid bound is available: reported, not enforced
  TheoremReport bx = verify("thm_5_2", boxes());
  CHECK(bx.status == St::Pass);
  CHECK(detail(bx, "note") != "");
}

TEST_CASE("thm_5_4 four statements under chip") {
  CHECK(verify("thm_5_4", right_angle(NormKind::Linf, EvalMode::Exact)).status ==
        St::Pass);
  CHECK(verify("thm_5_4", boxes()).status == St::Pass);

  TheoremReport t = verify("thm_5_4", tangency());
  CHECK(t.status == St::HypothesisNotMet);
  CHECK(detail(t, "point") == "(0, 0)");
}

TEST_CASE("lemma_5_1_5_2 dual-ball inclusion on both sides of the threshold") {
  TheoremReport r = verify("lemma_5_1_5_2", right_angle(NormKind::Linf, EvalMode::Exact));
  CHECK(r.status == St::Pass);
  CHECK(detail(r, "pointwise_equivalences") == "2");
  CHECK(detail(r, "certified_gamma") == "101/100");

  TheoremReport bx = verify("lemma_5_1_5_2", boxes());
  CHECK(bx.status == St::Pass);
  CHECK(detail(bx, "pointwise_equivalences") == "8");

  CHECK(verify("lemma_5_1_5_2", tangency()).status == St::Unsupported);
  CHECK(verify("lemma_5_1_5_2", family_line()).status == St::HypothesisNotMet);
}

TEST_CASE("thm_5_5 compactness gate and the four-way equivalence") {
  TheoremReport fam = verify("thm_5_5", family_line());
  CHECK(fam.status == St::HypothesisNotMet);
  CHECK(detail(fam, "gamma_lb") == "1");

  TheoremReport ra = verify("thm_5_5", right_angle(NormKind::Linf, EvalMode::Exact));
  CHECK(ra.status == St::Pass);
  CHECK(detail(ra, "statements") == "tttt");

  CHECK(verify("thm_5_5", boxes()).status == St::Pass);
}

TEST_CASE("verify reports are deterministic") {
  VerifyParams p;
  p.seed = 17;
  TheoremReport a = verify("thm_5_2", right_angle(NormKind::L2, EvalMode::Float), p);
  TheoremReport b = verify("thm_5_2", right_angle(NormKind::L2, EvalMode::Float), p);
  CHECK(a.status == b.status);
  CHECK(a.details == b.details);
}

TEST_CASE("cyclic projection onto orthogonal lines finishes in one cycle") {
  Collection c;
  c.dim = 2;
  c.norm = {NormKind::L2, EvalMode::Float, Rat(1, 1000000)};
  c.sets.push_back(make_hpoly(2, {eq({Rat(0), Rat(1)}, Rat(0))}));
  c.sets.push_back(make_hpoly(2, {eq({Rat(1), Rat(0)}, Rat(0))}));

  Trajectory t = cyclic_projection(c, {Rat(1), Rat(1)}, 10);
  CHECK(t.converged_exactly);
  REQUIRE(t.errors.size() == 2);
  CHECK(t.errors[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(t.errors[1] == 0.0);
  CHECK(t.iterates.size() == 3);
  CHECK(t.iterates.back() == RatVec{Rat(0), Rat(0)});
  CHECK(t.rate == 0.0);
}

TEST_CASE("cyclic projection between lines at 45 degrees halves the error") {
  Collection c;
  c.dim = 2;
  c.norm = {NormKind::L2, EvalMode::Float, Rat(1, 1000000)};
  c.sets.push_back(make_hpoly(2, {eq({Rat(1), Rat(-1)}, Rat(0))}));
  c.sets.push_back(make_hpoly(2, {eq({Rat(0), Rat(1)}, Rat(0))}));

  Trajectory t = cyclic_projection(c, {Rat(0), Rat(1)}, 50);
  CHECK_FALSE(t.converged_exactly);
  REQUIRE(t.errors.size() == 51);
  CHECK(t.errors[0] == doctest::Approx(1.0));
  for (double q : t.ratios) CHECK(q == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(t.rate == doctest::Approx(0.5).epsilon(0.05));
  CHECK(t.iterates.size() == 101);
}

TEST_CASE("cyclic projection with a single set stops after one step") {
  Collection c;
  c.dim = 2;
  c.norm = {NormKind::L2, EvalMode::Float, Rat(1, 1000000)};
  c.sets.push_back(make_hpoly(2, {eq({Rat(0), Rat(1)}, Rat(0))}));

  Trajectory t = cyclic_projection(c, {Rat(3), Rat(4)}, 5);
  CHECK(t.converged_exactly);
  CHECK(t.iterates.size() == 2);
  CHECK(t.iterates[1] == RatVec{Rat(3), Rat(0)});
  CHECK(t.errors[0] == doctest::Approx(4.0));
  CHECK(t.errors[1] == 0.0);
}

TEST_CASE("cyclic projection rejects bad inputs") {
  Collection gap;
  gap.dim = 2;
  gap.sets.push_back(make_hpoly(2, {le({Rat(0), Rat(-1)}, Rat(-1))}));
  gap.sets.push_back(make_hpoly(2, {le({Rat(0), Rat(1)}, Rat(-1))}));
  CHECK_THROWS_AS(cyclic_projection(gap, {Rat(0), Rat(0)}, 3), DomainError);

  CHECK_THROWS_AS(cyclic_projection(family_line(), {Rat(1)}, 3),
                  UnsupportedError);

  Collection ra = right_angle(NormKind::Linf, EvalMode::Exact);
  CHECK_THROWS_AS(cyclic_projection(ra, {Rat(1)}, 3), DomainError);
  CHECK_THROWS_AS(cyclic_projection(ra, {Rat(1), Rat(1)}, 0), DomainError);
}
