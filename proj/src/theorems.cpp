#include "polyreg/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyreg/double_description.hpp"
#include "polyreg/inverse_sum.hpp"
#include "polyreg/lp.hpp"
#include "polyreg/sampling.hpp"

namespace polyreg {

namespace {

using Status = TheoremReport::Status;

constexpr uint64_t kTagFunctionals = 0xc0ac29b7c97c50ddull;

void put(TheoremReport& r, std::string key, std::string value) {
  r.details.emplace_back(std::move(key), std::move(value));
}

std::string str_vec(const RatVec& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += rat_to_string(v[i]);
  }
  return out + ")";
}

std::string str_cv(const ConstVal& v) {
  return v.infinite ? "inf" : rat_to_string(v.value);
}

bool cv_pos(const ConstVal& v) { return v.infinite || v.value > 0; }

double cv_dbl(const ConstVal& v) {
  return v.infinite ? std::numeric_limits<double>::infinity()
                    : rat_to_double(v.value);
}

bool sampled_mode(const Collection& c) { return c.norm.kind == NormKind::L2; }

bool has_family(const Collection& c) {
  return std::any_of(c.sets.begin(), c.sets.end(),
                     [](const ConvexSet& s) { return is_family(s); });
}

// Functional batches drive the sampled sub-checks; the constants themselves
// bisect exactly in the polyhedral norms, so the default batch stays small.
// Under l2 the outer suprema are themselves sampled and need real counts.
ConstantsOptions make_opts(const Collection& c, const VerifyParams& p) {
  ConstantsOptions o;
  o.tol = c.norm.tol;
  o.seed = p.seed;
  o.samples = sampled_mode(c) ? std::max(p.samples, 2000) : p.samples;
  o.delta_grid = p.delta_grid;
  return o;
}

// Two routes to the same constant agree when each is within its own error:
// exact bisections stop at tol (so 2*tol apart at worst), sampled suprema
// get a looser float band.
bool constants_agree(const ConstVal& a, const ConstVal& b,
                     const Collection& c) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  if (sampled_mode(c)) return std::fabs(cv_dbl(a) - cv_dbl(b)) <= 5e-4;
  return abs_rat(a.value - b.value) <= 2 * c.norm.tol;
}

std::string agree_tolerance(const Collection& c) {
  return sampled_mode(c) ? std::string("5e-4 (sampled)")
                         : rat_to_string(2 * c.norm.tol);
}

bool zero_in_every_member(const Collection& c) {
  const RatVec z = zero_vec(c.dim);
  return std::all_of(c.sets.begin(), c.sets.end(),
                     [&](const ConvexSet& s) { return set_contains(s, z); });
}

Collection tangent_collection(const Collection& c, const RatVec& x) {
  Collection tc;
  tc.dim = c.dim;
  tc.norm = c.norm;
  if (has_family(c)) {
    // every interval has the whole line as tangent cone at 0
    tc.sets.emplace_back(HPolyhedron::whole_space(c.dim));
    return tc;
  }
  for (const auto& s : c.sets) tc.sets.emplace_back(tangent_cone(s, x));
  return tc;
}

std::vector<GeneratedCone> normal_cones_at(const Collection& c,
                                           const RatVec& x) {
  std::vector<GeneratedCone> out;
  out.reserve(c.sets.size());
  for (const auto& s : c.sets) out.push_back(normal_cone(s, x));
  return out;
}

// Facet normals of every member plus a seeded batch of near-unit directions.
std::vector<RatVec> functional_batch(const Collection& c, int samples,
                                     uint64_t seed) {
  std::vector<RatVec> fixed;
  for (const auto& s : c.sets) {
    if (!is_polyhedral(s)) continue;
    HPolyhedron h = to_hform(s);
    for (const auto& row : h.rows) {
      if (is_zero_vec(row.a)) continue;
      fixed.push_back(primitive_scale(row.a));
      if (row.eq) fixed.push_back(primitive_scale(vec_neg(row.a)));
    }
  }
  std::sort(fixed.begin(), fixed.end());
  fixed.erase(std::unique(fixed.begin(), fixed.end()), fixed.end());
  for (int i = 0; i < samples; ++i) {
    SampleRng g = rng_at(seed ^ kTagFunctionals, static_cast<uint64_t>(i));
    RatVec d = sample_direction(g, c.dim);
    if (!is_zero_vec(d)) fixed.push_back(std::move(d));
  }
  return fixed;
}

// cl co of a union of H-polyhedra, via concatenated V-forms.
HPolyhedron hull_of_union(const std::vector<HPolyhedron>& parts, int dim) {
  VPolyhedron acc;
  acc.dim = dim;
  for (const auto& h : parts) {
    VPolyhedron v = convert_to_v(h);
    acc.points.insert(acc.points.end(), v.points.begin(), v.points.end());
    acc.rays.insert(acc.rays.end(), v.rays.begin(), v.rays.end());
  }
  return canonicalized(convert_to_h(acc));
}

// ---------------------------------------------------------------------------
// prop_3_1: on cone collections the level-(eta, delta) inflation verdict is
// independent of delta (normal <=> uniform normal), and a positive normality
// constant forces a weak-normal eta for every tested functional.

TheoremReport check_prop_3_1(const Collection& c, const VerifyParams& p) {
  TheoremReport r;
  if (!is_cone_collection(c)) {
    r.status = Status::HypothesisNotMet;
    put(r, "reason", "members are not all cones");
    return r;
  }
  put(r, "closed_intersection_property",
      "holds (every member is closed by representation)");
  const ConstantsOptions opt = make_opts(c, p);
  const ConstVal lam = lambda_N(c, opt);
  put(r, "lambda_N", str_cv(lam));

  std::vector<Rat> etas;
  if (lam.infinite)
    etas = {Rat(1), Rat(4)};
  else if (lam.value == 0)
    etas = {Rat(1, 100), Rat(1)};
  else if (sampled_mode(c))
    etas = {lam.value / 2};  // sampled verdicts flicker at the edge
  else
    etas = {lam.value / 2, lam.value, 3 * lam.value / 2};

  for (const auto& eta : etas) {
    const bool base = normality_inclusion_holds(c, eta, Rat(1), opt).holds;
    for (const auto& delta : p.delta_grid) {
      InclusionCheck chk = normality_inclusion_holds(c, eta, delta, opt);
      if (chk.holds == base) continue;
      r.status = Status::Fail;
      put(r, "witness_eta", rat_to_string(eta));
      put(r, "witness_delta", rat_to_string(delta));
      if (chk.witness) put(r, "witness_point", str_vec(*chk.witness));
      put(r, "mismatch", base ? "inclusion holds at delta 1 but not here"
                              : "inclusion holds here but not at delta 1");
      return r;
    }
  }
  put(r, "delta_independence",
      std::to_string(etas.size()) + " eta values x " +
          std::to_string(p.delta_grid.size()) + " deltas, verdicts agree");

  if (cv_pos(lam) && !sampled_mode(c)) {
    const auto funcs = functional_batch(c, p.samples, p.seed);
    for (const auto& f : funcs) {
      if (weak_normal_eta(c, f, opt).kind != WeakNormalEta::Kind::None)
        continue;
      r.status = Status::Fail;
      put(r, "witness_functional", str_vec(f));
      put(r, "mismatch",
          "normal property holds but this functional has no weak-normal eta");
      return r;
    }
    put(r, "weak_normal_functionals", std::to_string(funcs.size()));
  } else if (sampled_mode(c)) {
    put(r, "weak_normal_functionals",
        "skipped (the functional bisection is exact-only)");
  }
  r.status = Status::Pass;
  return r;
}

// ---------------------------------------------------------------------------
// thm_4_1: per functional x*, existence of a weak-normal eta for x* must
// match existence of eta~ with  [0,x*] # clco(U polars)  inside
// clco(U (polar_i # eta~ B*)).  The right side grows with eta~, so an
// ascending geometric search decides existence.

TheoremReport check_thm_4_1(const Collection& c, const VerifyParams& p) {
  TheoremReport r;
  if (sampled_mode(c)) {
    r.status = Status::Unsupported;
    put(r, "reason",
        "the dual inverse-sum construction needs a polyhedral unit ball");
    return r;
  }
  if (!all_polyhedral(c)) {
    r.status = Status::Unsupported;
    put(r, "reason", "the dual construction needs an H-form of every member");
    return r;
  }
  if (!zero_in_every_member(c)) {
    r.status = Status::HypothesisNotMet;
    put(r, "reason", "0 must lie in every member");
    return r;
  }
  put(r, "closed_intersection_property",
      "holds (every member is closed by representation)");

  const int dim = c.dim;
  std::vector<HPolyhedron> polars;
  polars.reserve(c.sets.size());
  for (const auto& s : c.sets) polars.push_back(polar(to_hform(s)));
  const HPolyhedron hull_u = hull_of_union(polars, dim);
  const NormKind dk = dual_kind(c.norm.kind);

  const ConstantsOptions opt = make_opts(c, p);
  int checked = 0;
  for (const auto& f : functional_batch(c, p.samples, p.seed)) {
    const WeakNormalEta w = weak_normal_eta(c, f, opt);
    if (w.kind == WeakNormalEta::Kind::Unconstrained) continue;
    const bool primal = w.kind != WeakNormalEta::Kind::None;

    VPolyhedron seg;
    seg.dim = dim;
    seg.points = {zero_vec(dim), f};
    const HPolyhedron lhs =
        inverse_sum(canonicalized(convert_to_h(seg)), hull_u);

    bool dual = false;
    Rat eta_t(1, 256);
    for (int k = 0; k <= 16 && !dual; ++k, eta_t *= 2) {
      std::vector<HPolyhedron> parts;
      parts.reserve(polars.size());
      for (const auto& po : polars)
        parts.push_back(inverse_sum(po, ball_hpoly(dk, dim, eta_t)));
      dual = inclusion(lhs, hull_of_union(parts, dim)).included;
    }
    if (primal != dual) {
      r.status = Status::Fail;
      put(r, "witness_functional", str_vec(f));
      put(r, "primal_weak_normal", primal ? "eta exists" : "none");
      put(r, "dual_inclusion",
          dual ? "eta~ found" : "no eta~ up to 256 made the inclusion hold");
      return r;
    }
    ++checked;
  }
  put(r, "functionals_checked", std::to_string(checked));
  r.status = Status::Pass;
  return r;
}

// ---------------------------------------------------------------------------
// thm_4_2: two one-directional implications over a geometric eta grid. The
// primal inflation inclusion at eta must force the dual inverse-sum inclusion
// at every eta_hat below eta, and the dual inclusion at a level must force
// the closure-relaxed primal inclusion at that same level.

TheoremReport check_thm_4_2(const Collection& c, const VerifyParams& p) {
  TheoremReport r;
  if (sampled_mode(c)) {
    r.status = Status::Unsupported;
    put(r, "reason", "the dual inclusion is exact-only");
    return r;
  }
  if (!all_polyhedral(c)) {
    r.status = Status::Unsupported;
    put(r, "reason", "the dual construction needs an H-form of every member");
    return r;
  }
  if (!zero_in_every_member(c)) {
    r.status = Status::HypothesisNotMet;
    put(r, "reason", "0 must lie in every member");
    return r;
  }
  const ConstantsOptions opt = make_opts(c, p);
  const ConstVal lam = lambda_N(c, opt);
  put(r, "lambda_N", str_cv(lam));

  // ratio 5/4 is within a percent of ten steps per decade and stays rational
  std::vector<Rat> grid;
  if (lam.infinite) {
    Rat v(1);
    for (int k = 0; k < 9; ++k, v *= 2) grid.push_back(v);
  } else if (lam.value == 0) {
    Rat v(1);
    for (int k = 0; k < 9; ++k) grid.push_back(v /= 2);
  } else {
    Rat v = lam.value;
    for (int j = 0; j < 10; ++j) v = v * Rat(4, 5);
    for (int j = 0; j <= 20; ++j, v = v * Rat(5, 4)) grid.push_back(v);
  }

  int primal_held = 0, dual_held = 0;
  for (const auto& eta : grid) {
    if (normality_inclusion_holds(c, eta, Rat(1), opt).holds) {
      ++primal_held;
      for (int k = 1; k <= 3; ++k) {
        const Rat eta_hat = eta * Rat(k, 4);
        if (dual_normality_inclusion_holds(c, eta_hat)) continue;
        r.status = Status::Fail;
        put(r, "witness_eta", rat_to_string(eta));
        put(r, "witness_eta_hat", rat_to_string(eta_hat));
        put(r, "implication",
            "inflation inclusion at eta, but the dual inclusion fails below");
        return r;
      }
    }
    if (dual_normality_inclusion_holds(c, eta)) {
      ++dual_held;
      const InclusionCheck rel = relaxed_normality_inclusion(c, eta);
      if (!rel.holds) {
        r.status = Status::Fail;
        put(r, "witness_eta", rat_to_string(eta));
        if (rel.witness) put(r, "witness_point", str_vec(*rel.witness));
        put(r, "implication",
            "dual inclusion at eta, but the relaxed primal fails at eta");
        return r;
      }
    }
  }
  put(r, "etas_tested", std::to_string(grid.size()));
  put(r, "primal_held", std::to_string(primal_held));
  put(r, "dual_held", std::to_string(dual_held));
  r.status = Status::Pass;
  return r;
}

// ---------------------------------------------------------------------------
// cor_4_2: on cone collections the three constants coincide.

TheoremReport check_cor_4_2(const Collection& c, const VerifyParams& p) {
  TheoremReport r;
  if (!is_cone_collection(c)) {
    r.status = Status::HypothesisNotMet;
    put(r, "reason", "members are not all cones");
    return r;
  }
  put(r, "closed_intersection_property",
      "holds (every member is closed by representation)");
  const ConstantsOptions opt = make_opts(c, p);
  const ConstVal lam_n = lambda_N(c, opt);
  const auto duals = polar_cones(c);
  const ConstVal lam_d = lambda_D(duals, c.norm, opt);
  const ConstVal lam_g = lambda_G(duals, c.norm, opt);
  put(r, "lambda_N", str_cv(lam_n));
  put(r, "lambda_D", str_cv(lam_d));
  put(r, "lambda_G", str_cv(lam_g));
  put(r, "tolerance", agree_tolerance(c));
  if (!constants_agree(lam_n, lam_d, c)) {
    r.status = Status::Fail;
    put(r, "mismatch", "lambda_N and lambda_D disagree beyond tolerance");
    return r;
  }
  if (!constants_agree(lam_n, lam_g, c)) {
    r.status = Status::Fail;
    put(r, "mismatch", "lambda_N and lambda_G disagree beyond tolerance");
    return r;
  }
  r.status = Status::Pass;
  return r;
}

// ---------------------------------------------------------------------------
// Shared per-point data for the CHIP-flavoured results: the chip report, the
// normality constant of the tangent cones and the G-eta constant of the
// normal cones (two independent routes to the same number on cones).

struct PointChain {
  RatVec x;
  ChipReport rep;
  ConstVal lam_t;
  ConstVal lam_gn;
};

struct ChainData {
  std::vector<PointChain> pts;
  bool chip_all = true;
  std::optional<RatVec> chip_witness;
};

ChainData chain_data(const Collection& c, const VerifyParams& p) {
  ChainData d;
  const ConstantsOptions opt = make_opts(c, p);
  for (const auto& x : chip_points(c, p.points)) {
    PointChain pc;
    pc.x = x;
    pc.rep = chip_report_at(c, x, opt.samples, p.seed);
    if (!pc.rep.chip && !d.chip_witness) {
      d.chip_all = false;
      d.chip_witness = x;
    }
    if (pc.rep.chip) {
      pc.lam_t = pc.rep.normal_chip_constant;
      pc.lam_gn = lambda_G(normal_cones_at(c, x), c.norm, opt);
    }
    d.pts.push_back(std::move(pc));
  }
  return d;
}

void put_chain_point(TheoremReport& r, const PointChain& pc) {
  put(r, "point " + str_vec(pc.x),
      "lambda_T = " + str_cv(pc.lam_t) + ", lambda_GN = " + str_cv(pc.lam_gn));
}

// thm_5_1: under CHIP, the normal-CHIP verdict, the tangent normality
// constant and the normal-cone G-eta constant stand or fall together, and
// the two constants agree numerically.

TheoremReport check_thm_5_1(const Collection& c, const VerifyParams& p) {
  TheoremReport r;
  const ChainData d = chain_data(c, p);
  put(r, "points_tested", std::to_string(d.pts.size()));
  if (!d.chip_all) {
    r.status = Status::HypothesisNotMet;
    put(r, "reason", "CHIP fails at a tested point");
    put(r, "point", str_vec(*d.chip_witness));
    return r;
  }
  put(r, "tolerance", agree_tolerance(c));
  for (const auto& pc : d.pts) {
    put_chain_point(r, pc);
    const bool b1 = pc.rep.normal_chip == Verdict::True;
    const bool b2 = cv_pos(pc.lam_t);
    const bool b3 = cv_pos(pc.lam_gn);
    if (b1 != b2 || b2 != b3) {
      r.status = Status::Fail;
      put(r, "witness_point", str_vec(pc.x));
      put(r, "normal_chip", verdict_name(pc.rep.normal_chip));
      put(r, "mismatch", "the three statements disagree at this point");
      return r;
    }
    if (b2 && !constants_agree(pc.lam_t, pc.lam_gn, c)) {
      r.status = Status::Fail;
      put(r, "witness_point", str_vec(pc.x));
      put(r, "mismatch", "tangent and normal-cone constants disagree");
      return r;
    }
  }
  r.status = Status::Pass;
  return r;
}

// prop_5_1: strong CHIP at a point forces the weak normal CHIP there.

TheoremReport check_prop_5_1(const Collection& c, const VerifyParams& p) {
  TheoremReport r;
  const ConstantsOptions opt = make_opts(c, p);
  int strong_points = 0;
  for (const auto& x : chip_points(c, p.points)) {
    const ChipReport rep = chip_report_at(c, x, opt.samples, p.seed);
    if (!rep.strong_chip) continue;
    ++strong_points;
    if (rep.weak_normal_chip == Verdict::False) {
      r.status = Status::Fail;
      put(r, "witness_point", str_vec(x));
      for (const auto& [key, vec] : rep.witnesses)
        put(r, "witness_" + key, str_vec(vec));
      put(r, "mismatch", "strong CHIP holds but the weak normal CHIP fails");
      return r;
    }
    if (rep.weak_normal_chip == Verdict::Undecided) {
      r.status = Status::Unsupported;
      put(r, "reason",
          "the weak-normal functional bisection is unavailable in this mode");
      put(r, "point", str_vec(x));
      return r;
    }
  }
  if (strong_points == 0) {
    r.status = Status::HypothesisNotMet;
    put(r, "reason", "no tested point satisfies the strong CHIP");
    return r;
  }
  put(r, "strong_chip_points", std::to_string(strong_points));
  r.status = Status::Pass;
  return r;
}

// thm_5_2: linear regularity is uniform normality, with gamma = 1/lambda_UN.
// The sampled distance-ratio supremum must stay below the certified bound;
// with an infinite constant every ratio must vanish.

TheoremReport check_thm_5_2(const Collection& c, const VerifyParams& p) {
  TheoremReport r;
  const ConstantsOptions opt = make_opts(c, p);
  const UNVal un = lambda_UN(c, p.delta_grid, opt);
  const GammaEstimate g =
      gamma_estimate(c, std::max(p.samples, 4000), p.seed, opt.rho, false);
  put(r, "lambda_UN", str_cv(un.v));
  put(r, "gamma_lb", format_real(g.lb));
  put(r, "gamma_ub", g.ub_infinite ? "inf" : format_real(g.ub));

  if (un.flag == UNFlag::GridLowerBound) {
    // a finite delta grid cannot certify uniformity over every delta, so the
    // quantitative comparison is reported, not enforced
    put(r, "note",
        "delta-grid bound only; gamma comparison reported, not enforced");
    r.status = Status::Pass;
    return r;
  }
  if (un.v.infinite) {
    if (g.lb > 1e-9) {
      r.status = Status::Fail;
      put(r, "mismatch",
          "uniform normality holds at every eta but a distance ratio is "
          "positive");
      return r;
    }
    put(r, "note", "trivial: every sampled distance ratio is zero");
    r.status = Status::Pass;
    return r;
  }
  if (un.v.value == 0) {
    // no positive eta works, so no finite gamma may either; the sampled
    // ratios have to blow up
    if (g.lb < 100.0) {
      r.status = Status::Fail;
      put(r, "mismatch",
          "uniform normality fails but sampled distance ratios stay bounded");
      return r;
    }
    put(r, "note", "no uniform eta and the distance ratios diverge");
    r.status = Status::Pass;
    return r;
  }
  const double gstar = 1.0 / cv_dbl(un.v);
  put(r, "certified_gamma", format_real(gstar));
  if (g.lb > gstar * (1.0 + 1e-6) + 1e-9) {
    r.status = Status::Fail;
    put(r, "mismatch", "a sampled distance ratio exceeds 1/lambda_UN");
    return r;
  }
  r.status = Status::Pass;
  return r;
}

// thm_5_4: under CHIP the four statements (normal CHIP, tangent cones
// normal, normal cones with a G-eta, tangent cones linearly regular) agree,
// with matching constants.

TheoremReport check_thm_5_4(const Collection& c, const VerifyParams& p) {
  TheoremReport r;
  const ChainData d = chain_data(c, p);
  put(r, "points_tested", std::to_string(d.pts.size()));
  if (!d.chip_all) {
    r.status = Status::HypothesisNotMet;
    put(r, "reason", "CHIP fails at a tested point");
    put(r, "point", str_vec(*d.chip_witness));
    return r;
  }
  put(r, "tolerance", agree_tolerance(c));
  for (const auto& pc : d.pts) {
    put_chain_point(r, pc);
    const GammaEstimate gt = gamma_estimate(
        tangent_collection(c, pc.x), std::max(p.samples, 1000), p.seed);
    const bool b1 = pc.rep.normal_chip == Verdict::True;
    const bool b2 = cv_pos(pc.lam_t);
    const bool b3 = cv_pos(pc.lam_gn);
    const bool b4 = !gt.ub_infinite;
    if (b1 != b2 || b2 != b3 || b3 != b4) {
      r.status = Status::Fail;
      put(r, "witness_point", str_vec(pc.x));
      put(r, "statements",
          std::string(b1 ? "t" : "f") + (b2 ? "t" : "f") + (b3 ? "t" : "f") +
              (b4 ? "t" : "f"));
      put(r, "mismatch", "the four statements disagree at this point");
      return r;
    }
    if (b2 && !constants_agree(pc.lam_t, pc.lam_gn, c)) {
      r.status = Status::Fail;
      put(r, "witness_point", str_vec(pc.x));
      put(r, "mismatch", "tangent and normal-cone constants disagree");
      return r;
    }
    if (b2 && !pc.lam_t.infinite) {
      const double bound = 1.0 / cv_dbl(pc.lam_t);
      if (gt.lb > bound * (1.0 + 1e-6) + 1e-9) {
        r.status = Status::Fail;
        put(r, "witness_point", str_vec(pc.x));
        put(r, "mismatch",
            "a tangent distance ratio exceeds the certified bound");
        return r;
      }
    }
  }
  r.status = Status::Pass;
  return r;
}

// lemma_5_1_5_2: pointwise, the dual-ball inclusion
//   N(A,x) cap B*  inside  clco(U (N(A_i,x) cap gamma B*))
// holds exactly when CHIP holds at x and 1/gamma is within the G-eta
// constant of the member normal cones; probed on both sides of that
// threshold, plus the certified global gamma when one exists.

TheoremReport check_lemma_5_1_5_2(const Collection& c,
                                  const VerifyParams& p) {
  TheoremReport r;
  if (has_family(c)) {
    r.status = Status::HypothesisNotMet;
    put(r, "reason",
        "the interval family is indexed by N, which is not compact");
    return r;
  }
  if (sampled_mode(c) || !all_polyhedral(c)) {
    r.status = Status::Unsupported;
    put(r, "reason",
        "the exact polytope inclusions need a polyhedral unit ball and "
        "H-forms of every member");
    return r;
  }
  put(r, "index_set",
      "finite, compact under the discrete metric, trivially lsc");
  const ConstantsOptions opt = make_opts(c, p);
  const HPolyhedron inter = intersection_hform(c);
  const NormKind dk = dual_kind(c.norm.kind);
  const HPolyhedron unit_dual = ball_hpoly(dk, c.dim, Rat(1));

  const auto ii_at = [&](const RatVec& x, const Rat& gamma) {
    const GeneratedCone n_cap = normal_cone(ConvexSet{inter}, x);
    const HPolyhedron lhs =
        canonicalized(intersect(convert_to_h(v_of_cone(n_cap)), unit_dual));
    const HPolyhedron gball = ball_hpoly(dk, c.dim, gamma);
    std::vector<HPolyhedron> parts;
    parts.reserve(c.sets.size());
    for (const auto& s : c.sets)
      parts.push_back(canonicalized(
          intersect(convert_to_h(v_of_cone(normal_cone(s, x))), gball)));
    return inclusion(lhs, hull_of_union(parts, c.dim));
  };

  int checks = 0;
  const auto points = chip_points(c, p.points);
  for (const auto& x : points) {
    const ChipReport rep = chip_report_at(c, x, opt.samples, p.seed);
    const ConstVal lg = lambda_G(normal_cones_at(c, x), c.norm, opt);
    put(r, "lambda_G " + str_vec(x), str_cv(lg));

    std::vector<Rat> gammas;
    if (lg.infinite)
      gammas = {Rat(1, 1000), Rat(1)};
    else if (lg.value == 0)
      gammas = {Rat(1), Rat(1000)};
    else
      gammas = {Rat(5, 4) / lg.value, Rat(3, 4) / lg.value};
    for (const auto& gamma : gammas) {
      bool expected;
      if (lg.infinite) {
        expected = rep.chip;
      } else if (lg.value == 0) {
        expected = false;
      } else {
        const Rat inv = Rat(1) / gamma;
        if (abs_rat(inv - lg.value) <= 2 * c.norm.tol) continue;
        expected = rep.chip && inv < lg.value;
      }
      const InclusionResult got = ii_at(x, gamma);
      if (got.included != expected) {
        r.status = Status::Fail;
        put(r, "witness_point", str_vec(x));
        put(r, "witness_gamma", rat_to_string(gamma));
        put(r, "chip", rep.chip ? "true" : "false");
        if (got.witness) put(r, "witness_functional", str_vec(*got.witness));
        put(r, "mismatch",
            got.included ? "inclusion holds below the G-eta threshold"
                         : "inclusion fails although CHIP and the G-eta "
                           "constant admit this gamma");
        return r;
      }
      ++checks;
    }
  }
  put(r, "pointwise_equivalences", std::to_string(checks));

  const UNVal un = lambda_UN(c, p.delta_grid, opt);
  put(r, "lambda_UN", str_cv(un.v));
  if (un.flag != UNFlag::GridLowerBound && !un.v.infinite &&
      un.v.value > 0) {
    const Rat gamma_hi = Rat(101, 100) / un.v.value;
    put(r, "certified_gamma", rat_to_string(gamma_hi));
    for (const auto& x : points) {
      const InclusionResult got = ii_at(x, gamma_hi);
      if (got.included) continue;
      r.status = Status::Fail;
      put(r, "witness_point", str_vec(x));
      if (got.witness) put(r, "witness_functional", str_vec(*got.witness));
      put(r, "mismatch",
          "linear regularity holds with the certified gamma but the "
          "dual-ball inclusion fails");
      return r;
    }
  }
  r.status = Status::Pass;
  return r;
}

// thm_5_5: the four-way equivalence between linear regularity and the
// CHIP-plus-constant statements, for a compact index set. The interval
// family stands for I = N and misses the hypothesis.

TheoremReport check_thm_5_5(const Collection& c, const VerifyParams& p) {
  TheoremReport r;
  if (has_family(c)) {
    r.status = Status::HypothesisNotMet;
    put(r, "reason",
        "the interval family is indexed by N, which is not compact");
    const GammaEstimate g =
        gamma_estimate(c, std::max(p.samples, 2000), p.seed);
    put(r, "gamma_lb", format_real(g.lb));
    put(r, "gamma_ub", g.ub_infinite ? "inf" : format_real(g.ub));
    return r;
  }
  put(r, "index_set",
      "finite, compact under the discrete metric, trivially lsc");
  if (sampled_mode(c) || !all_polyhedral(c)) {
    r.status = Status::Unsupported;
    put(r, "reason",
        "the four-way equivalence needs exact chips and a certified uniform "
        "constant");
    return r;
  }
  const ConstantsOptions opt = make_opts(c, p);
  const UNVal un = lambda_UN(c, p.delta_grid, opt);
  const GammaEstimate g =
      gamma_estimate(c, std::max(p.samples, 2000), p.seed, opt.rho, false);
  put(r, "lambda_UN", str_cv(un.v));
  if (un.flag == UNFlag::GridLowerBound)
    put(r, "lambda_UN_caveat", "delta-grid lower bound");
  put(r, "gamma_lb", format_real(g.lb));

  if (!un.v.infinite && un.v.value > 0 && un.flag != UNFlag::GridLowerBound) {
    const double gstar = 1.0 / cv_dbl(un.v);
    if (g.lb > gstar * (1.0 + 1e-6) + 1e-9) {
      r.status = Status::Fail;
      put(r, "mismatch", "a sampled distance ratio exceeds 1/lambda_UN");
      return r;
    }
  }

  const ChainData d = chain_data(c, p);
  put(r, "points_tested", std::to_string(d.pts.size()));
  const bool b_i = cv_pos(un.v);
  bool b_ii = d.chip_all, b_iii = d.chip_all, b_iv = d.chip_all;
  for (const auto& pc : d.pts) {
    if (!pc.rep.chip) continue;
    put_chain_point(r, pc);
    b_ii = b_ii && cv_pos(pc.lam_t);
    b_iii = b_iii && cv_pos(pc.lam_gn);
    const GammaEstimate gt = gamma_estimate(
        tangent_collection(c, pc.x), std::max(p.samples, 1000), p.seed);
    b_iv = b_iv && !gt.ub_infinite;
  }
  put(r, "statements",
      std::string(b_i ? "t" : "f") + (b_ii ? "t" : "f") +
          (b_iii ? "t" : "f") + (b_iv ? "t" : "f"));
  if (b_i != b_ii || b_ii != b_iii || b_iii != b_iv) {
    r.status = Status::Fail;
    if (d.chip_witness) put(r, "witness_point", str_vec(*d.chip_witness));
    put(r, "mismatch", "the four statements disagree");
    return r;
  }
  r.status = Status::Pass;
  return r;
}

using CheckFn = TheoremReport (*)(const Collection&, const VerifyParams&);

const std::vector<std::pair<std::string, CheckFn>>& check_table() {
  static const std::vector<std::pair<std::string, CheckFn>> table = {
      {"prop_3_1", &check_prop_3_1},
      {"thm_4_1", &check_thm_4_1},
      {"thm_4_2", &check_thm_4_2},
      {"cor_4_2", &check_cor_4_2},
      {"thm_5_1", &check_thm_5_1},
      {"prop_5_1", &check_prop_5_1},
      {"thm_5_2", &check_thm_5_2},
      {"thm_5_4", &check_thm_5_4},
      {"lemma_5_1_5_2", &check_lemma_5_1_5_2},
      {"thm_5_5", &check_thm_5_5},
  };
  return table;
}

}  // namespace

const char* status_name(TheoremReport::Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::HypothesisNotMet:
      return "hypothesis_not_met";
    case Status::Unsupported:
      return "unsupported";
  }
  return "unsupported";
}

const std::vector<std::string>& known_theorem_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, fn] : check_table()) v.push_back(id);
    return v;
  }();
  return ids;
}

TheoremReport verify(const std::string& theorem_id, const Collection& c,
                     const VerifyParams& params) {
  validate_collection(c);
  for (const auto& [id, fn] : check_table()) {
    if (id != theorem_id) continue;
    TheoremReport r;
    try {
      r = fn(c, params);
    } catch (const UnsupportedError& e) {
      r = TheoremReport{};
      r.status = TheoremReport::Status::Unsupported;
      put(r, "reason", e.what());
    }
    r.theorem_id = theorem_id;
    return r;
  }
  throw DomainError("unknown theorem id: " + theorem_id);
}

Trajectory cyclic_projection(const Collection& c, const RatVec& x0,
                             int cycles) {
  validate_collection(c);
  if (static_cast<int>(x0.size()) != c.dim)
    throw DomainError("cyclic_projection: start point has the wrong dimension");
  if (cycles <= 0) throw DomainError("cyclic_projection: cycles must be positive");
  if (has_family(c))
    throw UnsupportedError(
        "cyclic_projection: the interval family stands for infinitely many "
        "sets; there is no finite cycle order");

  const HPolyhedron inter = intersection_hform(c);
  if (inter.known_empty || !is_feasible(inter))
    throw DomainError("cyclic_projection: empty intersection");
  const auto err_at = [&](const RatVec& x) {
    return project_point(ConvexSet{inter}, x, c.norm).dist_d;
  };

  Trajectory t;
  t.iterates.push_back(x0);
  t.errors.push_back(err_at(x0));
  RatVec x = x0;
  for (int cycle = 0; cycle < cycles; ++cycle) {
    for (const auto& s : c.sets) {
      const Projection pr = project_point(s, x, c.norm);
      // the euclidean ball from outside has no rational nearest point; snap
      // the float one onto the dyadic grid and continue exactly from there
      x = pr.point ? *pr.point : dyadic_vec(pr.point_d, 40);
      t.iterates.push_back(x);
    }
    const double prev = t.errors.back();
    const double e = err_at(x);
    if (e > prev + 1e-9 * (1.0 + prev))
      throw DomainError(
          "cyclic_projection: distance to the intersection increased in "
          "cycle " +
          std::to_string(cycle + 1));
    t.ratios.push_back(prev > 0 ? e / prev : 0.0);
    t.errors.push_back(e);
    if (e == 0.0) {
      t.converged_exactly = true;
      break;
    }
  }

  // asymptotic rate: regress log e_k on k over the last half of the cycles
  const std::size_t n = t.errors.size();
  std::size_t start = n / 2;
  if (start == 0) start = 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t k = start; k < n; ++k) {
    if (t.errors[k] <= 0) continue;
    const double kx = static_cast<double>(k), ky = std::log(t.errors[k]);
    sx += kx;
    sy += ky;
    sxx += kx * kx;
    sxy += kx * ky;
    ++m;
  }
  if (m >= 2) {
    const double denom = m * sxx - sx * sx;
    if (denom > 0) t.rate = std::exp((m * sxy - sx * sy) / denom);
  }
  return t;
}

}  // namespace polyreg
