#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polyreg/convex_set.hpp"
#include "polyreg/inverse_sum.hpp"

namespace polyreg {

/// A computed regularity constant: a finite rational or the +infinity
/// sentinel (the defining inclusion held all the way up the escalating cap).
struct ConstVal {
  bool infinite = false;
  Rat value{0};
};

inline ConstVal const_finite(Rat v) { return ConstVal{false, std::move(v)}; }
inline ConstVal const_infinite() { return ConstVal{true, Rat(0)}; }

/// How a uniform-normality value was obtained. Cone collections inherit the
/// plain normality constant (the two properties coincide on cones); general
/// collections only get a minimum over a user-supplied delta grid.
enum class UNFlag { Value, ConeEqual, GridLowerBound };

struct UNVal {
  UNFlag flag = UNFlag::Value;
  ConstVal v;
};

struct InclusionCheck {
  bool holds = false;
  std::optional<RatVec> witness;  // point in the left side, outside the right
  bool sampled = false;           // verdict from a sampled sweep, not exact
};

struct ConstantsOptions {
  Rat tol = Rat(1, 1000000);  // bisection stops when the bracket is this wide
  int samples = 10000;
  uint64_t seed = 1;
  bool parallel = false;
  std::vector<Rat> delta_grid;  // uniform-normality grid for non-cones
  std::optional<Rat> rho;       // radius restriction for gamma sampling
};

struct DecompTerm {
  std::size_t set_index = 0;
  RatVec vec;
};

/// A splitting of a functional across the dual cones, x* = sum of terms,
/// minimizing the sum of term norms.
struct Decomposition {
  std::vector<DecompTerm> terms;
  Rat norm_sum{0};          // exact modes only
  double norm_sum_d = 0.0;  // always set
  bool exact = false;
};

struct GammaEstimate {
  double lb = 0.0;
  double ub = 0.0;
  bool ub_infinite = false;
};

struct WeakNormalEta {
  enum class Kind {
    Finite,         // largest verified eta
    Infinite,       // inclusion held for every tested eta up to the cap
    Unconstrained,  // xstar = 0: the right side is the whole space
    None            // even tiny eta failed
  } kind = Kind::None;
  Rat value{0};
};

struct ConstantsReport {
  ConstVal lambda_N;
  std::optional<UNVal> lambda_UN;      // absent when not computable
  std::optional<ConstVal> lambda_D;    // cone collections only
  std::optional<ConstVal> lambda_G;    // cone collections only
  double gamma_lb = 0.0;
  double gamma_ub = 0.0;
  bool gamma_ub_infinite = false;
  bool sampled = false;  // L2 mode: outer suprema are one-sided sample bounds
  Rat bisect_tol{0};
  int samples = 0;
  uint64_t seed = 0;
};

/// True when every member set is a convex cone (homogeneous H-form).
bool is_cone_collection(const Collection& c);

/// Polars K_i° of a cone collection, as generated cones in the dual space.
std::vector<GeneratedCone> polar_cones(const Collection& c);

/// Minkowski-inflate an H-polyhedron by r times the unit ball of `kind`.
HPolyhedron inflate_hform(const HPolyhedron& h, NormKind kind, const Rat& r);

/// The inflated-intersection inclusion at level (eta, delta):
/// intersection of (A_i + eta*delta*B) inside (intersection of A_i) + delta*B.
InclusionCheck normality_inclusion_holds(const Collection& c, const Rat& eta,
                                         const Rat& delta = Rat(1),
                                         const ConstantsOptions& opt = {});

/// Dual form of the same inclusion at level eta_hat, stated with inverse
/// sums of polars: B* # hull(union of A_i°)  inside  hull(union of
/// A_i° # (1/eta_hat) B*). Exact polyhedral norms only.
bool dual_normality_inclusion_holds(const Collection& c, const Rat& eta_hat);

/// Relaxed primal form: intersection of (A_i + eta_hat*B) inside the closure
/// of (intersection + B). Exact polyhedral norms only.
InclusionCheck relaxed_normality_inclusion(const Collection& c,
                                           const Rat& eta_hat);

ConstVal lambda_N(const Collection& c, const ConstantsOptions& opt = {});

UNVal lambda_UN(const Collection& c, const std::vector<Rat>& delta_grid,
                const ConstantsOptions& opt = {});

ConstVal lambda_D(const std::vector<GeneratedCone>& dual_cones,
                  const NormContext& norm, const ConstantsOptions& opt = {});

Decomposition min_decomposition(const std::vector<GeneratedCone>& dual_cones,
                                const RatVec& xstar, const NormContext& norm);

ConstVal lambda_G(const std::vector<GeneratedCone>& dual_cones,
                  const NormContext& norm, const ConstantsOptions& opt = {});

GammaEstimate gamma_estimate(const Collection& c, int samples, uint64_t seed,
                             const std::optional<Rat>& rho = {},
                             bool parallel = false);

WeakNormalEta weak_normal_eta(const Collection& c, const RatVec& xstar,
                              const ConstantsOptions& opt = {});

ConstantsReport constants_report(const Collection& c,
                                 const ConstantsOptions& opt = {});

}  // namespace polyreg
