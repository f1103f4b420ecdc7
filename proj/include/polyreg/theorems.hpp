#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "polyreg/chip.hpp"
#include "polyreg/constants.hpp"
#include "polyreg/convex_set.hpp"

namespace polyreg {

/// Outcome of checking one named result against one instance. Hypotheses are
/// probed first: an instance that does not satisfy them reports
/// HypothesisNotMet rather than Fail, and Fail always comes with enough
/// detail entries to reproduce the violation (a point, functional, or eta).
struct TheoremReport {
  std::string theorem_id;
  enum class Status { Pass, Fail, HypothesisNotMet, Unsupported } status =
      Status::Unsupported;
  // ordered label/value pairs; rendered as a markdown table by the CLI
  std::vector<std::pair<std::string, std::string>> details;
};

const char* status_name(TheoremReport::Status s);

struct VerifyParams {
  int samples = 12;  // functionals / sampled sub-checks per verification
  uint64_t seed = 1;
  std::vector<RatVec> points;                       // extra report points
  std::vector<Rat> delta_grid = {Rat(1, 2), Rat(1), Rat(2)};
};

/// Known ids: prop_3_1, thm_4_1, thm_4_2, cor_4_2, thm_5_1, prop_5_1,
/// thm_5_2, thm_5_4, lemma_5_1_5_2, thm_5_5. Unknown ids throw DomainError.
TheoremReport verify(const std::string& theorem_id, const Collection& c,
                     const VerifyParams& params = {});

const std::vector<std::string>& known_theorem_ids();

struct Trajectory {
  std::vector<RatVec> iterates;  // x0, then the point after each projection
  std::vector<double> errors;    // distance to the intersection per cycle
  std::vector<double> ratios;    // consecutive error quotients
  double rate = 0.0;             // least-squares slope over the last half
  bool converged_exactly = false;
};

/// Projects x0 through the sets in index order for the given number of full
/// cycles, recording the distance to the intersection after each cycle.
/// Stops early on exact convergence. The error sequence must be
/// nonincreasing (checked, with a tiny float allowance); the fitted rate
/// uses only the last half of the cycles.
Trajectory cyclic_projection(const Collection& c, const RatVec& x0,
                             int cycles);

}  // namespace polyreg
