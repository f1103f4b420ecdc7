#pragma once

#include <string>
#include <vector>

#include "polyreg/chip.hpp"
#include "polyreg/constants.hpp"
#include "polyreg/convex_set.hpp"
#include "polyreg/theorems.hpp"

/// Render layer for the command-line tool. Every function returns the full
/// text of one artifact, newline-terminated, built only from its arguments,
/// so identical inputs give byte-identical files.
///
/// Number rendering: rationals print as "p/q" (or a bare integer) in exact
/// mode and as shortest-round-trip floats in float mode; the gamma columns
/// are float estimates in either mode. Unavailable values print as "n/a",
/// infinite ones as "inf".
namespace polyreg {

/// CSV for the `constants` command: a pinned header plus one row.
std::string constants_csv(const std::string& instance, const Collection& c,
                          const ConstantsReport& r);

/// CSV for the `chip` command: one row per examined point. The witness
/// column carries the separating functional (or comparable certificate)
/// recorded for the first failed property, empty when every property holds.
std::string chip_csv(const std::string& instance, const Collection& c,
                     const std::vector<ChipReport>& reports);

/// CSV for the `cyclic` command: one row per cycle. Cycle 0 is the starting
/// point, so its ratio column is "n/a".
std::string trajectory_csv(const Trajectory& t);

/// Markdown for the `verify` command: a heading per theorem with the
/// verdict in caps, followed by that theorem's detail table.
std::string verify_markdown(const std::string& instance,
                            const std::vector<TheoremReport>& reports);

/// CSVs for the `inverse-sum` command, which combines the first two sets.
/// One file lists the H-form rows of the result, the other summarizes the
/// sampled cross-check of the two membership routes.
std::string inverse_sum_rows_csv(const HPolyhedron& p);
std::string inverse_sum_summary_csv(const std::string& instance, int rows,
                                    int points_checked, int agreements,
                                    uint64_t seed);

}  // namespace polyreg
