#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "polyreg/chip.hpp"
#include "polyreg/constants.hpp"
#include "polyreg/instance.hpp"
#include "polyreg/inverse_sum.hpp"
#include "polyreg/reports.hpp"
#include "polyreg/sampling.hpp"
#include "polyreg/theorems.hpp"

namespace {

using namespace polyreg;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

RatVec parse_vec_arg(const std::string& csv, const char* flag) {
  RatVec out;
  for (const std::string& tok : split_csv(csv)) {
    try {
      out.push_back(parse_rat(tok));
    } catch (const ParseError& e) {
      throw ParseError(std::string(flag) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Rat> parse_rat_list(const std::string& csv, const char* flag) {
  RatVec v = parse_vec_arg(csv, flag);
  return {v.begin(), v.end()};
}

struct Flags {
  std::string file;
  std::string tol;
  std::string delta_grid;
  std::string rho;
  std::string theorems;
  std::string point;
  std::string start;
  std::string out;
  int samples = 0;
  bool samples_set = false;
  uint64_t seed = 0;
  bool seed_set = false;
  int cycles = 50;
  bool parallel = false;
};

// Reports always go to stdout; --out additionally persists them, for
// byte-level comparison across runs.
void emit(const Flags& f, const char* filename, const std::string& text) {
  std::cout << text;
  if (f.out.empty()) return;
  std::filesystem::create_directories(f.out);
  std::ofstream os(std::filesystem::path(f.out) / filename, std::ios::binary);
  if (!os) throw DomainError("--out: cannot write into " + f.out);
  os << text;
}

int cmd_constants(const Flags& f) {
  const Instance inst = parse_instance(f.file);
  ConstantsOptions opt;
  opt.samples = f.samples_set ? f.samples : inst.params.samples;
  opt.seed = f.seed_set ? f.seed : inst.params.seed;
  opt.parallel = f.parallel;
  if (!f.tol.empty()) opt.tol = parse_tolerance(f.tol);
  if (!f.delta_grid.empty())
    opt.delta_grid = parse_rat_list(f.delta_grid, "--delta-grid");
  if (!f.rho.empty()) opt.rho = parse_rat(f.rho);
  const ConstantsReport r = constants_report(inst.collection, opt);
  emit(f, "constants.csv", constants_csv(inst.name, inst.collection, r));
  return 0;
}

int cmd_chip(const Flags& f) {
  const Instance inst = parse_instance(f.file);
  std::vector<RatVec> user;
  if (!f.point.empty()) user.push_back(parse_vec_arg(f.point, "--point"));
  for (const RatVec& p : inst.params.points_of_interest)
    if (std::find(user.begin(), user.end(), p) == user.end())
      user.push_back(p);
  const int samples = f.samples_set ? f.samples : inst.params.samples;
  const uint64_t seed = f.seed_set ? f.seed : inst.params.seed;
  std::vector<ChipReport> reports;
  for (const RatVec& x : chip_points(inst.collection, user))
    reports.push_back(chip_report_at(inst.collection, x, samples, seed));
  emit(f, "chip.csv", chip_csv(inst.name, inst.collection, reports));
  return 0;
}

int cmd_verify(const Flags& f) {
  const Instance inst = parse_instance(f.file);
  VerifyParams vp;
  vp.points = inst.params.points_of_interest;
  vp.seed = f.seed_set ? f.seed : inst.params.seed;
  if (f.samples_set) vp.samples = f.samples;
  if (!f.delta_grid.empty())
    vp.delta_grid = parse_rat_list(f.delta_grid, "--delta-grid");
  std::vector<std::string> ids = f.theorems.empty()
                                     ? known_theorem_ids()
                                     : split_csv(f.theorems);
  std::vector<TheoremReport> reports;
  for (const std::string& id : ids)
    reports.push_back(verify(id, inst.collection, vp));
  emit(f, "verify.md", verify_markdown(inst.name, reports));
  return 0;
}

int cmd_cyclic(const Flags& f) {
  const Instance inst = parse_instance(f.file);
  RatVec x0;
  if (!f.start.empty())
    x0 = parse_vec_arg(f.start, "--start");
  else if (!inst.params.points_of_interest.empty())
    x0 = inst.params.points_of_interest.front();
  else
    throw DomainError(
        "cyclic: no starting point (--start or points_of_interest)");
  const Trajectory t = cyclic_projection(inst.collection, x0, f.cycles);
  emit(f, "trajectory.csv", trajectory_csv(t));
  return 0;
}

int cmd_inverse_sum(const Flags& f) {
  const Instance inst = parse_instance(f.file);
  if (inst.collection.sets.size() < 2)
    throw DomainError("inverse-sum: needs at least two sets");
  const ConvexSet& a = inst.collection.sets[0];
  const ConvexSet& b = inst.collection.sets[1];
  const HPolyhedron combo = inverse_sum(a, b);

  // Cross-check the closed-form result against the direct membership test
  // on sampled dyadic points; the two routes are independent by design.
  const int n = f.samples_set ? f.samples : inst.params.samples;
  const uint64_t seed = f.seed_set ? f.seed : inst.params.seed;
  const auto verdicts = map_indices<char>(
      static_cast<std::size_t>(n), f.parallel, [&](std::size_t i) {
        SampleRng g = rng_at(seed, i);
        const RatVec x = sample_in_box(g, inst.collection.dim, Rat(2));
        return static_cast<char>(hpoly_contains(combo, x) ==
                                 inverse_sum_membership(a, b, x));
      });
  int agree = 0;
  for (char v : verdicts) agree += v;

  emit(f, "inverse_sum.csv", inverse_sum_rows_csv(combo));
  emit(f, "inverse_sum_summary.csv",
       inverse_sum_summary_csv(inst.name, static_cast<int>(combo.rows.size()),
                               n, agree, seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyhedral regularity toolkit"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&f](CLI::App* sub) {
    sub->add_option("instance", f.file, "instance JSON file")->required();
    sub->add_option("--tol", f.tol, "bisection tolerance (rational or 1e-k)");
    sub->add_option("--samples", f.samples, "sample count override");
    sub->add_option("--seed", f.seed, "RNG seed override");
    sub->add_flag("--parallel", f.parallel, "parallel sampling loops");
    sub->add_option("--out", f.out, "directory to write report files into");
    return sub;
  };

  CLI::App* c_const = add_common(
      app.add_subcommand("constants", "regularity constants of the sets"));
  c_const->add_option("--delta-grid", f.delta_grid,
                      "comma-separated deltas for the uniform variant");
  c_const->add_option("--rho", f.rho, "radius restriction for gamma sampling");

  CLI::App* c_chip = add_common(
      app.add_subcommand("chip", "intersection-property report per point"));
  c_chip->add_option("--point", f.point, "extra point to examine (csv)");

  CLI::App* c_verify = add_common(
      app.add_subcommand("verify", "check the named statements"));
  c_verify->add_option("--theorems", f.theorems, "comma-separated ids");
  c_verify->add_option("--delta-grid", f.delta_grid,
                       "comma-separated deltas for the uniform variant");

  CLI::App* c_cyclic = add_common(
      app.add_subcommand("cyclic", "cyclic projection trajectory"));
  c_cyclic->add_option("--start", f.start, "starting point (csv)");
  c_cyclic->add_option("--cycles", f.cycles, "number of full cycles");

  add_common(app.add_subcommand(
      "inverse-sum", "combination of the first two sets, cross-checked"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 1;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  f.samples_set = sub->count("--samples") > 0;
  f.seed_set = sub->count("--seed") > 0;

  try {
    if (command == "constants") return cmd_constants(f);
    if (command == "chip") return cmd_chip(f);
    if (command == "verify") return cmd_verify(f);
    if (command == "cyclic") return cmd_cyclic(f);
    return cmd_inverse_sum(f);
  } catch (const EmptyIntersectionError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return 3;
  } catch (const ParseError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
}
