#include "polyreg/reports.hpp"

#include <sstream>

namespace polyreg {

namespace {

// RFC 4180: quote a cell only when it needs it, doubling inner quotes.
std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_cell(cells[i]);
  }
  out += '\n';
  return out;
}

std::string join_vec(const RatVec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += rat_to_string(v[i]);
  }
  return out;
}

std::string render_const(const ConstVal& v, bool exact) {
  if (v.infinite) return "inf";
  return exact ? rat_to_string(v.value) : format_real(rat_to_double(v.value));
}

std::string bool_name(bool b) { return b ? "true" : "false"; }

std::string mode_name(const NormContext& nc) {
  return nc.mode == EvalMode::Exact ? "exact" : "float";
}

}  // namespace

std::string constants_csv(const std::string& instance, const Collection& c,
                          const ConstantsReport& r) {
  const bool exact = c.norm.mode == EvalMode::Exact;
  std::string out =
      "instance,norm_kind,mode,lambda_N,lambda_UN,lambda_D,lambda_G,"
      "gamma_lb,gamma_ub,bisect_tol,samples,seed\n";
  out += csv_row({
      instance,
      norm_kind_name(c.norm.kind),
      mode_name(c.norm),
      render_const(r.lambda_N, exact),
      r.lambda_UN ? render_const(r.lambda_UN->v, exact) : "n/a",
      r.lambda_D ? render_const(*r.lambda_D, exact) : "n/a",
      r.lambda_G ? render_const(*r.lambda_G, exact) : "n/a",
      format_real(r.gamma_lb),
      r.gamma_ub_infinite ? "inf" : format_real(r.gamma_ub),
      rat_to_string(r.bisect_tol),
      std::to_string(r.samples),
      std::to_string(r.seed),
  });
  return out;
}

std::string chip_csv(const std::string& instance, const Collection& c,
                     const std::vector<ChipReport>& reports) {
  const bool exact = c.norm.mode == EvalMode::Exact;
  std::string out =
      "instance,point,chip,chip_closure_variant,strong_chip,normal_chip,"
      "normal_chip_constant,weak_normal_chip,witness\n";
  for (const auto& r : reports) {
    std::string witness;
    if (const auto it = r.witnesses.find("chip"); it != r.witnesses.end())
      witness = join_vec(it->second);
    else if (!r.witnesses.empty())
      witness = join_vec(r.witnesses.begin()->second);
    out += csv_row({
        instance,
        join_vec(r.point),
        bool_name(r.chip),
        bool_name(r.chip_closure_variant),
        bool_name(r.strong_chip),
        verdict_name(r.normal_chip),
        r.normal_chip == Verdict::Undecided
            ? "n/a"
            : render_const(r.normal_chip_constant, exact),
        verdict_name(r.weak_normal_chip),
        witness,
    });
  }
  return out;
}

std::string trajectory_csv(const Trajectory& t) {
  std::string out = "cycle,error,ratio\n";
  for (std::size_t k = 0; k < t.errors.size(); ++k)
    out += csv_row({
        std::to_string(k),
        format_real(t.errors[k]),
        k == 0 ? "n/a" : format_real(t.ratios[k - 1]),
    });
  return out;
}

namespace {

std::string md_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '|') out += '\\';
    out += ch;
  }
  return out;
}

std::string caps(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::toupper(ch));
  return s;
}

}  // namespace

std::string verify_markdown(const std::string& instance,
                            const std::vector<TheoremReport>& reports) {
  std::ostringstream out;
  out << "# " << instance << " verification\n";
  for (const auto& r : reports) {
    out << "\n## " << r.theorem_id << ": " << caps(status_name(r.status))
        << "\n";
    if (r.details.empty()) continue;
    out << "\n| detail | value |\n| --- | --- |\n";
    for (const auto& [key, value] : r.details)
      out << "| " << md_escape(key) << " | " << md_escape(value) << " |\n";
  }
  return out.str();
}

std::string inverse_sum_rows_csv(const HPolyhedron& p) {
  std::string out = "row,a,b,eq\n";
  for (std::size_t k = 0; k < p.rows.size(); ++k)
    out += csv_row({
        std::to_string(k),
        join_vec(p.rows[k].a),
        rat_to_string(p.rows[k].b),
        bool_name(p.rows[k].eq),
    });
  return out;
}

std::string inverse_sum_summary_csv(const std::string& instance, int rows,
                                    int points_checked, int agreements,
                                    uint64_t seed) {
  std::string out = "instance,pair,rows,points_checked,agreements,seed\n";
  out += csv_row({
      instance,
      "0#1",
      std::to_string(rows),
      std::to_string(points_checked),
      std::to_string(agreements),
      std::to_string(seed),
  });
  return out;
}

}  // namespace polyreg
