#include "polyreg/lp.hpp"

#include <cassert>
#include <limits>

namespace polyreg {

namespace {

// Dense exact tableau. Columns: x+ (n), x- (n), slacks, artificials, in that
// order. The rhs is kept separately and stays >= 0 throughout; Bland's rule
// (smallest eligible index in, smallest basic variable out on ratio ties)
// rules out cycling, so no perturbation machinery is needed.
struct Tableau {
  int n = 0;           // original dimension
  int cols = 0;
  int art_begin = 0;   // first artificial column
  std::vector<RatVec> t;
  RatVec rhs;
  std::vector<int> basis;

  void pivot(int row, int col) {
    const Rat inv = Rat(1) / t[row][col];
    for (auto& v : t[row]) v *= inv;
    rhs[row] *= inv;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (static_cast<int>(i) == row) continue;
      const Rat f = t[i][col];
      if (f == 0) continue;
      for (int j = 0; j < cols; ++j) t[i][j] -= f * t[row][j];
      rhs[i] -= f * rhs[row];
    }
    basis[row] = col;
  }

  // Maximize the cost vector c over the current basis. Returns false when
  // unbounded. `allow` masks columns that may enter.
  bool run(const RatVec& c, const std::vector<bool>& allow) {
    for (;;) {
      // reduced costs: r_j = c_j - c_B . column_j
      int enter = -1;
      for (int j = 0; j < cols; ++j) {
        if (!allow[j]) continue;
        Rat r = c[j];
        for (std::size_t i = 0; i < t.size(); ++i) {
          const Rat cb = c[basis[i]];
          if (cb != 0 && t[i][j] != 0) r -= cb * t[i][j];
        }
        if (r > 0) {
          enter = j;
          break;  // Bland: first improving index
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rat best;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i][enter] <= 0) continue;
        const Rat ratio = rhs[i] / t[i][enter];
        if (leave < 0 || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          leave = static_cast<int>(i);
          best = ratio;
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  Rat objective(const RatVec& c) const {
    Rat v = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (c[basis[i]] != 0) v += c[basis[i]] * rhs[i];
    return v;
  }

  RatVec extract_point() const {
    RatVec x(static_cast<std::size_t>(n), Rat(0));
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (basis[i] < n)
        x[static_cast<std::size_t>(basis[i])] += rhs[i];
      else if (basis[i] < 2 * n)
        x[static_cast<std::size_t>(basis[i] - n)] -= rhs[i];
    }
    return x;
  }
};

// Phase 1. Returns nullopt when infeasible.
std::optional<Tableau> feasible_tableau(const HPolyhedron& p) {
  const int n = p.dim;
  const int m = static_cast<int>(p.rows.size());
  int n_slack = 0;
  for (const auto& r : p.rows)
    if (!r.eq) ++n_slack;

  Tableau tb;
  tb.n = n;
  tb.art_begin = 2 * n + n_slack;
  tb.cols = tb.art_begin;  // artificials appended below as needed
  tb.t.assign(static_cast<std::size_t>(m), {});
  tb.rhs.assign(static_cast<std::size_t>(m), Rat(0));
  tb.basis.assign(static_cast<std::size_t>(m), -1);

  int slack_at = 2 * n;
  std::vector<int> needs_art;
  for (int i = 0; i < m; ++i) {
    const HRow& row = p.rows[static_cast<std::size_t>(i)];
    assert(static_cast<int>(row.a.size()) == n);
    RatVec line(static_cast<std::size_t>(tb.art_begin), Rat(0));
    const bool flip = row.b < 0;
    const Rat sgn = flip ? Rat(-1) : Rat(1);
    for (int j = 0; j < n; ++j) {
      line[static_cast<std::size_t>(j)] = sgn * row.a[static_cast<std::size_t>(j)];
      line[static_cast<std::size_t>(n + j)] = -sgn * row.a[static_cast<std::size_t>(j)];
    }
    if (!row.eq) {
      line[static_cast<std::size_t>(slack_at)] = sgn;
      if (!flip) tb.basis[static_cast<std::size_t>(i)] = slack_at;
      ++slack_at;
    }
    tb.rhs[static_cast<std::size_t>(i)] = sgn * row.b;
    tb.t[static_cast<std::size_t>(i)] = std::move(line);
    if (tb.basis[static_cast<std::size_t>(i)] < 0) needs_art.push_back(i);
  }

  tb.cols = tb.art_begin + static_cast<int>(needs_art.size());
  for (auto& line : tb.t) line.resize(static_cast<std::size_t>(tb.cols), Rat(0));
  for (std::size_t k = 0; k < needs_art.size(); ++k) {
    const int i = needs_art[k];
    const int col = tb.art_begin + static_cast<int>(k);
    tb.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] = 1;
    tb.basis[static_cast<std::size_t>(i)] = col;
  }

  if (!needs_art.empty()) {
    RatVec c(static_cast<std::size_t>(tb.cols), Rat(0));
    for (int j = tb.art_begin; j < tb.cols; ++j) c[static_cast<std::size_t>(j)] = -1;
    std::vector<bool> allow(static_cast<std::size_t>(tb.cols), true);
    const bool ok = tb.run(c, allow);
    assert(ok);  // phase-1 objective is bounded above by 0
    (void)ok;
    if (tb.objective(c) != 0) return std::nullopt;
    // Drive residual zero-level artificials out of the basis; an all-zero
    // row (outside the artificial block) was a dependent constraint.
    for (std::size_t i = 0; i < tb.t.size();) {
      if (tb.basis[i] < tb.art_begin) {
        ++i;
        continue;
      }
      int col = -1;
      for (int j = 0; j < tb.art_begin; ++j)
        if (tb.t[i][static_cast<std::size_t>(j)] != 0) {
          col = j;
          break;
        }
      if (col >= 0) {
        tb.pivot(static_cast<int>(i), col);
        ++i;
      } else {
        assert(tb.rhs[i] == 0);
        tb.t.erase(tb.t.begin() + static_cast<long>(i));
        tb.rhs.erase(tb.rhs.begin() + static_cast<long>(i));
        tb.basis.erase(tb.basis.begin() + static_cast<long>(i));
      }
    }
  }
  return tb;
}

}  // namespace

LPOutcome solve_lp(const RatVec& objective, Sense sense, const HPolyhedron& p) {
  assert(static_cast<int>(objective.size()) == p.dim);
  auto tb = feasible_tableau(p);
  if (!tb) return {LPStatus::Infeasible, Rat(0), {}};

  RatVec c(static_cast<std::size_t>(tb->cols), Rat(0));
  const Rat sgn = sense == Sense::Max ? Rat(1) : Rat(-1);
  for (int j = 0; j < tb->n; ++j) {
    c[static_cast<std::size_t>(j)] = sgn * objective[static_cast<std::size_t>(j)];
    c[static_cast<std::size_t>(tb->n + j)] = -sgn * objective[static_cast<std::size_t>(j)];
  }
  std::vector<bool> allow(static_cast<std::size_t>(tb->cols), true);
  for (int j = tb->art_begin; j < tb->cols; ++j) allow[static_cast<std::size_t>(j)] = false;
  if (!tb->run(c, allow)) return {LPStatus::Unbounded, Rat(0), {}};

  LPOutcome out;
  out.status = LPStatus::Optimal;
  out.point = tb->extract_point();
  out.value = dot(objective, out.point);
  return out;
}

LPOutcome find_point(const HPolyhedron& p) {
  auto tb = feasible_tableau(p);
  if (!tb) return {LPStatus::Infeasible, Rat(0), {}};
  LPOutcome out;
  out.status = LPStatus::Optimal;
  out.point = tb->extract_point();
  out.value = 0;
  return out;
}

bool is_feasible(const HPolyhedron& p) {
  return find_point(p).status == LPStatus::Optimal;
}

}  // namespace polyreg
