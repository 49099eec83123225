// Self-contained dense two-phase simplex.
//
// Small problems only (tens to a few hundred variables): everything is kept
// in one dense tableau. Bland's rule for both entering and leaving variable
// makes the pivot sequence deterministic and cycle-free, so repeated solves
// of the same program return the same vertex.
#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>

#include "infoprice/common.hpp"

namespace infoprice {

enum class RowSense { Le, Eq, Ge };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LinearProgram {
  Vec objective;  // maximize objective . x
  Mat rows;
  Vec rhs;
  std::vector<RowSense> sense;
  Vec lower, upper;  // per-variable bounds; +-inf allowed

  explicit LinearProgram(int nvars = 0)
      : objective(nvars, 0.0), lower(nvars, 0.0), upper(nvars, kInf) {}

  int num_vars() const { return static_cast<int>(objective.size()); }

  void add_row(Vec coeffs, RowSense s, double b) {
    assert(static_cast<int>(coeffs.size()) == num_vars());
    rows.push_back(std::move(coeffs));
    sense.push_back(s);
    rhs.push_back(b);
  }

  void set_free(int j) { lower[j] = -kInf; upper[j] = kInf; }
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Vec x;
};

namespace detail {

class SimplexTableau {
 public:
  SimplexTableau(const Mat& a, const Vec& b, const std::vector<RowSense>& sense,
                 const Vec& c)
      : m_(static_cast<int>(a.size())), nstruct_(static_cast<int>(c.size())) {
    // Normalizing rhs >= 0 may flip Le <-> Ge; compute effective senses first.
    std::vector<RowSense> fs(sense);
    for (int i = 0; i < m_; ++i)
      if (b[i] < 0 && fs[i] != RowSense::Eq)
        fs[i] = (fs[i] == RowSense::Le) ? RowSense::Ge : RowSense::Le;

    // Column layout: [structural | slack/surplus | artificial | rhs].
    int nslack = 0, nart = 0;
    for (int i = 0; i < m_; ++i) {
      if (fs[i] != RowSense::Eq) ++nslack;
      if (fs[i] != RowSense::Le) ++nart;
    }
    n_ = nstruct_ + nslack + nart;
    art_begin_ = nstruct_ + nslack;
    tab_.assign(m_ + 2, Vec(n_ + 1, 0.0));
    basis_.assign(m_, -1);

    int slack = nstruct_, art = art_begin_;
    for (int i = 0; i < m_; ++i) {
      double scale = 1.0;
      for (int j = 0; j < nstruct_; ++j) scale = std::max(scale, std::fabs(a[i][j]));
      scale = std::max(scale, std::fabs(b[i]));
      double inv = (b[i] < 0 ? -1.0 : 1.0) / scale;
      for (int j = 0; j < nstruct_; ++j) tab_[i][j] = inv * a[i][j];
      tab_[i][n_] = inv * b[i];
      if (fs[i] == RowSense::Le) {
        tab_[i][slack] = 1.0;
        basis_[i] = slack++;
      } else if (fs[i] == RowSense::Ge) {
        tab_[i][slack++] = -1.0;
        tab_[i][art] = 1.0;
        basis_[i] = art++;
      } else {
        tab_[i][art] = 1.0;
        basis_[i] = art++;
      }
    }
    // Objective row (phase 2): store -c so that a nonnegative row means optimal.
    obj_scale_ = 1.0;
    for (int j = 0; j < nstruct_; ++j) obj_scale_ = std::max(obj_scale_, std::fabs(c[j]));
    for (int j = 0; j < nstruct_; ++j) tab_[m_][j] = -c[j] / obj_scale_;
    // Phase-1 row: minimize sum of artificials -> row = -(sum of artificial rows).
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= art_begin_) {
        for (int j = 0; j <= n_; ++j) tab_[m_ + 1][j] -= tab_[i][j];
        tab_[m_ + 1][basis_[i]] = 0.0;
      }
    }
  }

  LpStatus run() {
    if (art_begin_ < n_) {
      if (!iterate(m_ + 1)) return LpStatus::Infeasible;
      if (tab_[m_ + 1][n_] < -1e-7) return LpStatus::Infeasible;
      drive_out_artificials();
    }
    if (!iterate(m_)) return LpStatus::Unbounded;
    return LpStatus::Optimal;
  }

  double objective_value() const { return tab_[m_][n_] * obj_scale_; }

  Vec structural_solution() const {
    Vec x(nstruct_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < nstruct_) x[basis_[i]] = tab_[i][n_];
    return x;
  }

 private:
  static constexpr double kPivEps = 1e-11;
  static constexpr double kCostEps = 1e-10;

  void pivot(int r, int s) {
    double inv = 1.0 / tab_[r][s];
    for (int j = 0; j <= n_; ++j) tab_[r][j] *= inv;
    tab_[r][s] = 1.0;
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double f = tab_[i][s];
      if (std::fabs(f) < 1e-300) continue;
      for (int j = 0; j <= n_; ++j) tab_[i][j] -= f * tab_[r][j];
      tab_[i][s] = 0.0;
    }
    basis_[r] = s;
  }

  // Bland: entering = lowest-index column with negative reduced cost,
  // leaving = exact min ratio, ties by lowest basis variable index.
  // Artificial columns never re-enter once they leave the basis.
  bool iterate(int objrow) {
    const long long cap = 2000LL * (m_ + n_ + 10);
    for (long long it = 0; it < cap; ++it) {
      int s = -1;
      for (int j = 0; j < art_begin_; ++j)
        if (tab_[objrow][j] < -kCostEps && !is_basic(j)) { s = j; break; }
      if (s < 0) return true;
      int r = -1;
      double best = kInf;
      for (int i = 0; i < m_; ++i) {
        if (tab_[i][s] > kPivEps) {
          double ratio = tab_[i][n_] / tab_[i][s];
          if (r < 0 || ratio < best ||
              (ratio == best && basis_[i] < basis_[r])) {
            best = ratio;
            r = i;
          }
        }
      }
      if (r < 0) return false;  // unbounded direction
      pivot(r, s);
    }
    throw std::runtime_error("simplex: iteration limit reached");
  }

  bool is_basic(int col) const {
    for (int i = 0; i < m_; ++i)
      if (basis_[i] == col) return true;
    return false;
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < art_begin_) continue;
      int s = -1;
      for (int j = 0; j < art_begin_; ++j)
        if (std::fabs(tab_[i][j]) > 1e-8) { s = j; break; }
      if (s >= 0) pivot(i, s);
      // else: redundant row, artificial stays basic at zero and is barred
      // from re-entering, which keeps it harmless.
    }
  }

  int m_, nstruct_, n_, art_begin_;
  double obj_scale_;
  Mat tab_;
  std::vector<int> basis_;
};

}  // namespace detail

// Solves max objective . x subject to the rows and per-variable bounds.
inline LpSolution lp_solve(const LinearProgram& lp) {
  const int n = lp.num_vars();
  for (int i = 0; i < static_cast<int>(lp.rows.size()); ++i)
    if (static_cast<int>(lp.rows[i].size()) != n)
      throw std::invalid_argument("lp_solve: row dimension mismatch");

  // Substitute every variable by nonnegative ones:
  //   finite lower  -> x = lo + y
  //   upper only    -> x = hi - y
  //   free          -> x = y+ - y-
  struct VarMap { int col; double shift; double sign; int neg_col; };
  std::vector<VarMap> vmap(n);
  int cols = 0;
  for (int j = 0; j < n; ++j) {
    double lo = lp.lower[j], hi = lp.upper[j];
    if (lo == -kInf && hi == kInf) {
      vmap[j] = {cols, 0.0, 1.0, cols + 1};
      cols += 2;
    } else if (lo == -kInf) {
      vmap[j] = {cols, hi, -1.0, -1};
      cols += 1;
    } else {
      vmap[j] = {cols, lo, 1.0, -1};
      cols += 1;
    }
  }

  Mat a;
  Vec b;
  std::vector<RowSense> sense;
  auto expand_row = [&](const Vec& row, double rb, RowSense rs) {
    Vec out(cols, 0.0);
    double shift = 0.0;
    for (int j = 0; j < n; ++j) {
      out[vmap[j].col] = row[j] * vmap[j].sign;
      if (vmap[j].neg_col >= 0) out[vmap[j].neg_col] = -row[j];
      shift += row[j] * vmap[j].shift;
    }
    a.push_back(std::move(out));
    b.push_back(rb - shift);
    sense.push_back(rs);
  };
  for (size_t i = 0; i < lp.rows.size(); ++i)
    expand_row(lp.rows[i], lp.rhs[i], lp.sense[i]);
  // Finite upper bounds for variables with finite lower bounds become rows.
  for (int j = 0; j < n; ++j) {
    if (lp.lower[j] != -kInf && lp.upper[j] != kInf) {
      Vec row(n, 0.0);
      row[j] = 1.0;
      expand_row(row, lp.upper[j], RowSense::Le);
    }
  }

  Vec c(cols, 0.0);
  double cshift = 0.0;
  for (int j = 0; j < n; ++j) {
    c[vmap[j].col] = lp.objective[j] * vmap[j].sign;
    if (vmap[j].neg_col >= 0) c[vmap[j].neg_col] = -lp.objective[j];
    cshift += lp.objective[j] * vmap[j].shift;
  }

  detail::SimplexTableau tab(a, b, sense, c);
  LpSolution sol;
  sol.status = tab.run();
  if (sol.status != LpStatus::Optimal) return sol;
  Vec y = tab.structural_solution();
  sol.x.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double val = vmap[j].shift + vmap[j].sign * y[vmap[j].col];
    if (vmap[j].neg_col >= 0) val -= y[vmap[j].neg_col];
    sol.x[j] = val;
  }
  sol.objective = tab.objective_value() + cshift;
  return sol;
}

}  // namespace infoprice
