// Desk-scale ground truth: the revenue-optimal menu for fixed posteriors,
// exact optimal deterministic pricing for small signal spaces, exhaustive
// partition enumeration, the binary-support grid solver, and the two-signal
// virtual-value flow bound.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

#include "infoprice/disclosure.hpp"
#include "infoprice/lp.hpp"
#include "infoprice/model.hpp"

namespace infoprice {

// A per-signal menu: allocation and payment, detached from any particular
// information structure.
struct Menu {
  Mat alloc;  // S x m
  Vec price;  // S
};

struct MenuSolution {
  double revenue = 0.0;
  Menu menu;
};

// Revenue-maximal IC-IR menu for a finite posterior type space; the optimal
// mechanism for a fixed information structure.
//
// Solved in utility space: variables are allocations x(s) and interim
// utilities u(s) = nu(s).x(s) - p(s) >= 0. Payments would otherwise need
// free variables, whose sign-split halves drift apart numerically on
// degenerate menus.
inline MenuSolution optimal_menu_lp(const SignalStats& stats) {
  const int s = stats.num_signals();
  if (s == 0) throw std::invalid_argument("optimal_menu_lp: no signals");
  const int m = static_cast<int>(stats.nu[0].size());
  const int nx = s * m;  // vars: x(sig, prod) in [0,1], then u(sig) >= 0
  LinearProgram lp(nx + s);
  for (int j = 0; j < s; ++j) {
    lp.objective[nx + j] = -stats.r[j];
    for (int i = 0; i < m; ++i) {
      lp.objective[j * m + i] = stats.r[j] * stats.nu[j][i];
      lp.upper[j * m + i] = 1.0;
    }
  }
  for (int j = 0; j < s; ++j) {
    Vec cap(nx + s, 0.0);
    for (int i = 0; i < m; ++i) cap[j * m + i] = 1.0;
    lp.add_row(std::move(cap), RowSense::Le, 1.0);
    for (int jp = 0; jp < s; ++jp) {
      if (jp == j) continue;
      // u(j) >= u(j') + (nu(j) - nu(j')).x(j')
      Vec ic(nx + s, 0.0);
      ic[nx + j] = 1.0;
      ic[nx + jp] = -1.0;
      for (int i = 0; i < m; ++i)
        ic[jp * m + i] = stats.nu[jp][i] - stats.nu[j][i];
      lp.add_row(std::move(ic), RowSense::Ge, 0.0);
    }
  }
  LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("optimal_menu_lp: LP not optimal");
  MenuSolution out;
  out.revenue = sol.objective;
  out.menu.alloc.assign(s, Vec(m, 0.0));
  out.menu.price.assign(s, 0.0);
  for (int j = 0; j < s; ++j) {
    for (int i = 0; i < m; ++i)
      out.menu.alloc[j][i] = std::clamp(sol.x[j * m + i], 0.0, 1.0);
    out.menu.price[j] = dot(stats.nu[j], out.menu.alloc[j]) - sol.x[nx + j];
  }
  return out;
}

struct PricingSolution {
  double revenue = 0.0;
  Vec prices;               // +inf for unoffered products
  std::vector<int> assign;  // chosen product per signal, -1 for no purchase
};

// Exact optimal deterministic pricing for a fixed finite posterior space:
// enumerate which product (or none) each signal buys, then maximize prices
// subject to that purchase pattern being a buyer best response.
inline PricingSolution best_pricing_for_stats(const SignalStats& stats,
                                              std::vector<int> offered = {},
                                              long long enum_limit = 4000000) {
  const int s = stats.num_signals();
  const int m = static_cast<int>(stats.nu[0].size());
  if (offered.empty())
    for (int i = 0; i < m; ++i) offered.push_back(i);
  const int base = static_cast<int>(offered.size()) + 1;
  double combos = std::pow(static_cast<double>(base), s);
  if (combos > static_cast<double>(enum_limit))
    throw SizeLimitError("best_pricing_for_stats: assignment space too large");

  PricingSolution best;
  best.prices.assign(m, kInf);
  std::vector<int> assign(s, -1);
  const long long total = static_cast<long long>(combos + 0.5);
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    for (int j = 0; j < s; ++j) {
      int d = static_cast<int>(c % base);
      c /= base;
      assign[j] = d == 0 ? -1 : offered[d - 1];
    }
    // LP over prices of offered products.
    LinearProgram lp(static_cast<int>(offered.size()));
    std::map<int, int> col;
    for (size_t i = 0; i < offered.size(); ++i) col[offered[i]] = static_cast<int>(i);
    bool any = false;
    for (int j = 0; j < s; ++j)
      if (assign[j] >= 0) {
        lp.objective[col[assign[j]]] += stats.r[j];
        any = true;
      }
    if (!any) continue;
    for (int j = 0; j < s; ++j) {
      if (assign[j] < 0) {
        for (int i : offered) {
          Vec row(offered.size(), 0.0);
          row[col[i]] = -1.0;
          lp.add_row(std::move(row), RowSense::Le, -stats.nu[j][i]);
        }
      } else {
        int a = assign[j];
        Vec ir(offered.size(), 0.0);
        ir[col[a]] = 1.0;
        lp.add_row(std::move(ir), RowSense::Le, stats.nu[j][a]);
        for (int i : offered) {
          if (i == a) continue;
          Vec row(offered.size(), 0.0);
          row[col[a]] = 1.0;
          row[col[i]] = -1.0;
          lp.add_row(std::move(row), RowSense::Le, stats.nu[j][a] - stats.nu[j][i]);
        }
      }
    }
    LpSolution sol = lp_solve(lp);
    if (sol.status != LpStatus::Optimal) continue;
    if (sol.objective > best.revenue) {
      best.revenue = sol.objective;
      best.assign = assign;
      best.prices.assign(m, kInf);
      for (int i : offered) best.prices[i] = sol.x[col[i]];
    }
  }
  if (best.assign.empty()) best.assign.assign(s, -1);
  return best;
}

// --- set partitions -------------------------------------------------------

// Enumerates set partitions of {0..n-1} through restricted growth strings in
// lexicographic order.
inline void for_each_partition(int n,
                               const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> rgs(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int maxblk) {
    if (pos == n) {
      fn(rgs);
      return;
    }
    for (int b = 0; b <= maxblk + 1; ++b) {
      rgs[pos] = b;
      rec(pos + 1, std::max(maxblk, b));
    }
  };
  rec(1, 0);  // rgs[0] = 0 fixed
  if (n == 0) fn(rgs);
}

inline InformationStructure partition_to_info(const ValueDistribution& dist,
                                              const std::vector<int>& rgs) {
  int blocks = 1 + *std::max_element(rgs.begin(), rgs.end());
  Mat kernel(dist.size(), Vec(blocks, 0.0));
  std::vector<SignalLabel> labels;
  for (int b = 0; b < blocks; ++b) labels.push_back(SignalLabel::named("B" + std::to_string(b)));
  for (int k = 0; k < dist.size(); ++k) kernel[k][rgs[k]] = 1.0;
  return InformationStructure(std::move(labels), std::move(kernel));
}

struct PartitionDesign {
  double revenue = 0.0;
  std::vector<int> partition;  // restricted growth string
  Menu menu;
  std::vector<std::pair<std::vector<int>, double>> all;  // per-partition revenues
};

// Exhaustive search over deterministic information structures (set partitions
// of the support), solving the optimal menu LP on each.
inline PartitionDesign best_partition_design(const ValueDistribution& dist,
                                             int max_support = 8) {
  if (dist.size() > max_support)
    throw SizeLimitError("best_partition_design: support too large");
  PartitionDesign out;
  for_each_partition(dist.size(), [&](const std::vector<int>& rgs) {
    InformationStructure info = partition_to_info(dist, rgs);
    MenuSolution ms = optimal_menu_lp(signal_stats(dist, info));
    out.all.push_back({rgs, ms.revenue});
    if (ms.revenue > out.revenue || out.partition.empty()) {
      out.revenue = ms.revenue;
      out.partition = rgs;
      out.menu = ms.menu;
    }
  });
  return out;
}

// Best revenue over deterministic partitions constrained to efficient
// allocation: every block must share one top item, which it is allocated
// deterministically; only prices are optimized.
inline double best_efficient_partition_design(const ValueDistribution& dist,
                                              int max_support = 8) {
  if (dist.size() > max_support)
    throw SizeLimitError("best_efficient_partition_design: support too large");
  TopItemProfile prof = top_item_profile(dist);
  double best = 0.0;
  for_each_partition(dist.size(), [&](const std::vector<int>& rgs) {
    int blocks = 1 + *std::max_element(rgs.begin(), rgs.end());
    std::vector<int> block_top(blocks, -1);
    for (int k = 0; k < dist.size(); ++k) {
      if (block_top[rgs[k]] < 0) block_top[rgs[k]] = prof.top[k];
      else if (block_top[rgs[k]] != prof.top[k]) return;  // mixed tops: inefficient
    }
    SignalStats st = signal_stats(dist, partition_to_info(dist, rgs));
    // maximize sum r(s) p(s) with fixed allocations e_{top(s)}
    LinearProgram lp(blocks);
    for (int b = 0; b < blocks; ++b) lp.objective[b] = st.r[b];
    for (int b = 0; b < blocks; ++b) {
      Vec ir(blocks, 0.0);
      ir[b] = 1.0;
      lp.add_row(std::move(ir), RowSense::Le, st.nu[b][block_top[b]]);
      for (int bp = 0; bp < blocks; ++bp) {
        if (bp == b) continue;
        Vec ic(blocks, 0.0);
        ic[b] = 1.0;
        ic[bp] = -1.0;
        lp.add_row(std::move(ic), RowSense::Le,
                   st.nu[b][block_top[b]] - st.nu[b][block_top[bp]]);
      }
    }
    LpSolution sol = lp_solve(lp);
    if (sol.status == LpStatus::Optimal) best = std::max(best, sol.objective);
  });
  return best;
}

// --- binary-support joint design ------------------------------------------

struct BinaryDesign {
  double lower = 0.0;   // best revenue found
  double upper = 0.0;   // optimal welfare
  double alpha1 = 0.0, alpha2 = 0.0;
  Menu menu;
};

inline SignalStats binary_stats(const ValueDistribution& dist, double a1, double a2) {
  Mat kernel = {{a1, 1.0 - a1}, {a2, 1.0 - a2}};
  InformationStructure info({SignalLabel::named("s1"), SignalLabel::named("s2")},
                            std::move(kernel));
  return signal_stats(dist, info);
}

// Grid-then-refine sweep over two-signal structures for K = 2 supports.
// The two kernel parameters are the per-type probabilities of signal one.
inline BinaryDesign binary_support_optimal(const ValueDistribution& dist,
                                           double grid_step = 1e-3,
                                           double refine_step = 1e-6) {
  if (dist.size() != 2)
    throw std::invalid_argument("binary_support_optimal: needs K = 2");
  BinaryDesign out;
  out.upper = optimal_welfare(dist);
  auto eval = [&](double a1, double a2) {
    MenuSolution ms = optimal_menu_lp(binary_stats(dist, a1, a2));
    if (ms.revenue > out.lower) {
      out.lower = ms.revenue;
      out.alpha1 = a1;
      out.alpha2 = a2;
      out.menu = ms.menu;
    }
  };
  const int steps = std::max(1, static_cast<int>(std::round(1.0 / grid_step)));
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j)
      eval(static_cast<double>(i) / steps, static_cast<double>(j) / steps);
  // Local refinement: shrink a window around the best cell until the step
  // drops to refine_step.
  double step = grid_step;
  while (step > refine_step) {
    double next = step / 4.0;
    double c1 = out.alpha1, c2 = out.alpha2;
    for (int i = -4; i <= 4; ++i)
      for (int j = -4; j <= 4; ++j) {
        double a1 = std::clamp(c1 + i * next, 0.0, 1.0);
        double a2 = std::clamp(c2 + j * next, 0.0, 1.0);
        eval(a1, a2);
      }
    step = next;
  }
  return out;
}

// --- two-signal virtual value flow bound ------------------------------------

// Upper bound on the revenue of any IC-IR menu over a fixed pair of signals,
// built from a mass flow of `flow_mass` out of `source` into the other
// signal. The receiving signal's virtual value is penalized by the
// source-receiver posterior gap; the no-purchase option truncates each
// signal's contribution at zero.
inline double dual_bound_two_signals(const SignalStats& stats, double flow_mass,
                                     int source = 0) {
  if (stats.num_signals() != 2)
    throw std::invalid_argument("dual_bound_two_signals: needs exactly 2 signals");
  const int s1 = source, s2 = 1 - source;
  if (flow_mass < -kMassTol || flow_mass > stats.r[s1] + kMassTol)
    throw std::invalid_argument("dual_bound_two_signals: flow_mass outside [0, r(s1)]");
  const int m = static_cast<int>(stats.nu[0].size());
  double phi_best = 0.0;
  for (int i = 0; i < m; ++i) {
    double phi = stats.nu[s2][i] -
                 (flow_mass / stats.r[s2]) * (stats.nu[s1][i] - stats.nu[s2][i]);
    phi_best = std::max(phi_best, phi);
  }
  return stats.r[s1] * max_coord(stats.nu[s1]) + stats.r[s2] * phi_best;
}

// min over both flow directions at full mass
inline double dual_bound_two_signals_best(const SignalStats& stats, int* direction = nullptr) {
  double d0 = dual_bound_two_signals(stats, stats.r[0], 0);
  double d1 = dual_bound_two_signals(stats, stats.r[1], 1);
  if (direction) *direction = d0 <= d1 ? 0 : 1;
  return std::min(d0, d1);
}

}  // namespace infoprice
