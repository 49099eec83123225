// Horizontal and coarse horizontal disclosure, the pooling program that
// maximizes the probability of selling at a fixed uniform price, and the
// search for the largest price p* that still sells with probability one.
#pragma once

#include <algorithm>
#include <set>

#include "infoprice/lp.hpp"
#include "infoprice/model.hpp"

namespace infoprice {

// Partition of the support by top item, with conditional means per class.
struct TopItemProfile {
  std::vector<int> top;  // per support point, lowest index on ties
  Vec class_mass;        // per product
  Mat nu_cond;           // nu_cond[i][ip] = E[v_i | top = ip]; NaN if class empty

  bool class_empty(int ip) const { return class_mass[ip] <= 0.0; }
  // Largest conditional top mean; upper-bounds any price that can sell
  // with positive probability through one top-item class.
  double max_cond_top() const {
    double b = 0.0;
    for (size_t i = 0; i < class_mass.size(); ++i)
      if (class_mass[i] > 0.0) b = std::max(b, nu_cond[i][i]);
    return b;
  }
};

inline TopItemProfile top_item_profile(const ValueDistribution& dist) {
  TopItemProfile prof;
  prof.top.resize(dist.size());
  prof.class_mass.assign(dist.m, 0.0);
  Mat agg(dist.m, Vec(dist.m, 0.0));
  for (int k = 0; k < dist.size(); ++k) {
    int t = argmax_index(dist.support[k]);
    prof.top[k] = t;
    prof.class_mass[t] += dist.prob[k];
    for (int i = 0; i < dist.m; ++i) agg[i][t] += dist.prob[k] * dist.support[k][i];
  }
  prof.nu_cond.assign(dist.m, Vec(dist.m, std::numeric_limits<double>::quiet_NaN()));
  for (int ip = 0; ip < dist.m; ++ip) {
    if (prof.class_mass[ip] <= 0.0) continue;
    for (int i = 0; i < dist.m; ++i)
      prof.nu_cond[i][ip] = agg[i][ip] / prof.class_mass[ip];
  }
  return prof;
}

// One deterministic signal per nonempty top-item class.
inline InformationStructure horizontal_disclosure(const ValueDistribution& dist) {
  TopItemProfile prof = top_item_profile(dist);
  std::vector<int> col(dist.m, -1);
  std::vector<SignalLabel> labels;
  for (int i = 0; i < dist.m; ++i)
    if (prof.class_mass[i] > 0.0) {
      col[i] = static_cast<int>(labels.size());
      labels.push_back(SignalLabel::subset({i}));
    }
  Mat kernel(dist.size(), Vec(labels.size(), 0.0));
  for (int k = 0; k < dist.size(); ++k) kernel[k][col[prof.top[k]]] = 1.0;
  return InformationStructure(std::move(labels), std::move(kernel));
}

// Splits E[max_i v_i] by whether the top item's class has conditional top
// mean >= p. The two parts sum to optimal_welfare exactly.
inline std::pair<double, double> wel_split(const ValueDistribution& dist, double p) {
  TopItemProfile prof = top_item_profile(dist);
  double plus = 0.0;
  for (int k = 0; k < dist.size(); ++k) {
    int t = prof.top[k];
    if (prof.nu_cond[t][t] >= p - kMassTol)
      plus += dist.prob[k] * max_coord(dist.support[k]);
  }
  return {plus, optimal_welfare(dist) - plus};
}

// A coarse-horizontal pooling at a uniform price p: classes in I+(p) keep
// their own signal; mass of points whose top item lies in I-(p) is routed
// into I+ signals subject to the per-signal posterior staying >= p.
struct PoolingPlan {
  double price = 0.0;
  std::vector<int> i_plus, i_minus;
  Mat transport;  // K x m; transport[k][i] = mass of point k pooled into signal i
  double sale_probability = 0.0;
};

inline PoolingPlan max_sale_pooling(const ValueDistribution& dist, double p) {
  TopItemProfile prof = top_item_profile(dist);
  PoolingPlan plan;
  plan.price = p;
  plan.transport.assign(dist.size(), Vec(dist.m, 0.0));
  for (int i = 0; i < dist.m; ++i) {
    if (prof.class_mass[i] <= 0.0) continue;
    if (prof.nu_cond[i][i] >= p - kMassTol) plan.i_plus.push_back(i);
    else plan.i_minus.push_back(i);
  }
  if (plan.i_plus.empty()) return plan;  // nothing can sell at this price

  double base = 0.0;
  for (int i : plan.i_plus) base += prof.class_mass[i];

  std::vector<int> movers;  // support points whose top item is in I-
  std::set<int> plus_set(plan.i_plus.begin(), plan.i_plus.end());
  for (int k = 0; k < dist.size(); ++k)
    if (!plus_set.count(prof.top[k])) movers.push_back(k);
  if (movers.empty()) {
    plan.sale_probability = base;
    return plan;
  }

  // maximize total routed mass
  //   sum_i t(k->i) <= f_k                        per mover k
  //   sum_k t(k->i) (p - v_k_i) <= budget_i       per i in I+
  const int np = static_cast<int>(plan.i_plus.size());
  const int nk = static_cast<int>(movers.size());
  LinearProgram lp(nk * np);
  for (int v = 0; v < nk * np; ++v) lp.objective[v] = 1.0;
  for (int a = 0; a < nk; ++a) {
    Vec row(nk * np, 0.0);
    for (int b = 0; b < np; ++b) row[a * np + b] = 1.0;
    lp.add_row(std::move(row), RowSense::Le, dist.prob[movers[a]]);
  }
  for (int b = 0; b < np; ++b) {
    int i = plan.i_plus[b];
    Vec row(nk * np, 0.0);
    for (int a = 0; a < nk; ++a) row[a * np + b] = p - dist.support[movers[a]][i];
    double budget = 0.0;
    for (int k = 0; k < dist.size(); ++k)
      if (prof.top[k] == i) budget += dist.prob[k] * (dist.support[k][i] - p);
    lp.add_row(std::move(row), RowSense::Le, budget);
  }
  LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("max_sale_pooling: pooling LP not optimal");
  for (int a = 0; a < nk; ++a)
    for (int b = 0; b < np; ++b) {
      double t = sol.x[a * np + b];
      if (t > 0.0) plan.transport[movers[a]][plan.i_plus[b]] = t;
    }
  plan.sale_probability = base + std::max(0.0, sol.objective);
  return plan;
}

// The coarse horizontal disclosure a pooling plan induces. Signal labels are
// {i} plus the tops pooled into i; residual unpooled mass goes to a trash
// signal labelled with the full product set.
inline InformationStructure plan_to_info(const ValueDistribution& dist,
                                         const PoolingPlan& plan) {
  TopItemProfile prof = top_item_profile(dist);
  std::vector<SignalLabel> labels;
  Mat kernel(dist.size());
  std::vector<int> cols;
  for (int i : plan.i_plus) {
    std::vector<int> prods = {i};
    for (int k = 0; k < dist.size(); ++k)
      if (plan.transport[k][i] > 0.0) prods.push_back(prof.top[k]);
    labels.push_back(SignalLabel::subset(std::move(prods)));
    cols.push_back(i);
  }
  std::vector<int> all(dist.m);
  for (int i = 0; i < dist.m; ++i) all[i] = i;
  labels.push_back(SignalLabel::subset(all));  // trash
  const int s = static_cast<int>(labels.size());
  std::set<int> plus_set(plan.i_plus.begin(), plan.i_plus.end());
  for (int k = 0; k < dist.size(); ++k) {
    kernel[k].assign(s, 0.0);
    double used = 0.0;
    if (plus_set.count(prof.top[k])) {
      int b = static_cast<int>(std::find(cols.begin(), cols.end(), prof.top[k]) -
                               cols.begin());
      kernel[k][b] = 1.0;
      used = 1.0;
    } else {
      for (size_t b = 0; b < cols.size(); ++b) {
        double w = plan.transport[k][cols[b]] / dist.prob[k];
        kernel[k][b] = w;
        used += w;
      }
    }
    if (used > 1.0) {  // LP round-off
      for (double& w : kernel[k]) w /= used;
      used = 1.0;
    }
    kernel[k][s - 1] = std::clamp(1.0 - used, 0.0, 1.0);
  }
  return InformationStructure(std::move(labels), std::move(kernel));
}

// Sale-maximizing coarse pooling without the one-directional restriction:
// any point may be routed to any product signal, each signal j must keep its
// posterior for product j at or above p. Used by the two-price construction.
struct GeneralPooling {
  Mat transport;  // K x m
  double sale_probability = 0.0;
};

inline GeneralPooling general_max_sale(const ValueDistribution& dist, double p) {
  const int nk = dist.size(), m = dist.m;
  LinearProgram lp(nk * m);
  for (int v = 0; v < nk * m; ++v) lp.objective[v] = 1.0;
  for (int k = 0; k < nk; ++k) {
    Vec row(nk * m, 0.0);
    for (int j = 0; j < m; ++j) row[k * m + j] = 1.0;
    lp.add_row(std::move(row), RowSense::Le, dist.prob[k]);
  }
  for (int j = 0; j < m; ++j) {
    Vec row(nk * m, 0.0);
    for (int k = 0; k < nk; ++k) row[k * m + j] = p - dist.support[k][j];
    lp.add_row(std::move(row), RowSense::Le, 0.0);
  }
  LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("general_max_sale: LP not optimal");
  GeneralPooling out;
  out.transport.assign(nk, Vec(m, 0.0));
  for (int k = 0; k < nk; ++k)
    for (int j = 0; j < m; ++j) out.transport[k][j] = std::max(0.0, sol.x[k * m + j]);
  out.sale_probability = std::max(0.0, sol.objective);
  return out;
}

inline InformationStructure general_pooling_to_info(const ValueDistribution& dist,
                                                    const GeneralPooling& gp) {
  TopItemProfile prof = top_item_profile(dist);
  std::vector<SignalLabel> labels;
  Mat kernel(dist.size());
  std::vector<int> cols;
  for (int j = 0; j < dist.m; ++j) {
    bool live = false;
    for (int k = 0; k < dist.size(); ++k)
      if (gp.transport[k][j] > 0.0) live = true;
    if (!live) continue;
    std::vector<int> prods = {j};
    for (int k = 0; k < dist.size(); ++k)
      if (gp.transport[k][j] > 0.0) prods.push_back(prof.top[k]);
    labels.push_back(SignalLabel::subset(std::move(prods)));
    cols.push_back(j);
  }
  std::vector<int> all(dist.m);
  for (int i = 0; i < dist.m; ++i) all[i] = i;
  labels.push_back(SignalLabel::subset(all));
  const int s = static_cast<int>(labels.size());
  for (int k = 0; k < dist.size(); ++k) {
    kernel[k].assign(s, 0.0);
    double used = 0.0;
    for (size_t b = 0; b < cols.size(); ++b) {
      double w = gp.transport[k][cols[b]] / dist.prob[k];
      kernel[k][b] = w;
      used += w;
    }
    if (used > 1.0) {
      for (double& w : kernel[k]) w /= used;
      used = 1.0;
    }
    kernel[k][s - 1] = std::clamp(1.0 - used, 0.0, 1.0);
  }
  return InformationStructure(std::move(labels), std::move(kernel));
}

struct UniformPriceResult {
  double p_star = 0.0;
  PoolingPlan plan;
};

// Largest uniform price whose pooling still sells with probability one.
// Candidate breakpoints (conditional top means, support values, prior means)
// are checked explicitly so exact answers on rational instances are hit
// exactly; a bisection refines between the bracketing breakpoints.
inline UniformPriceResult max_uniform_price(const ValueDistribution& dist) {
  TopItemProfile prof = top_item_profile(dist);
  const double hi_cap = prof.max_cond_top();
  UniformPriceResult res;
  if (hi_cap <= 0.0) {  // all values zero
    res.p_star = 0.0;
    res.plan = max_sale_pooling(dist, 0.0);
    return res;
  }
  auto sells = [&](double p) {
    return max_sale_pooling(dist, p).sale_probability >= 1.0 - kTol;
  };
  std::set<double> bps{0.0, hi_cap};
  for (int i = 0; i < dist.m; ++i)
    if (prof.class_mass[i] > 0.0) bps.insert(prof.nu_cond[i][i]);
  for (int k = 0; k < dist.size(); ++k)
    for (int i = 0; i < dist.m; ++i) bps.insert(dist.support[k][i]);
  for (double mu : dist.prior_mean()) bps.insert(mu);
  std::vector<double> sorted;
  for (double b : bps)
    if (b >= 0.0 && b <= hi_cap + kMassTol) sorted.push_back(b);
  std::sort(sorted.begin(), sorted.end());

  // sale_probability(p) is non-increasing, so feasibility over the sorted
  // breakpoints is monotone; bracket by binary search over them.
  int lo_idx = 0, hi_idx = static_cast<int>(sorted.size());
  if (!sells(sorted[0])) {
    res.p_star = 0.0;
    res.plan = max_sale_pooling(dist, 0.0);
    return res;
  }
  {
    int a = 0, b = static_cast<int>(sorted.size()) - 1;
    while (a < b) {  // find the last feasible breakpoint
      int mid = (a + b + 1) / 2;
      if (sells(sorted[mid])) a = mid;
      else b = mid - 1;
    }
    lo_idx = a;
    hi_idx = a + 1;
  }
  double lo = sorted[lo_idx];
  double hi = hi_idx < static_cast<int>(sorted.size()) ? sorted[hi_idx] : hi_cap;
  if (hi > lo) {
    const double tol = 1e-12 * std::max(1.0, hi_cap);
    for (int it = 0; it < 100 && hi - lo > tol; ++it) {
      double mid = 0.5 * (lo + hi);
      if (sells(mid)) lo = mid;
      else hi = mid;
    }
    // Snap to a breakpoint when the bracket collapsed onto one.
    for (double b : sorted)
      if (b >= lo && b <= lo + 2 * tol && sells(b)) lo = std::max(lo, b);
  }
  res.p_star = lo;
  res.plan = max_sale_pooling(dist, lo);
  return res;
}

}  // namespace infoprice
