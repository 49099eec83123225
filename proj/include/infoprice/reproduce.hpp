// The reproduction checklist: every bundled example value and every sweep
// property, evaluated at pinned tolerances. Shared by the acceptance binary
// and the `reproduce` CLI command.
#pragma once

#include <functional>
#include <random>

#include "infoprice/certify.hpp"
#include "infoprice/instances.hpp"

namespace infoprice {

struct CheckRow {
  std::string id;
  std::string statement;
  double computed = 0.0;
  double expected = 0.0;
  std::string cmp;  // "==", "<=", ">="
  double tolerance = 0.0;
  bool pass = false;
};

namespace checks {

inline CheckRow row(std::string id, std::string statement, double computed,
                    std::string cmp, double expected, double tolerance) {
  CheckRow r{std::move(id), std::move(statement), computed,
             expected,      std::move(cmp),       tolerance};
  if (r.cmp == "==") r.pass = std::fabs(r.computed - r.expected) <= r.tolerance;
  else if (r.cmp == "<=") r.pass = r.computed <= r.expected + r.tolerance;
  else r.pass = r.computed >= r.expected - r.tolerance;
  return r;
}

inline SignalStats fullrev_stats(const ValueDistribution& d) {
  return signal_stats(d, InformationStructure::full_disclosure(d));
}

// exact best deterministic pricing over the alpha-grid of two-signal
// structures for a K = 2 instance, optionally restricted to a product subset
inline double two_signal_pricing_sweep(const ValueDistribution& dist, int steps,
                                       std::vector<int> offered = {}) {
  double best = 0.0;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j) {
      double a1 = static_cast<double>(i) / steps;
      double a2 = static_cast<double>(j) / steps;
      SignalStats st = binary_stats(dist, a1, a2);
      best = std::max(best, best_pricing_for_stats(st, offered).revenue);
    }
  return best;
}

inline ValueDistribution random_two_point(uint64_t seed, int m) {
  std::mt19937_64 g(seed * 0x9e3779b97f4a7c15ULL + 17);
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(g() >> 11) * 0x1.0p-53);
  };
  Mat support;
  while (support.size() < 2) {
    Vec v(m);
    for (double& x : v) x = uni(0.0, 10.0);
    if (support.empty() || support[0] != v) support.push_back(std::move(v));
  }
  double r = uni(0.05, 0.95);
  return ValueDistribution(m, std::move(support), {r, 1.0 - r});
}

// --- per-criterion check groups ---------------------------------------------

inline void example1(std::vector<CheckRow>& rows) {
  ValueDistribution d = example_complex_info();
  rows.push_back(row("01.ex1-partition-revenue",
                     "best deterministic partition menu on ex1",
                     best_partition_design(d).revenue, ">=", 5.0, 1e-9));
  rows.push_back(row("01.ex1-efficient-revenue",
                     "best efficient-allocation design on ex1",
                     best_efficient_partition_design(d), "==", 4.4, 1e-9));
  double noinfo =
      optimal_menu_lp(signal_stats(d, InformationStructure::no_information(d)))
          .revenue;
  rows.push_back(row("01.ex1-noinfo-revenue", "no-information menu on ex1",
                     noinfo, "==", 4.4, 1e-9));
}

inline void example2(std::vector<CheckRow>& rows) {
  ValueDistribution d = appendix_pricing_subopt();
  rows.push_back(row("02.a6-lottery-menu",
                     "full-disclosure optimal menu on a6 (lottery)",
                     optimal_menu_lp(fullrev_stats(d)).revenue, "==", 12.25, 1e-9));
  rows.push_back(row("02.a6-pricing-sweep",
                     "two-signal pricing sweep on a6, all products",
                     two_signal_pricing_sweep(d, 50), "<=", 12.0, 1e-6));
  rows.push_back(row("02.a6-pricing-sweep-23",
                     "two-signal pricing sweep on a6, products {2,3}",
                     two_signal_pricing_sweep(d, 50, {1, 2}), "<=", 10.5, 1e-6));
}

inline void tight_example(std::vector<CheckRow>& rows) {
  for (double eps : {0.1, 0.01}) {
    ValueDistribution d = tight_uniform_example(eps);
    std::string tag = eps == 0.1 ? "0.1" : "0.01";
    PricingMechanism pm{InformationStructure::full_disclosure(d),
                        {1.0 / eps, 1.0}};
    double rev = revenue(d, induce_mechanism(d, pm));
    rows.push_back(row("03.tight-fullrev-pricing-" + tag,
                       "full-disclosure pricing revenue, eps " + tag, rev, "==",
                       2.0 - eps, 1e-9));
    UniformPriceResult up = max_uniform_price(d);
    rows.push_back(row("03.tight-uniform-cap-" + tag,
                       "uniform-price revenue cap, eps " + tag,
                       up.p_star * up.plan.sale_probability, "<=", 1.0, 1e-9));
    if (eps == 0.01) {
      ConstructionCertificate c = uniform_half(d);
      rows.push_back(row("03.tight-uniform-ratio-0.01",
                         "uniform-half ratio at eps 0.01", c.ratio(), "<=",
                         0.5026, 0.0));
    }
  }
}

struct SweepStats {
  double min_uniform_margin = kInf;     // rev - 0.5 opt_wel
  double min_dominance_margin = kInf;   // two_price - uniform
  double min_branch_margin = kInf;      // rev - 0.5017 opt_wel over non-fallback
  int containment_violations = 0;
  int count = 0;
};

inline SweepStats correlated_sweep(int n_instances) {
  SweepStats s;
  for (uint64_t seed = 0; s.count < n_instances; ++seed) {
    GeneratorSpec spec{"correlated", seed};
    ValueDistribution dist = random_correlated(spec);
    double optw = optimal_welfare(dist);
    if (optw <= 0.0) continue;
    ++s.count;
    ConstructionCertificate uni = uniform_half(dist);
    s.min_uniform_margin =
        std::min(s.min_uniform_margin, uni.revenue - 0.5 * optw);
    TopItemProfile prof = top_item_profile(dist);
    const InformationStructure& info = uni.mechanism.info;
    for (int k = 0; k < dist.size(); ++k)
      for (int sg = 0; sg < info.num_signals(); ++sg)
        if (info.kernel[k][sg] > 0.0 && !info.signals[sg].contains(prof.top[k]))
          ++s.containment_violations;
    ConstructionCertificate two = two_price(dist, {}, &uni);
    s.min_dominance_margin =
        std::min(s.min_dominance_margin, two.revenue - uni.revenue);
    if (two.branch != "fallback-uniform")
      s.min_branch_margin =
          std::min(s.min_branch_margin, two.revenue - 0.5017 * optw);
  }
  return s;
}

inline void uniform_and_two_price_sweeps(std::vector<CheckRow>& rows,
                                         int n_instances) {
  SweepStats s = correlated_sweep(n_instances);
  rows.push_back(row("04.half-guarantee-sweep",
                     "min(revenue - opt_wel/2), uniform price, " +
                         std::to_string(s.count) + " correlated instances",
                     s.min_uniform_margin, ">=", 0.0, 1e-6));
  rows.push_back(row("04.coarse-containment-sweep",
                     "signal labels containing the top item (violations)",
                     s.containment_violations, "==", 0.0, 0.0));
  rows.push_back(row("05.two-price-dominance-sweep",
                     "min(two-price revenue - uniform revenue)",
                     s.min_dominance_margin, ">=", 0.0, 1e-9));
  double branch = s.min_branch_margin == kInf ? 0.0 : s.min_branch_margin;
  rows.push_back(row("05.two-price-branch-sweep",
                     "min(revenue - 0.5017 opt_wel) over certified branches",
                     branch, ">=", 0.0, 1e-6));
  TwoPriceParams params;
  rows.push_back(row("05.two-price-closing-inequality",
                     "closing expression minus 2/(2-delta)",
                     params.closing_expression() - 2.0 / (2.0 - params.delta),
                     ">=", 0.0, -1e-12));
}

inline void two_product_sweeps(std::vector<CheckRow>& rows, int n_instances) {
  double min_sum_margin = kInf, min_ratio_margin = kInf;
  int count = 0;
  for (uint64_t seed = 0; count < n_instances; ++seed) {
    GeneratorSpec spec{"correlated", seed};
    spec.m = 2;
    ValueDistribution dist = random_correlated(spec);
    double optw = optimal_welfare(dist);
    if (optw <= 0.0) continue;
    ++count;
    BestOfThreeResult r = best_of_three_two_products(dist);
    min_sum_margin =
        std::min(min_sum_margin,
                 r.revenues[0] + r.revenues[1] + r.revenues[2] - 2.0 * optw);
    min_ratio_margin =
        std::min(min_ratio_margin, r.best.revenue - (2.0 / 3.0) * optw);
  }
  rows.push_back(row("06.best-of-three-sum-sweep",
                     "min(M1+M2+M3 - 2 opt_wel), " + std::to_string(count) +
                         " two-product instances",
                     min_sum_margin, ">=", 0.0, 1e-6));
  rows.push_back(row("06.best-of-three-ratio-sweep",
                     "min(best revenue - (2/3) opt_wel)", min_ratio_margin,
                     ">=", 0.0, 1e-6));
  double eps = 0.01;
  ValueDistribution l2 = two_item_hardness(eps);
  SignalStats st = fullrev_stats(l2);
  rows.push_back(row("06.hardness-dual-bound",
                     "two-signal flow bound on the hardness pair",
                     dual_bound_two_signals_best(st), "<=", 2.0 + 2.0 * eps,
                     1e-9));
  rows.push_back(row("06.hardness-welfare", "optimal welfare of the hardness pair",
                     optimal_welfare(l2), "==", 3.0 - eps, 1e-9));
}

inline void full_surplus_sweeps(std::vector<CheckRow>& rows, int n_each) {
  for (const char* family : {"neg-affiliated", "exchangeable"}) {
    int failures = 0, count = 0;
    double worst_gap = 0.0, worst_audit = 0.0;
    for (uint64_t seed = 0; count < n_each; ++seed, ++count) {
      GeneratorSpec spec{family, seed};
      if (std::string(family) == "neg-affiliated") spec.m = 2;
      ValueDistribution dist = make_instance(spec);
      if (!full_surplus_condition(dist).holds) {
        ++failures;
        continue;
      }
      Mechanism mech = induce_mechanism(dist, full_surplus_mechanism(dist));
      AuditReport audit = audit_ic_ir(dist, mech);
      worst_audit = std::max(worst_audit, audit.max_violation);
      double rev = revenue(dist, mech);
      worst_gap = std::max(worst_gap, std::fabs(rev - optimal_welfare(dist)));
    }
    std::string f(family);
    rows.push_back(row("07." + f + "-condition",
                       "condition failures over " + std::to_string(count) +
                           " " + f + " instances",
                       failures, "==", 0.0, 0.0));
    rows.push_back(row("07." + f + "-extraction",
                       "max |revenue - opt_wel| under top-mean pricing",
                       worst_gap, "<=", 0.0, 1e-9));
    rows.push_back(row("07." + f + "-audit", "max IC/IR audit violation",
                       worst_audit, "<=", 0.0, 1e-9));
  }
}

inline void arc_checks(std::vector<CheckRow>& rows) {
  double prev_ratio = kInf;
  bool decreasing = true;
  for (int n : {2, 4, 6}) {
    ValueDistribution d = hart_nisan_arc(n, 0.05);
    double optw = optimal_welfare(d);
    PricingMechanism pm = conditional_mean_pricing(d);
    double rev = revenue(d, induce_mechanism(d, pm));
    rows.push_back(row("08.arc-top-mean-pricing-n" + std::to_string(n),
                       "|top-mean pricing revenue - opt_wel| on the arc",
                       std::fabs(rev - optw), "<=", 0.0, 1e-9));
    SignalStats st = fullrev_stats(d);
    double pricing = best_pricing_for_stats(st).revenue;
    double menu = optimal_menu_lp(st).revenue;
    double ratio = pricing / menu;
    rows.push_back(row("08.arc-fullrev-pricing-over-menu-n" + std::to_string(n),
                       "full-disclosure pricing / menu ratio", ratio, "<=", 1.0,
                       1e-9));
    if (ratio >= prev_ratio) decreasing = false;
    prev_ratio = ratio;
  }
  rows.push_back(row("08.arc-ratio-decreasing",
                     "pricing/menu ratio strictly decreasing over n = 2,4,6",
                     decreasing ? 1.0 : 0.0, "==", 1.0, 0.0));
}

inline void b1_checks(std::vector<CheckRow>& rows) {
  for (int n : {3, 5, 8}) {
    ValueDistribution d = appendix_horizontal_subopt(n);
    std::string tag = std::to_string(n);
    double norm = 1.0 - std::pow(2.0, -n);
    double noinfo =
        optimal_menu_lp(signal_stats(d, InformationStructure::no_information(d)))
            .revenue;
    rows.push_back(row("09.b1-noinfo-n" + tag, "no-information revenue",
                       noinfo, ">=", n / norm, 1e-6));
    double fullrev = optimal_menu_lp(fullrev_stats(d)).revenue;
    rows.push_back(row("09.b1-fullrev-menu-n" + tag,
                       "optimal menu under full disclosure", fullrev, "<=",
                       1.0 / norm + 1e-6, 1e-5));
    rows.push_back(row("09.b1-ratio-n" + tag, "no-info / full-disclosure ratio",
                       noinfo / fullrev, "==", n, 0.01 * n));
  }
}

inline void b2_checks(std::vector<CheckRow>& rows) {
  ValueDistribution d = appendix_no_full_surplus();
  double hor = optimal_menu_lp(signal_stats(d, horizontal_disclosure(d))).revenue;
  rows.push_back(row("10.b2-horizontal-menu",
                     "optimal menu under horizontal disclosure", hor, "==", 5.5,
                     1e-9));
  OracleBound b = certify(d);
  rows.push_back(row("10.b2-certify-lower", "certified lower bound", b.lower,
                     "==", 7.0, 1e-3));
  rows.push_back(row("10.b2-certify-upper", "certified upper bound", b.upper,
                     "==", 7.5, 1e-9));
  rows.push_back(row("10.b2-strict-gap", "upper minus lower", b.upper - b.lower,
                     ">=", 0.4, 1e-3));
}

inline void oracle_coherence(std::vector<CheckRow>& rows, int n_instances,
                             int n_stats) {
  double max_over = -kInf, min_refine = kInf;
  for (uint64_t seed = 0; seed < static_cast<uint64_t>(n_instances); ++seed) {
    ValueDistribution dist = random_two_point(seed, 2 + seed % 2);
    double optw = optimal_welfare(dist);
    BinaryDesign coarse = binary_support_optimal(dist, 0.04, 1.0);
    BinaryDesign fine = binary_support_optimal(dist, 0.02, 1.0);
    max_over = std::max(max_over, fine.lower - optw);
    min_refine = std::min(min_refine, fine.lower - coarse.lower);
  }
  rows.push_back(row("11.binary-upper-coherence",
                     "max(binary lower - opt_wel) over " +
                         std::to_string(n_instances) + " two-point instances",
                     max_over, "<=", 0.0, 1e-6));
  rows.push_back(row("11.binary-grid-monotone",
                     "min(fine-grid lower - coarse-grid lower)", min_refine,
                     ">=", 0.0, 1e-12));
  std::mt19937_64 g(424242);
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(g() >> 11) * 0x1.0p-53);
  };
  double min_dual_margin = kInf;
  for (int t = 0; t < n_stats; ++t) {
    SignalStats st;
    double r1 = uni(0.05, 0.95);
    st.r = {r1, 1.0 - r1};
    int m = 2 + t % 3;
    st.nu.assign(2, Vec(m));
    for (Vec& nu : st.nu)
      for (double& x : nu) x = uni(0.0, 10.0);
    double lp = optimal_menu_lp(st).revenue;
    double dual = dual_bound_two_signals(st, st.r[0], 0);
    min_dual_margin = std::min(min_dual_margin, dual - lp);
  }
  rows.push_back(row("11.dual-dominates-menu",
                     "min(flow bound - menu LP) over " + std::to_string(n_stats) +
                         " random two-signal stats",
                     min_dual_margin, ">=", 0.0, 1e-7));
}

}  // namespace checks

struct ReproduceOptions {
  int sweep_instances = 500;
  int two_product_instances = 500;
  int full_surplus_instances = 200;
  int oracle_instances = 100;
  int oracle_stats = 200;
};

inline std::vector<CheckRow> run_reproduction(const ReproduceOptions& opts = {}) {
  std::vector<CheckRow> rows;
  checks::example1(rows);
  checks::example2(rows);
  checks::tight_example(rows);
  checks::uniform_and_two_price_sweeps(rows, opts.sweep_instances);
  checks::two_product_sweeps(rows, opts.two_product_instances);
  checks::full_surplus_sweeps(rows, opts.full_surplus_instances);
  checks::arc_checks(rows);
  checks::b1_checks(rows);
  checks::b2_checks(rows);
  checks::oracle_coherence(rows, opts.oracle_instances, opts.oracle_stats);
  return rows;
}

}  // namespace infoprice
