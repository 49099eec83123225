// Two-sided revenue bounds for a single instance: best construction or
// exhaustive design below, optimal welfare above.
#pragma once

#include "infoprice/approx.hpp"
#include "infoprice/oracle.hpp"

namespace infoprice {

struct OracleBound {
  double lower = 0.0;
  std::string lower_witness;
  double upper = 0.0;
  std::string upper_provenance = "opt-wel";
  // K = 2 only: the flow bound for the fully revealing structure (minimum
  // over both flow directions). Bounds menus over that fixed structure, not
  // the jointly optimal design.
  std::optional<double> fullrev_dual;
  std::string fullrev_dual_direction;
};

struct CertifyOptions {
  int max_support = 8;
  double binary_grid_step = 0.01;
  double binary_refine_step = 1e-6;
};

inline OracleBound certify(const ValueDistribution& dist,
                           const CertifyOptions& opts = {}) {
  if (dist.size() > opts.max_support)
    throw SizeLimitError("certify: support too large");
  OracleBound out;
  out.upper = optimal_welfare(dist);
  out.upper_provenance = "opt-wel";

  auto take = [&](double rev, const std::string& witness) {
    if (rev > out.lower) {
      out.lower = rev;
      out.lower_witness = witness;
    }
  };

  PartitionDesign pd = best_partition_design(dist, opts.max_support);
  take(pd.revenue, "partition-design");
  if (dist.size() == 2) {
    BinaryDesign bd =
        binary_support_optimal(dist, opts.binary_grid_step, opts.binary_refine_step);
    take(bd.lower, "binary-sweep");
    SignalStats st = signal_stats(dist, InformationStructure::full_disclosure(dist));
    if (st.num_signals() == 2) {
      int dir = 0;
      out.fullrev_dual = dual_bound_two_signals_best(st, &dir);
      out.fullrev_dual_direction = dir == 0 ? "s1->s2" : "s2->s1";
    }
  }
  take(uniform_half(dist).revenue, "uniform-half");
  take(two_price(dist).revenue, "two-price");
  if (dist.m == 2)
    take(best_of_three_two_products(dist).best.revenue, "best-of-three");
  if (full_surplus_condition(dist).holds) {
    Mechanism mech = induce_mechanism(dist, full_surplus_mechanism(dist));
    take(revenue(dist, mech), "full-surplus");
  }
  return out;
}

}  // namespace infoprice
