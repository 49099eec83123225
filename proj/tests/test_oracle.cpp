#include <catch2/catch_amalgamated.hpp>

#include "infoprice/certify.hpp"
#include "infoprice/instances.hpp"
#include "infoprice/oracle.hpp"

using namespace infoprice;

namespace {

SignalStats full_stats(const ValueDistribution& d) {
  return signal_stats(d, InformationStructure::full_disclosure(d));
}

SignalStats random_two_signal_stats(std::mt19937_64& g, int m) {
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(g() >> 11) * 0x1.0p-53);
  };
  SignalStats st;
  double r1 = uni(0.05, 0.95);
  st.r = {r1, 1.0 - r1};
  st.nu.assign(2, Vec(m));
  for (Vec& nu : st.nu)
    for (double& x : nu) x = uni(0.0, 10.0);
  return st;
}

}  // namespace

TEST_CASE("optimal menu LP basics") {
  SECTION("single posterior sells the best product at its mean") {
    ValueDistribution d = example_complex_info();
    MenuSolution ms =
        optimal_menu_lp(signal_stats(d, InformationStructure::no_information(d)));
    CHECK(ms.revenue == Catch::Approx(4.4).margin(1e-9));
  }
  SECTION("ex2 full disclosure reaches 12.25 with a lottery") {
    MenuSolution ms = optimal_menu_lp(full_stats(example_lottery_opt()));
    CHECK(ms.revenue == Catch::Approx(12.25).margin(1e-9));
  }
  SECTION("hardness instance capped by the dual bound") {
    double eps = 0.01;
    SignalStats st = full_stats(two_item_hardness(eps));
    MenuSolution ms = optimal_menu_lp(st);
    CHECK(ms.revenue <= 2.0 + 2.0 * eps + 1e-9);
  }
}

TEST_CASE("menu LP dominates pricing over the same signals") {
  std::mt19937_64 g(5150);
  for (int trial = 0; trial < 60; ++trial) {
    GeneratorSpec spec{"correlated", 4000 + static_cast<uint64_t>(trial)};
    spec.m_max = 3;
    spec.k_max = 4;
    ValueDistribution dist = random_correlated(spec);
    SignalStats st = full_stats(dist);
    MenuSolution menu = optimal_menu_lp(st);
    PricingSolution pricing = best_pricing_for_stats(st);
    CHECK(menu.revenue >= pricing.revenue - 1e-7);
  }
}

TEST_CASE("partition oracle on ex1 and b2") {
  SECTION("ex1 best partition pools the low types and beats 5") {
    PartitionDesign pd = best_partition_design(example_complex_info());
    CHECK(pd.revenue >= 5.0 - 1e-9);
    CHECK(pd.partition == std::vector<int>{0, 1, 1});
    CHECK(pd.all.size() == 5);  // Bell(3)
  }
  SECTION("trivial partition is optimal for b2") {
    PartitionDesign pd = best_partition_design(appendix_no_full_surplus());
    CHECK(pd.revenue == Catch::Approx(7.0).margin(1e-9));
  }
  SECTION("K = 1 distribution bundles at the top mean") {
    ValueDistribution d(2, {{5, 4}}, {1.0});
    CHECK(best_partition_design(d).revenue == Catch::Approx(5.0).margin(1e-9));
  }
  CHECK_THROWS_AS(best_partition_design(appendix_horizontal_subopt(9), 8),
                  SizeLimitError);
}

TEST_CASE("efficient-allocation-constrained design on ex1") {
  CHECK(best_efficient_partition_design(example_complex_info()) ==
        Catch::Approx(4.4).margin(1e-9));
}

TEST_CASE("binary support sweep") {
  SECTION("ex2 lottery corner") {
    BinaryDesign bd = binary_support_optimal(example_lottery_opt(), 0.05);
    CHECK(bd.lower >= 12.25 - 1e-3);
    CHECK(bd.lower <= bd.upper + 1e-6);
    CHECK(bd.upper == Catch::Approx(12.5));
  }
  SECTION("tight example approaches full disclosure pricing") {
    BinaryDesign bd = binary_support_optimal(tight_uniform_example(0.1), 0.05);
    CHECK(bd.lower >= 1.9 - 1e-6);
  }
  SECTION("hardness instance stays below the dual cap on the whole grid") {
    double eps = 0.01;
    BinaryDesign bd = binary_support_optimal(two_item_hardness(eps), 0.05);
    CHECK(bd.lower <= 2.0 + 2.0 * eps + 1e-3);
  }
  SECTION("refining never loses revenue") {
    for (uint64_t seed = 40; seed < 50; ++seed) {
      GeneratorSpec spec{"correlated", seed};
      spec.m_max = 3;
      spec.k_max = 2;
      ValueDistribution dist = random_correlated(spec);
      if (dist.size() != 2) continue;
      BinaryDesign coarse = binary_support_optimal(dist, 0.1, 1e-4);
      BinaryDesign fine = binary_support_optimal(dist, 0.05, 1e-4);
      CHECK(fine.lower >= coarse.lower - 1e-12);
    }
  }
  CHECK_THROWS_AS(binary_support_optimal(example_complex_info()),
                  std::invalid_argument);
}

TEST_CASE("two-signal dual bound") {
  SECTION("hardness instance, flow out of the high signal") {
    double eps = 0.01;
    SignalStats st = full_stats(two_item_hardness(eps));
    // source = the rare high signal (index 1)
    double bound = dual_bound_two_signals(st, st.r[1], 1);
    CHECK(bound == Catch::Approx(2.0).margin(1e-9));
    CHECK(bound <= 2.0 + 2.0 * eps + 1e-9);
    CHECK(dual_bound_two_signals_best(st) == Catch::Approx(2.0).margin(1e-9));
  }
  SECTION("zero flow reduces to posterior maxima") {
    SignalStats st = full_stats(appendix_no_full_surplus());
    double bound = dual_bound_two_signals(st, 0.0, 0);
    CHECK(bound == Catch::Approx(0.5 * 5 + 0.5 * 10));
  }
  SECTION("dominates the menu LP on random stats") {
    std::mt19937_64 g(31337);
    for (int trial = 0; trial < 200; ++trial) {
      SignalStats st = random_two_signal_stats(g, 2 + trial % 2);
      double lp = optimal_menu_lp(st).revenue;
      CHECK(dual_bound_two_signals(st, st.r[0], 0) >= lp - 1e-7);
      CHECK(dual_bound_two_signals(st, st.r[1], 1) >= lp - 1e-7);
    }
  }
  SECTION("argument checks") {
    SignalStats st = full_stats(appendix_no_full_surplus());
    CHECK_THROWS_AS(dual_bound_two_signals(st, 2.0, 0), std::invalid_argument);
    SignalStats one;
    one.r = {1.0};
    one.nu = {{1.0, 2.0}};
    CHECK_THROWS_AS(dual_bound_two_signals(one, 0.5, 0), std::invalid_argument);
  }
}

TEST_CASE("certify brackets") {
  SECTION("b2: strict gap") {
    OracleBound b = certify(appendix_no_full_surplus());
    CHECK(b.lower == Catch::Approx(7.0).margin(1e-3));
    CHECK(b.upper == Catch::Approx(7.5));
    CHECK(b.lower < b.upper - 0.4);
    REQUIRE(b.fullrev_dual.has_value());
    CHECK(*b.fullrev_dual == Catch::Approx(5.5).margin(1e-9));
  }
  SECTION("exchangeable instance closes the bracket") {
    GeneratorSpec spec{"exchangeable", 7};
    spec.m = 2;
    ValueDistribution d = random_exchangeable(spec);
    if (d.size() <= 8) {
      OracleBound b = certify(d);
      CHECK(b.lower == Catch::Approx(b.upper).margin(1e-6));
      CHECK(b.lower_witness != "");
    }
  }
  SECTION("a6: lottery beats every pricing design") {
    OracleBound b = certify(appendix_pricing_subopt());
    CHECK(b.lower >= 12.25 - 1e-3);
    CHECK(b.upper == Catch::Approx(12.5));
    SignalStats st = full_stats(appendix_pricing_subopt());
    CHECK(best_pricing_for_stats(st).revenue <= 12.0 + 1e-6);
  }
}

TEST_CASE("certify lower bounds stay below upper on random instances") {
  for (uint64_t seed = 600; seed < 640; ++seed) {
    GeneratorSpec spec{"correlated", seed};
    spec.m_max = 3;
    spec.k_max = 6;
    ValueDistribution dist = random_correlated(spec);
    if (dist.size() > 6) continue;
    CertifyOptions opts;
    opts.binary_grid_step = 0.05;
    OracleBound b = certify(dist, opts);
    CHECK(b.lower <= b.upper + 1e-6);
  }
}
