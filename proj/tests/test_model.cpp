#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "infoprice/instances.hpp"
#include "infoprice/model.hpp"

using namespace infoprice;

namespace {

InformationStructure pool_last_two() {
  // ex1 pooling: {(10,5)} separate, {(6,5),(0,3)} pooled
  return InformationStructure(
      {SignalLabel::named("hi"), SignalLabel::named("lo")},
      {{1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0}});
}

std::mt19937_64 test_rng(uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(ValueDistribution(2, {{1, 2}}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(ValueDistribution(2, {{1, 2}, {1, 2}}, {0.5, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ValueDistribution(2, {{1, -2}}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ValueDistribution(2, {{1, 2}, {2, 1}}, {0.9, 0.2}),
                  std::invalid_argument);
  CHECK_NOTHROW(ValueDistribution(1, {{0.0}}, {1.0}));
}

TEST_CASE("signal stats on the hardness instance") {
  ValueDistribution dist = two_item_hardness(0.25);
  SignalStats st = signal_stats(dist, InformationStructure::full_disclosure(dist));
  REQUIRE(st.num_signals() == 2);
  CHECK(st.r[0] == Catch::Approx(0.75).epsilon(1e-12));
  CHECK(st.r[1] == Catch::Approx(0.25).epsilon(1e-12));
  CHECK(st.nu[0][0] == Catch::Approx(1.0));
  CHECK(st.nu[0][1] == Catch::Approx(0.0));
  CHECK(st.nu[1][0] == Catch::Approx(4.0));
  CHECK(st.nu[1][1] == Catch::Approx(8.0));
}

TEST_CASE("no-information stats equal the prior mean") {
  ValueDistribution dist = example_complex_info();
  SignalStats st = signal_stats(dist, InformationStructure::no_information(dist));
  REQUIRE(st.num_signals() == 1);
  CHECK(st.r[0] == Catch::Approx(1.0));
  CHECK(st.nu[0][0] == Catch::Approx(4.4));
  CHECK(st.nu[0][1] == Catch::Approx(4.2));
}

TEST_CASE("pooled posterior via Bayes") {
  ValueDistribution dist = example_complex_info();
  SignalStats st = signal_stats(dist, pool_last_two());
  REQUIRE(st.num_signals() == 2);
  CHECK(st.nu[1][0] == Catch::Approx(3.0));
  CHECK(st.nu[1][1] == Catch::Approx(4.0));
}

TEST_CASE("buyer choice") {
  SECTION("buys at zero surplus") {
    BuyerChoice ch = buyer_choice({3, 4}, {9, 4});
    CHECK(ch.item == 1);
    CHECK(ch.payment == 4.0);
  }
  SECTION("nothing offered") {
    BuyerChoice ch = buyer_choice({5, 5}, {kInf, kInf});
    CHECK(ch.item == -1);
    CHECK(ch.payment == 0.0);
  }
  SECTION("seller-optimal tie-break picks the higher price") {
    BuyerChoice ch = buyer_choice({10, 5}, {9, 4});
    CHECK(ch.item == 0);
    CHECK(ch.payment == 9.0);
  }
}

TEST_CASE("pooling plus prices (9,4) earns 5 on ex1") {
  ValueDistribution dist = example_complex_info();
  PricingMechanism pm{pool_last_two(), {9, 4}};
  Mechanism mech = induce_mechanism(dist, pm);
  CHECK(revenue(dist, mech) == Catch::Approx(5.0).margin(1e-12));
  CHECK(welfare(dist, mech) == Catch::Approx(5.2).margin(1e-12));
  CHECK(audit_ic_ir(dist, mech).clean());
}

TEST_CASE("tight example full disclosure best response") {
  ValueDistribution dist = tight_uniform_example(0.1);
  PricingMechanism pm{InformationStructure::full_disclosure(dist), {10, 1}};
  Mechanism mech = induce_mechanism(dist, pm);
  // the low type buys product 2 at 1, the high type product 1 at 10
  CHECK(mech.alloc[0][1] == 1.0);
  CHECK(mech.price[0] == 1.0);
  CHECK(mech.alloc[1][0] == 1.0);
  CHECK(mech.price[1] == 10.0);
  CHECK(revenue(dist, mech) == Catch::Approx(1.9).margin(1e-12));
}

TEST_CASE("audit flags forced overpriced allocation") {
  ValueDistribution dist = example_complex_info();
  InformationStructure info = pool_last_two();
  // force the high signal to buy product 1 at 10: deviating to the pooled
  // option (product 2 at 4) gains 1
  Mechanism forced(info, {{1, 0}, {0, 1}}, {10, 4});
  AuditReport rep = audit_ic_ir(dist, forced);
  REQUIRE_FALSE(rep.clean());
  CHECK(rep.max_violation == Catch::Approx(1.0));
  CHECK_THROWS_AS(revenue(dist, forced), MechanismRejected);

  Mechanism ok(info, {{1, 0}, {0, 1}}, {8, 4});
  CHECK(audit_ic_ir(dist, ok).clean());
  CHECK(revenue(dist, ok) == Catch::Approx(0.2 * 8 + 0.8 * 4));
}

TEST_CASE("optimal welfare") {
  CHECK(optimal_welfare(two_item_hardness(0.5)) == Catch::Approx(2.5));
  CHECK(optimal_welfare(ValueDistribution(2, {{5, 4}}, {1.0})) == 5.0);
  CHECK(optimal_welfare(appendix_no_full_surplus()) == Catch::Approx(7.5));
}

TEST_CASE("Bayes plausibility on random structures") {
  auto g = test_rng(2024);
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(g() >> 11) * 0x1.0p-53);
  };
  for (int trial = 0; trial < 1000; ++trial) {
    int m = 1 + static_cast<int>(g() % 4);
    int k = 1 + static_cast<int>(g() % 6);
    Mat support;
    Vec prob(k);
    std::set<Vec> seen;
    while (static_cast<int>(seen.size()) < k) {
      Vec v(m);
      for (double& x : v) x = uni(0, 10);
      seen.insert(std::move(v));
    }
    support.assign(seen.begin(), seen.end());
    double tot = 0;
    for (double& p : prob) tot += (p = uni(0.01, 1));
    for (double& p : prob) p /= tot;
    double s2 = 0;
    for (double p : prob) s2 += p;
    prob.back() += 1.0 - s2;
    ValueDistribution dist(m, support, prob);

    int s = 1 + static_cast<int>(g() % 4);
    Mat kernel(k, Vec(s, 0.0));
    for (int kk = 0; kk < k; ++kk) {
      double rt = 0;
      for (int j = 0; j < s; ++j) rt += (kernel[kk][j] = uni(0, 1));
      for (int j = 0; j < s; ++j) kernel[kk][j] /= rt;
      double r2 = 0;
      for (int j = 0; j < s; ++j) r2 += kernel[kk][j];
      kernel[kk][s - 1] += 1.0 - r2;
    }
    std::vector<SignalLabel> labels;
    for (int j = 0; j < s; ++j) labels.push_back(SignalLabel::named("s" + std::to_string(j)));
    SignalStats st = signal_stats(dist, InformationStructure(labels, kernel));

    double rsum = 0;
    Vec mean(m, 0.0);
    for (int j = 0; j < st.num_signals(); ++j) {
      rsum += st.r[j];
      for (int i = 0; i < m; ++i) mean[i] += st.r[j] * st.nu[j][i];
    }
    Vec prior = dist.prior_mean();
    CHECK(rsum == Catch::Approx(1.0).margin(1e-9));
    for (int i = 0; i < m; ++i)
      CHECK(mean[i] == Catch::Approx(prior[i]).margin(1e-9));
  }
}

TEST_CASE("merging signals preserves the mass-weighted posterior sum") {
  ValueDistribution dist = example_complex_info();
  InformationStructure info = InformationStructure::full_disclosure(dist);
  SignalStats before = signal_stats(dist, info);
  InformationStructure merged = merge_signals(info, 0, 2);
  SignalStats after = signal_stats(dist, merged);
  Vec a(dist.m, 0.0), b(dist.m, 0.0);
  for (int j = 0; j < before.num_signals(); ++j)
    for (int i = 0; i < dist.m; ++i) a[i] += before.r[j] * before.nu[j][i];
  for (int j = 0; j < after.num_signals(); ++j)
    for (int i = 0; i < dist.m; ++i) b[i] += after.r[j] * after.nu[j][i];
  for (int i = 0; i < dist.m; ++i) CHECK(a[i] == Catch::Approx(b[i]).margin(1e-12));
}

TEST_CASE("revenue bounded by welfare for audited mechanisms") {
  auto g = test_rng(77);
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(g() >> 11) * 0x1.0p-53);
  };
  int accepted = 0;
  for (int trial = 0; trial < 400; ++trial) {
    GeneratorSpec spec{"correlated", 9000 + static_cast<uint64_t>(trial)};
    spec.m_max = 3;
    spec.k_max = 5;
    ValueDistribution dist = random_correlated(spec);
    Vec prices(dist.m);
    for (double& p : prices) p = uni(0, 12);
    PricingMechanism pm{InformationStructure::full_disclosure(dist), prices};
    Mechanism mech = induce_mechanism(dist, pm);
    if (!audit_ic_ir(dist, mech).clean()) continue;
    ++accepted;
    CHECK(revenue(dist, mech) <= welfare(dist, mech) + 1e-9);
    CHECK(welfare(dist, mech) <= optimal_welfare(dist) + 1e-9);
  }
  CHECK(accepted > 100);
}
