#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "infoprice/instances.hpp"
#include "infoprice/json_io.hpp"

using namespace infoprice;

TEST_CASE("fixed instances match their stated shapes") {
  ValueDistribution ex1 = example_complex_info();
  CHECK(optimal_welfare(ex1) == Catch::Approx(5.6));
  Vec mu = ex1.prior_mean();
  CHECK(mu[0] == Catch::Approx(4.4));
  CHECK(mu[1] == Catch::Approx(4.2));

  ValueDistribution ex2 = example_lottery_opt();
  CHECK(optimal_welfare(ex2) == Catch::Approx(12.5));

  ValueDistribution tight = tight_uniform_example(0.01);
  CHECK(optimal_welfare(tight) == Catch::Approx(1.99).margin(1e-12));

  ValueDistribution l2 = two_item_hardness(0.01);
  CHECK(optimal_welfare(l2) == Catch::Approx(2.99).margin(1e-12));

  ValueDistribution b2 = appendix_no_full_surplus();
  CHECK(optimal_welfare(b2) == Catch::Approx(7.5));

  CHECK_THROWS_AS(tight_uniform_example(1.5), std::invalid_argument);
  CHECK_THROWS_AS(hart_nisan_arc(0, 0.1), std::invalid_argument);
}

TEST_CASE("arc geometry") {
  double eps = 0.02;
  int n = 4;
  ValueDistribution arc = hart_nisan_arc(n, eps);
  CHECK(arc.support[0][0] == Catch::Approx(1.0));
  CHECK(arc.support[0][1] == Catch::Approx(0.0).margin(1e-12));
  for (int i = 0; i <= n; ++i) {
    double wx = arc.prob[i] * arc.support[i][0];
    double wy = arc.prob[i] * arc.support[i][1];
    double angle = i * M_PI / (2.0 * n);
    CHECK(wx == Catch::Approx(std::cos(angle)).margin(3 * eps));
    CHECK(wy == Catch::Approx(std::sin(angle)).margin(3 * eps));
  }
}

TEST_CASE("b1 family masses and values") {
  int n = 5;
  ValueDistribution d = appendix_horizontal_subopt(n);
  double norm = 1.0 - std::pow(2.0, -n);
  for (int i = 1; i <= n; ++i) {
    CHECK(d.prob[i - 1] == Catch::Approx(1.0 / (std::pow(2.0, i) * norm)));
    for (int j = 0; j < n; ++j) {
      double expect = std::pow(2.0, i) + (j == i - 1 ? 1e-6 : 0.0);
      CHECK(d.support[i - 1][j] == Catch::Approx(expect).epsilon(1e-12));
    }
  }
  Vec mu = d.prior_mean();
  CHECK(mu[0] >= n / norm);
}

TEST_CASE("generators are deterministic per spec") {
  for (const char* family : {"correlated", "neg-affiliated", "exchangeable"}) {
    GeneratorSpec spec{family, 42};
    ValueDistribution a = make_instance(spec);
    ValueDistribution b = make_instance(spec);
    CHECK(a.support == b.support);
    CHECK(a.prob == b.prob);
    GeneratorSpec other{family, 43};
    ValueDistribution c = make_instance(other);
    CHECK((a.support != c.support || a.prob != c.prob));
  }
}

TEST_CASE("generated distributions satisfy their family contracts") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    GeneratorSpec ca{"correlated", seed};
    ValueDistribution c = random_correlated(ca);
    double tot = 0;
    for (double p : c.prob) tot += p;
    CHECK(tot == Catch::Approx(1.0).margin(1e-12));

    GeneratorSpec na{"neg-affiliated", seed};
    na.m = 2;
    ValueDistribution nd = random_neg_affiliated(na);
    CHECK(is_negatively_affiliated(nd).holds);
    CHECK(full_surplus_condition(nd).holds);

    GeneratorSpec ex{"exchangeable", seed};
    ValueDistribution ed = random_exchangeable(ex);
    CHECK(is_exchangeable(ed));
  }
}

TEST_CASE("two-scale family pushes the uniform ratio toward one half") {
  GeneratorSpec spec{"two-scale", 11};
  spec.eps = 1e-3;
  ValueDistribution d = random_correlated(spec);
  ConstructionCertificate c = uniform_half(d);
  CHECK(c.ratio() >= 0.5);
  CHECK(c.ratio() < 0.51);
}

TEST_CASE("instance JSON round-trip") {
  std::vector<ValueDistribution> fixtures = {
      example_complex_info(), example_lottery_opt(), hart_nisan_arc(4, 0.05),
      tight_uniform_example(0.01), two_item_hardness(0.01),
      appendix_horizontal_subopt(5), appendix_no_full_surplus()};
  for (const ValueDistribution& d : fixtures) {
    Json j = instance_to_json(d);
    ValueDistribution back = instance_from_json(Json::parse(j.dump()));
    CHECK(back.m == d.m);
    CHECK(back.support == d.support);
    CHECK(back.prob == d.prob);
    CHECK(back.name == d.name);
  }
}

TEST_CASE("malformed instance files report position context") {
  std::string path = "bad_instance_test.json";
  {
    std::ofstream out(path);
    out << "{\n  \"m\": 2,\n  \"support\": [[1, 2],\n";
  }
  try {
    load_instance(path);
    FAIL("expected parse error");
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    CHECK(msg.find(path) != std::string::npos);
    CHECK(msg.find(':') != std::string::npos);
  }
  std::remove(path.c_str());

  {
    std::ofstream out(path);
    out << "{\"m\": 2, \"support\": [[1, 2]]}";
  }
  CHECK_THROWS_WITH(load_instance(path),
                    Catch::Matchers::ContainsSubstring("prob"));
  std::remove(path.c_str());
}

TEST_CASE("generator spec JSON round-trip") {
  GeneratorSpec spec{"neg-affiliated", 99};
  spec.m = 3;
  spec.grid = 2;
  GeneratorSpec back = spec_from_json(Json::parse(spec_to_json(spec).dump()));
  CHECK(back.family == spec.family);
  CHECK(back.seed == spec.seed);
  CHECK(back.m == spec.m);
  CHECK(back.grid == spec.grid);
}
