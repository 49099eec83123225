// Command-line front end: load or generate instances, run the constructions
// and oracles, reproduce the bundled example values, and benchmark families.
#include <clocale>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "infoprice/json_io.hpp"
#include "infoprice/reproduce.hpp"

namespace {

using namespace infoprice;

struct RunConfig {
  std::string example;
  std::string instance_path;
  std::string family;
  double eps = 0.0;
  int n = 0;
  int m = 0;
  double tolerance = kTol;
  std::string format = "json";
  uint64_t seed = 0;
  int count = 0;
  int jobs = 1;
  std::string out_path;
};

ValueDistribution builtin_example(const RunConfig& cfg) {
  const std::string& id = cfg.example;
  double eps = cfg.eps;
  if (id == "ex1") return example_complex_info();
  if (id == "ex2") return example_lottery_opt();
  if (id == "a6") return appendix_pricing_subopt();
  if (id == "arc") return hart_nisan_arc(cfg.n > 0 ? cfg.n : 4, eps > 0 ? eps : 0.05);
  if (id == "tight-uniform") return tight_uniform_example(eps > 0 ? eps : 0.1);
  if (id == "lemma2") return two_item_hardness(eps > 0 ? eps : 0.01);
  if (id == "b1") return appendix_horizontal_subopt(cfg.n > 0 ? cfg.n : 5);
  if (id == "b2") return appendix_no_full_surplus();
  throw std::invalid_argument(
      "unknown example id '" + id +
      "' (expected ex1, ex2, arc, tight-uniform, lemma2, a6, b1, b2)");
}

ValueDistribution resolve_instance(const RunConfig& cfg) {
  int sources = !cfg.example.empty() + !cfg.instance_path.empty() + !cfg.family.empty();
  if (sources != 1)
    throw std::invalid_argument(
        "exactly one of --example, --instance, --family is required");
  if (!cfg.example.empty()) return builtin_example(cfg);
  if (!cfg.instance_path.empty()) return load_instance(cfg.instance_path);
  GeneratorSpec spec{cfg.family, cfg.seed};
  spec.m = cfg.m;
  if (cfg.eps > 0) spec.eps = cfg.eps;
  return make_instance(spec);
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path);
  if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
  out << text;
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

int cmd_solve(const RunConfig& cfg) {
  ValueDistribution dist = resolve_instance(cfg);
  double optw = optimal_welfare(dist);
  bool ok = true;
  Json report;
  report["instance"] = Json{{"name", dist.name},
                            {"m", dist.m},
                            {"support_size", dist.size()},
                            {"opt_wel", optw}};

  ConstructionCertificate uni = uniform_half(dist);
  ok &= uni.revenue >= uni.guarantee * optw - 1e-6;
  ok &= audit_ic_ir(dist, uni.mechanism, cfg.tolerance).clean(cfg.tolerance);
  report["uniform_half"] = certificate_to_json(uni);

  ConstructionCertificate two = two_price(dist, {}, &uni);
  ok &= two.revenue >= two.guarantee * optw - 1e-6;
  ok &= two.revenue >= uni.revenue - 1e-9;
  report["two_price"] = certificate_to_json(two);

  if (dist.m == 2) {
    BestOfThreeResult b3 = best_of_three_two_products(dist);
    ok &= b3.best.revenue >= b3.best.guarantee * optw - 1e-6;
    Json j = certificate_to_json(b3.best);
    j["m1_revenue"] = b3.revenues[0];
    j["m2_revenue"] = b3.revenues[1];
    j["m3_revenue"] = b3.revenues[2];
    report["best_of_three"] = j;
  }

  ConditionResult cond = full_surplus_condition(dist, cfg.tolerance);
  Json fs;
  fs["condition"] = cond.holds;
  if (!cond.holds)
    fs["witness"] = Json::array({cond.witness_i, cond.witness_ip});
  if (cond.holds) {
    PricingMechanism pm = full_surplus_mechanism(dist);
    Mechanism mech = induce_mechanism(dist, pm);
    double rev = revenue(dist, mech, cfg.tolerance);
    ok &= std::fabs(rev - optw) <= 1e-6 * std::max(1.0, optw);
    fs["revenue"] = rev;
    fs["mechanism"] = mechanism_to_json(mech, &pm.prices);
  }
  report["full_surplus"] = fs;

  if (dist.size() <= 8) {
    OracleBound b = certify(dist);
    ok &= b.lower <= b.upper + 1e-6;
    report["oracle"] = oracle_bound_to_json(b);
  }
  report["pass"] = ok;

  if (cfg.format == "table") {
    std::ostringstream os;
    os << "instance " << (dist.name.empty() ? "(file)" : dist.name)
       << "  m=" << dist.m << " K=" << dist.size() << "\n"
       << "opt_wel            " << fixed6(optw) << "\n"
       << "uniform_half       rev=" << fixed6(uni.revenue)
       << " ratio=" << fixed6(uni.ratio()) << "\n"
       << "two_price          rev=" << fixed6(two.revenue)
       << " ratio=" << fixed6(two.ratio()) << " branch=" << two.branch << "\n";
    if (report.contains("best_of_three"))
      os << "best_of_three      rev="
         << fixed6(report["best_of_three"]["revenue"].get<double>()) << "\n";
    os << "full_surplus       " << (cond.holds ? "holds" : "fails") << "\n";
    if (report.contains("oracle"))
      os << "oracle             [" << fixed6(report["oracle"]["lower"].get<double>())
         << ", " << fixed6(report["oracle"]["upper"].get<double>()) << "]\n";
    os << (ok ? "PASS" : "FAIL") << "\n";
    emit(cfg, os.str());
  } else {
    emit(cfg, report.dump(2) + "\n");
  }
  return ok ? 0 : 1;
}

int cmd_check(const RunConfig& cfg) {
  ValueDistribution dist = resolve_instance(cfg);
  PairWitness aff = is_negatively_affiliated(dist);
  bool exch = is_exchangeable(dist);
  ConditionResult cond = full_surplus_condition(dist, cfg.tolerance);
  Json report;
  report["negatively_affiliated"] = Json{{"holds", aff.holds}};
  if (!aff.holds)
    report["negatively_affiliated"]["witness"] =
        Json::array({dist.support[aff.k1], dist.support[aff.k2]});
  report["exchangeable"] = exch;
  report["full_surplus_condition"] = Json{{"holds", cond.holds}};
  if (!cond.holds)
    report["full_surplus_condition"]["witness"] =
        Json::array({cond.witness_i, cond.witness_ip});
  bool ok = aff.holds && exch && cond.holds;
  report["pass"] = ok;
  if (cfg.format == "table") {
    std::ostringstream os;
    os << "negatively_affiliated   " << (aff.holds ? "true" : "false") << "\n"
       << "exchangeable            " << (exch ? "true" : "false") << "\n"
       << "full_surplus_condition  " << (cond.holds ? "true" : "false") << "\n";
    emit(cfg, os.str());
  } else {
    emit(cfg, report.dump(2) + "\n");
  }
  return ok ? 0 : 1;
}

int cmd_reproduce(const RunConfig& cfg) {
  std::vector<CheckRow> rows = run_reproduction();
  int failures = 0;
  for (const CheckRow& r : rows) failures += r.pass ? 0 : 1;
  std::ostringstream os;
  if (cfg.format == "csv") {
    os << "id,statement,computed,cmp,expected,tolerance,pass\n";
    for (const CheckRow& r : rows) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.3g", r.computed,
                    r.cmp.c_str(), r.expected, r.tolerance);
      os << r.id << ",\"" << r.statement << "\"," << buf << ","
         << (r.pass ? "true" : "false") << "\n";
    }
  } else if (cfg.format == "table") {
    for (const CheckRow& r : rows) {
      char buf[512];
      std::snprintf(buf, sizeof buf, "%s  %-34s %14.6f %2s %14.6f  %s\n",
                    r.pass ? "PASS" : "FAIL", r.id.c_str(), r.computed,
                    r.cmp.c_str(), r.expected, r.statement.c_str());
      os << buf;
    }
    os << rows.size() << " checks, " << failures << " failed\n";
  } else {
    Json j = Json::array();
    for (const CheckRow& r : rows)
      j.push_back(Json{{"id", r.id},
                       {"statement", r.statement},
                       {"computed", r.computed},
                       {"cmp", r.cmp},
                       {"expected", r.expected},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass}});
    os << j.dump(2) << "\n";
  }
  emit(cfg, os.str());
  return failures == 0 ? 0 : 1;
}

struct BenchRow {
  uint64_t seed = 0;
  std::string family;
  int k = 0, m = 0;
  double opt_wel = 0.0, uniform_ratio = 0.0, two_price_ratio = 0.0,
         oracle_lower_ratio = 0.0;
  bool has_oracle = false;
  std::string error;
};

BenchRow bench_one(const std::string& family, uint64_t seed, int m, double eps) {
  BenchRow row;
  row.seed = seed;
  row.family = family;
  try {
    GeneratorSpec spec{family, seed};
    spec.m = m;
    if (eps > 0) spec.eps = eps;
    ValueDistribution dist = make_instance(spec);
    row.k = dist.size();
    row.m = dist.m;
    row.opt_wel = optimal_welfare(dist);
    ConstructionCertificate uni = uniform_half(dist);
    ConstructionCertificate two = two_price(dist, {}, &uni);
    row.uniform_ratio = uni.ratio();
    row.two_price_ratio = two.ratio();
    if (dist.size() <= 8) {
      CertifyOptions opts;
      opts.binary_grid_step = 0.02;
      OracleBound b = certify(dist, opts);
      row.oracle_lower_ratio = row.opt_wel > 0 ? b.lower / row.opt_wel : 1.0;
      row.has_oracle = true;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

int cmd_bench(const RunConfig& cfg) {
  if (cfg.family.empty())
    throw std::invalid_argument("bench requires --family");
  const int count = cfg.count > 0 ? cfg.count : 100;
  std::vector<BenchRow> rows(count);
  const int jobs = std::max(1, cfg.jobs);
  std::vector<std::thread> workers;
  std::atomic<int> next{0};
  for (int w = 0; w < jobs; ++w)
    workers.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        rows[i] = bench_one(cfg.family, cfg.seed + static_cast<uint64_t>(i),
                            cfg.m, cfg.eps);
      }
    });
  for (auto& t : workers) t.join();

  std::ostringstream os;
  os << "seed,family,K,m,opt_wel,uniform_ratio,two_price_ratio,oracle_lower_"
        "ratio,error\n";
  double min_u = kInf, sum_u = 0, min_t = kInf, sum_t = 0;
  int valid = 0;
  for (const BenchRow& r : rows) {
    char buf[256];
    if (r.error.empty()) {
      std::snprintf(buf, sizeof buf, "%llu,%s,%d,%d,%.17g,%.17g,%.17g,",
                    static_cast<unsigned long long>(r.seed), r.family.c_str(),
                    r.k, r.m, r.opt_wel, r.uniform_ratio, r.two_price_ratio);
      os << buf;
      if (r.has_oracle) {
        std::snprintf(buf, sizeof buf, "%.17g", r.oracle_lower_ratio);
        os << buf;
      }
      os << ",\n";
      min_u = std::min(min_u, r.uniform_ratio);
      min_t = std::min(min_t, r.two_price_ratio);
      sum_u += r.uniform_ratio;
      sum_t += r.two_price_ratio;
      ++valid;
    } else {
      os << r.seed << "," << r.family << ",,,,,,,\"" << r.error << "\"\n";
    }
  }
  if (valid > 0) {
    os << "min,,,,," << min_u << "," << min_t << ",,\n";
    os << "mean,,,,," << sum_u / valid << "," << sum_t / valid << ",,\n";
  }
  emit(cfg, os.str());
  for (const BenchRow& r : rows)
    if (!r.error.empty()) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{"pricing with seller-designed information disclosure"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool instance_opts) {
    if (instance_opts) {
      sub->add_option("--example", cfg.example, "builtin example id");
      sub->add_option("--instance", cfg.instance_path, "instance JSON path");
    }
    sub->add_option("--family", cfg.family,
                    "generator family (correlated, two-scale, neg-affiliated, "
                    "exchangeable)");
    sub->add_option("--eps", cfg.eps, "family/example parameter");
    sub->add_option("--n", cfg.n, "example size parameter");
    sub->add_option("--m", cfg.m, "number of products for generators");
    sub->add_option("--tolerance", cfg.tolerance, "comparison tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "json | table | csv");
    sub->add_option("--seed", cfg.seed, "generator seed");
    sub->add_option("--jobs", cfg.jobs, "parallel workers (bench)");
    sub->add_option("--out", cfg.out_path, "write output to a file");
  };

  CLI::App* solve = app.add_subcommand("solve", "run constructions and oracle");
  add_common(solve, true);
  CLI::App* check = app.add_subcommand("check", "distributional conditions");
  add_common(check, true);
  CLI::App* repro =
      app.add_subcommand("reproduce", "evaluate the bundled example checklist");
  add_common(repro, false);
  CLI::App* bench = app.add_subcommand("bench", "sweep a generator family");
  add_common(bench, false);
  bench->add_option("--count", cfg.count, "number of instances");

  CLI11_PARSE(app, argc, argv);
  try {
    if (solve->parsed()) return cmd_solve(cfg);
    if (check->parsed()) return cmd_check(cfg);
    if (repro->parsed()) return cmd_reproduce(cfg);
    if (bench->parsed()) return cmd_bench(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
