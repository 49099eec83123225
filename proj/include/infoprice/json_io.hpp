// JSON (de)serialization: instance files, mechanism certificates,
// construction certificates and oracle bounds. +inf prices are encoded as
// null; all numbers print locale-independently through nlohmann.
#pragma once

#include <fstream>

#include <json.hpp>

#include "infoprice/approx.hpp"
#include "infoprice/certify.hpp"
#include "infoprice/instances.hpp"
#include "infoprice/model.hpp"

namespace infoprice {

using Json = nlohmann::ordered_json;

inline Json spec_to_json(const GeneratorSpec& spec) {
  Json j;
  j["family"] = spec.family;
  j["seed"] = spec.seed;
  j["m"] = spec.m;
  j["m_max"] = spec.m_max;
  j["k_max"] = spec.k_max;
  if (spec.eps > 0.0) j["eps"] = spec.eps;
  if (spec.grid > 0) j["grid"] = spec.grid;
  return j;
}

inline GeneratorSpec spec_from_json(const Json& j) {
  GeneratorSpec spec;
  spec.family = j.at("family").get<std::string>();
  spec.seed = j.value("seed", 0ULL);
  spec.m = j.value("m", 0);
  spec.m_max = j.value("m_max", 5);
  spec.k_max = j.value("k_max", 12);
  spec.eps = j.value("eps", 0.0);
  spec.grid = j.value("grid", 0);
  return spec;
}

inline Json instance_to_json(const ValueDistribution& dist,
                             const GeneratorSpec* provenance = nullptr) {
  Json j;
  j["m"] = dist.m;
  j["support"] = dist.support;
  j["prob"] = dist.prob;
  if (!dist.name.empty()) j["name"] = dist.name;
  if (provenance) j["family"] = spec_to_json(*provenance);
  return j;
}

inline ValueDistribution instance_from_json(const Json& j) {
  if (!j.contains("m") || !j.contains("support") || !j.contains("prob"))
    throw std::invalid_argument(
        "instance: required fields are m, support, prob");
  return ValueDistribution(j.at("m").get<int>(), j.at("support").get<Mat>(),
                           j.at("prob").get<Vec>(),
                           j.value("name", std::string{}));
}

inline ValueDistribution load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    size_t line = 1, col = 1;
    for (size_t pos = 0; pos + 1 < e.byte && pos < text.size(); ++pos) {
      if (text[pos] == '\n') { ++line; col = 1; }
      else ++col;
    }
    throw std::runtime_error(path + ":" + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + e.what());
  }
  try {
    return instance_from_json(j);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline Json price_to_json(double p) {
  if (p == kInf) return nullptr;
  return p;
}

inline Json labels_to_json(const std::vector<SignalLabel>& labels) {
  Json out = Json::array();
  for (const SignalLabel& l : labels) {
    if (!l.products.empty()) out.push_back(l.products);
    else out.push_back(l.text);
  }
  return out;
}

inline Json mechanism_to_json(const Mechanism& mech, const Vec* prices = nullptr) {
  Json j;
  j["signals"] = labels_to_json(mech.info.signals);
  j["kernel"] = mech.info.kernel;
  if (prices) {
    Json pj = Json::array();
    for (double p : *prices) pj.push_back(price_to_json(p));
    j["prices"] = pj;
  } else {
    j["prices"] = nullptr;
  }
  j["alloc"] = mech.alloc;
  j["payments"] = mech.price;
  return j;
}

inline Json certificate_to_json(const ConstructionCertificate& cert) {
  Json j;
  j["branch"] = cert.branch;
  j["guarantee"] = cert.guarantee;
  j["revenue"] = cert.revenue;
  j["opt_wel"] = cert.opt_wel;
  j["ratio"] = cert.ratio();
  j["mechanism"] = mechanism_to_json(cert.mechanism, &cert.pricing.prices);
  return j;
}

inline Json oracle_bound_to_json(const OracleBound& b) {
  Json j;
  j["lower"] = b.lower;
  j["lower_witness"] = Json{{"source", b.lower_witness}, {"revenue", b.lower}};
  j["upper"] = b.upper;
  j["upper_provenance"] = b.upper_provenance;
  if (b.fullrev_dual) {
    j["fullrev_dual"] = Json{{"value", *b.fullrev_dual},
                             {"provenance", "dual-flow"},
                             {"direction", b.fullrev_dual_direction}};
  }
  return j;
}

}  // namespace infoprice
