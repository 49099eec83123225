// Core model: value distributions, information structures, posteriors,
// mechanisms, buyer best response and the IC/IR audit.
//
// All types are immutable after construction; every operation is a pure
// function of its inputs, so instances can be shared freely across threads.
#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "infoprice/common.hpp"

namespace infoprice {

// Finite-support joint distribution over nonnegative value vectors.
struct ValueDistribution {
  int m = 0;
  Mat support;  // K x m
  Vec prob;     // K, strictly positive, sums to one
  std::string name;

  ValueDistribution(int m_, Mat support_, Vec prob_, std::string name_ = "")
      : m(m_), support(std::move(support_)), prob(std::move(prob_)),
        name(std::move(name_)) {
    validate();
  }

  int size() const { return static_cast<int>(support.size()); }

  Vec prior_mean() const {
    Vec mu(m, 0.0);
    for (int k = 0; k < size(); ++k)
      for (int i = 0; i < m; ++i) mu[i] += prob[k] * support[k][i];
    return mu;
  }

 private:
  void validate() const {
    if (m < 1) throw std::invalid_argument("ValueDistribution: need m >= 1");
    if (support.empty()) throw std::invalid_argument("ValueDistribution: empty support");
    if (support.size() != prob.size())
      throw std::invalid_argument("ValueDistribution: support/prob size mismatch");
    double total = 0.0;
    for (size_t k = 0; k < support.size(); ++k) {
      if (static_cast<int>(support[k].size()) != m)
        throw std::invalid_argument("ValueDistribution: support vector dimension mismatch");
      for (double v : support[k])
        if (!(v >= 0.0)) throw std::invalid_argument("ValueDistribution: negative value");
      if (!(prob[k] > 0.0))
        throw std::invalid_argument("ValueDistribution: probabilities must be positive");
      total += prob[k];
    }
    if (std::fabs(total - 1.0) > kMassTol)
      throw std::invalid_argument("ValueDistribution: probabilities do not sum to 1");
    for (size_t a = 0; a < support.size(); ++a)
      for (size_t b = a + 1; b < support.size(); ++b)
        if (support[a] == support[b])
          throw std::invalid_argument("ValueDistribution: duplicate support point");
  }
};

// Signal label: a product subset for (coarse) horizontal disclosure, or an
// opaque text label for generic structures.
struct SignalLabel {
  std::vector<int> products;  // sorted, 0-based; empty when text is used
  std::string text;

  static SignalLabel subset(std::vector<int> prods) {
    std::sort(prods.begin(), prods.end());
    prods.erase(std::unique(prods.begin(), prods.end()), prods.end());
    return SignalLabel{std::move(prods), ""};
  }
  static SignalLabel named(std::string t) { return SignalLabel{{}, std::move(t)}; }

  bool contains(int product) const {
    return std::binary_search(products.begin(), products.end(), product);
  }
  std::string str() const {
    if (!text.empty() || products.empty()) return text;
    std::ostringstream os;
    os << '{';
    for (size_t i = 0; i < products.size(); ++i)
      os << (i ? "," : "") << products[i];
    os << '}';
    return os.str();
  }
};

// Commitment (S, sigma): a row-stochastic kernel from support points to signals.
struct InformationStructure {
  std::vector<SignalLabel> signals;
  Mat kernel;  // K x S

  InformationStructure() = default;  // empty placeholder
  InformationStructure(std::vector<SignalLabel> signals_, Mat kernel_)
      : signals(std::move(signals_)), kernel(std::move(kernel_)) {
    validate_and_prune();
  }

  int num_signals() const { return static_cast<int>(signals.size()); }

  static InformationStructure no_information(const ValueDistribution& dist) {
    std::vector<int> all(dist.m);
    for (int i = 0; i < dist.m; ++i) all[i] = i;
    return InformationStructure({SignalLabel::subset(all)},
                                Mat(dist.size(), Vec(1, 1.0)));
  }

  static InformationStructure full_disclosure(const ValueDistribution& dist) {
    const int k = dist.size();
    Mat kernel(k, Vec(k, 0.0));
    std::vector<SignalLabel> labels;
    for (int i = 0; i < k; ++i) {
      kernel[i][i] = 1.0;
      labels.push_back(SignalLabel::named("v" + std::to_string(i)));
    }
    return InformationStructure(std::move(labels), std::move(kernel));
  }

 private:
  void validate_and_prune() {
    if (kernel.empty() || signals.empty())
      throw std::invalid_argument("InformationStructure: empty");
    const int s = num_signals();
    for (const Vec& row : kernel) {
      if (static_cast<int>(row.size()) != s)
        throw std::invalid_argument("InformationStructure: kernel width mismatch");
      double total = 0.0;
      for (double p : row) {
        if (p < -kMassTol || p > 1.0 + kMassTol)
          throw std::invalid_argument("InformationStructure: kernel entry outside [0,1]");
        total += p;
      }
      if (std::fabs(total - 1.0) > kMassTol)
        throw std::invalid_argument("InformationStructure: kernel row does not sum to 1");
    }
    // Prune all-zero signal columns.
    std::vector<int> keep;
    for (int j = 0; j < s; ++j) {
      bool live = false;
      for (const Vec& row : kernel)
        if (row[j] > 0.0) { live = true; break; }
      if (live) keep.push_back(j);
    }
    if (static_cast<int>(keep.size()) != s) {
      std::vector<SignalLabel> ls;
      Mat kn(kernel.size(), Vec(keep.size()));
      for (size_t j = 0; j < keep.size(); ++j) {
        ls.push_back(signals[keep[j]]);
        for (size_t k = 0; k < kernel.size(); ++k) kn[k][j] = kernel[k][keep[j]];
      }
      signals = std::move(ls);
      kernel = std::move(kn);
    }
  }
};

// Per-signal ex-ante probability and posterior mean vector.
struct SignalStats {
  Vec r;   // S
  Mat nu;  // S x m
  int num_signals() const { return static_cast<int>(r.size()); }
};

inline SignalStats signal_stats(const ValueDistribution& dist,
                                const InformationStructure& info) {
  if (static_cast<int>(info.kernel.size()) != dist.size())
    throw std::invalid_argument("signal_stats: kernel height != support size");
  const int s = info.num_signals();
  SignalStats st;
  st.r.assign(s, 0.0);
  st.nu.assign(s, Vec(dist.m, 0.0));
  for (int k = 0; k < dist.size(); ++k) {
    for (int j = 0; j < s; ++j) {
      double w = dist.prob[k] * info.kernel[k][j];
      if (w == 0.0) continue;
      st.r[j] += w;
      for (int i = 0; i < dist.m; ++i) st.nu[j][i] += w * dist.support[k][i];
    }
  }
  // Drop zero-mass signals, normalize the rest.
  SignalStats out;
  for (int j = 0; j < s; ++j) {
    if (st.r[j] <= 0.0) continue;
    Vec nu = st.nu[j];
    for (double& x : nu) x /= st.r[j];
    out.r.push_back(st.r[j]);
    out.nu.push_back(std::move(nu));
  }
  return out;
}

// Direct-revelation menu over an information structure.
struct Mechanism {
  InformationStructure info;
  Mat alloc;  // S x m, rows sum to <= 1
  Vec price;  // S

  Mechanism() = default;  // empty placeholder
  Mechanism(InformationStructure info_, Mat alloc_, Vec price_)
      : info(std::move(info_)), alloc(std::move(alloc_)), price(std::move(price_)) {
    if (static_cast<int>(alloc.size()) != info.num_signals() ||
        price.size() != alloc.size())
      throw std::invalid_argument("Mechanism: per-signal arrays mismatch");
    for (const Vec& x : alloc) {
      double total = 0.0;
      for (double xi : x) {
        if (xi < -kMassTol || xi > 1.0 + kMassTol)
          throw std::invalid_argument("Mechanism: allocation entry outside [0,1]");
        total += xi;
      }
      if (total > 1.0 + kMassTol)
        throw std::invalid_argument("Mechanism: allocation row exceeds unit demand");
    }
  }
};

enum class TieBreak { SellerOptimal };

// Deterministic price vector on top of an information structure. +inf means
// the product is not offered.
struct PricingMechanism {
  InformationStructure info;
  Vec prices;  // m entries, in [0, +inf]
  TieBreak tie_break = TieBreak::SellerOptimal;
};

struct BuyerChoice {
  int item = -1;  // -1: no purchase
  double payment = 0.0;
  double surplus = 0.0;
};

// Best response of a risk-neutral unit-demand buyer with posterior mean `nu`.
// Buys whenever the best surplus is >= 0 (purchases at indifference); among
// utility-maximizing products picks the highest price, then the lowest index.
inline BuyerChoice buyer_choice(const Vec& nu, const Vec& prices,
                                TieBreak /*tie_break*/ = TieBreak::SellerOptimal,
                                double tol = 1e-12) {
  const int m = static_cast<int>(nu.size());
  double best = -kInf;
  for (int i = 0; i < m; ++i) best = std::max(best, nu[i] - prices[i]);
  if (best < -tol) return {};
  int pick = -1;
  for (int i = 0; i < m; ++i) {
    double s = nu[i] - prices[i];
    if (s >= best - tol && (pick < 0 || prices[i] > prices[pick] + tol)) pick = i;
  }
  return {pick, prices[pick], nu[pick] - prices[pick]};
}

// The mechanism a pricing mechanism induces through buyer best response.
inline Mechanism induce_mechanism(const ValueDistribution& dist,
                                  const PricingMechanism& pricing) {
  SignalStats st = signal_stats(dist, pricing.info);
  if (st.num_signals() != pricing.info.num_signals())
    throw std::invalid_argument("induce_mechanism: zero-mass signal in structure");
  Mat alloc(st.num_signals(), Vec(dist.m, 0.0));
  Vec price(st.num_signals(), 0.0);
  for (int s = 0; s < st.num_signals(); ++s) {
    BuyerChoice ch = buyer_choice(st.nu[s], pricing.prices, pricing.tie_break);
    if (ch.item >= 0) {
      alloc[s][ch.item] = 1.0;
      price[s] = ch.payment;
    }
  }
  return Mechanism(pricing.info, std::move(alloc), std::move(price));
}

struct AuditReport {
  struct IcViolation { int signal, deviation; double gain; };
  struct IrViolation { int signal; double utility; };
  std::vector<IcViolation> ic_violations;
  std::vector<IrViolation> ir_violations;
  double max_violation = 0.0;
  bool clean(double tol = kTol) const { return max_violation <= tol; }
};

// Reports every IC and IR violation of the menu above `tol`.
inline AuditReport audit_ic_ir(const ValueDistribution& dist, const Mechanism& mech,
                               double tol = kTol) {
  SignalStats st = signal_stats(dist, mech.info);
  // signal_stats drops zero-mass signals; rebuild aligned interim utilities.
  const int s_total = mech.info.num_signals();
  Vec r(s_total, 0.0);
  Mat nu(s_total, Vec(dist.m, 0.0));
  for (int k = 0; k < dist.size(); ++k)
    for (int j = 0; j < s_total; ++j) {
      double w = dist.prob[k] * mech.info.kernel[k][j];
      r[j] += w;
      for (int i = 0; i < dist.m; ++i) nu[j][i] += w * dist.support[k][i];
    }
  AuditReport rep;
  for (int s = 0; s < s_total; ++s) {
    if (r[s] <= 0.0) continue;
    Vec post = nu[s];
    for (double& x : post) x /= r[s];
    double own = dot(post, mech.alloc[s]) - mech.price[s];
    if (own < -tol) rep.ir_violations.push_back({s, own});
    rep.max_violation = std::max(rep.max_violation, -own);
    for (int sp = 0; sp < s_total; ++sp) {
      if (sp == s) continue;
      double dev = dot(post, mech.alloc[sp]) - mech.price[sp];
      if (dev > own + tol) rep.ic_violations.push_back({s, sp, dev - own});
      rep.max_violation = std::max(rep.max_violation, dev - own);
    }
  }
  rep.max_violation = std::max(rep.max_violation, 0.0);
  return rep;
}

// Expected payment. Rejects mechanisms whose audit fails above `audit_tol`.
inline double revenue(const ValueDistribution& dist, const Mechanism& mech,
                      double audit_tol = kTol) {
  AuditReport rep = audit_ic_ir(dist, mech, audit_tol);
  if (!rep.clean(audit_tol))
    throw MechanismRejected("revenue: mechanism fails IC/IR audit, max violation " +
                            std::to_string(rep.max_violation));
  double rev = 0.0;
  for (int k = 0; k < dist.size(); ++k)
    for (int s = 0; s < mech.info.num_signals(); ++s)
      rev += dist.prob[k] * mech.info.kernel[k][s] * mech.price[s];
  return rev;
}

// Expected allocated value, measured with true values (not posteriors).
inline double welfare(const ValueDistribution& dist, const Mechanism& mech,
                      double audit_tol = kTol) {
  AuditReport rep = audit_ic_ir(dist, mech, audit_tol);
  if (!rep.clean(audit_tol))
    throw MechanismRejected("welfare: mechanism fails IC/IR audit");
  double wel = 0.0;
  for (int k = 0; k < dist.size(); ++k)
    for (int s = 0; s < mech.info.num_signals(); ++s) {
      double w = dist.prob[k] * mech.info.kernel[k][s];
      if (w == 0.0) continue;
      wel += w * dot(dist.support[k], mech.alloc[s]);
    }
  return wel;
}

// E[max_i v_i]: the welfare of selling everyone their best product.
inline double optimal_welfare(const ValueDistribution& dist) {
  double wel = 0.0;
  for (int k = 0; k < dist.size(); ++k)
    wel += dist.prob[k] * max_coord(dist.support[k]);
  return wel;
}

// Garbling helper: merge two signals into one (labels are united for subset
// labels, concatenated otherwise).
inline InformationStructure merge_signals(const InformationStructure& info,
                                          int s1, int s2) {
  if (s1 == s2 || s1 < 0 || s2 < 0 || s1 >= info.num_signals() ||
      s2 >= info.num_signals())
    throw std::invalid_argument("merge_signals: bad indices");
  if (s2 < s1) std::swap(s1, s2);
  std::vector<SignalLabel> labels;
  Mat kernel(info.kernel.size());
  SignalLabel merged;
  if (info.signals[s1].text.empty() && info.signals[s2].text.empty()) {
    std::vector<int> prods = info.signals[s1].products;
    prods.insert(prods.end(), info.signals[s2].products.begin(),
                 info.signals[s2].products.end());
    merged = SignalLabel::subset(std::move(prods));
  } else {
    merged = SignalLabel::named(info.signals[s1].str() + "+" + info.signals[s2].str());
  }
  for (int j = 0; j < info.num_signals(); ++j)
    if (j != s2) labels.push_back(j == s1 ? merged : info.signals[j]);
  for (size_t k = 0; k < info.kernel.size(); ++k) {
    for (int j = 0; j < info.num_signals(); ++j) {
      if (j == s2) continue;
      double p = info.kernel[k][j];
      if (j == s1) p += info.kernel[k][s2];
      kernel[k].push_back(p);
    }
  }
  return InformationStructure(std::move(labels), std::move(kernel));
}

}  // namespace infoprice
