// Shared aliases, tolerances and small numeric helpers.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace infoprice {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Global comparison tolerance. Operations take it as a defaulted argument so
// callers can override per call.
inline constexpr double kTol = 1e-9;
// Tolerance for construction-time stochasticity checks (probabilities, kernels).
inline constexpr double kMassTol = 1e-12;

struct SizeLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MechanismRejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConditionFailed : std::runtime_error {
  int i = -1, j = -1;
  ConditionFailed(const std::string& msg, int i_, int j_)
      : std::runtime_error(msg), i(i_), j(j_) {}
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double max_coord(const Vec& v) {
  double m = -kInf;
  for (double x : v) m = std::max(m, x);
  return m;
}

// Index of the largest coordinate, lowest index on ties.
inline int argmax_index(const Vec& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

inline bool nearly_equal(double a, double b, double tol = kTol) {
  return std::fabs(a - b) <= tol;
}

}  // namespace infoprice
