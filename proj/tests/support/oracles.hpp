#pragma once

// Independent reference computations. None of these call into the library's
// risk code; they restate each quantity from its definition.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "pathrisk/paths.hpp"

namespace pathrisk::test::oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Lower s-quantile inf{x : F(x) >= s} by scanning every atom; O(n^2).
inline double lower_quantile(const std::vector<double>& x, const std::vector<double>& w, double s) {
  double best = kInf;
  for (double candidate : x) {
    double f = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] <= candidate) f += w[j];
    }
    if (f >= s - 1e-14) best = std::min(best, candidate);
  }
  return best;
}

/// Rockafellar-Uryasev: AVaR_g(X) = min_c { c + E[(-X - c)^+] / g }. The
/// objective is piecewise linear and convex in c with kinks at c = -x_i.
inline double avar_ru(const std::vector<double>& x, const std::vector<double>& w, double gamma) {
  double best = kInf;
  for (double xi : x) {
    const double c = -xi;
    double tail = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) tail += w[j] * std::max(-x[j] - c, 0.0);
    best = std::min(best, c + tail / gamma);
  }
  return best;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// P(inf_{t<=T} (mu t + sigma W_t) <= m) for m < 0.
inline double running_min_cdf(double m, double mu, double sigma, double horizon) {
  if (m >= 0.0) return 1.0;
  const double s = sigma * std::sqrt(horizon);
  return normal_cdf((m - mu * horizon) / s) +
         std::exp(2.0 * mu * m / (sigma * sigma)) * normal_cdf((m + mu * horizon) / s);
}

/// sup over the D_sigma vertices of -<X, A> is minus the smallest grid value
/// that any vertex can read: every value is read by some optional vertex.
inline double rho_full(const PathEnsemble& e) {
  const auto v = e.values();
  return -*std::min_element(v.begin(), v.end());
}

inline double terminal_mean(const PathEnsemble& e) {
  double acc = 0.0;
  for (std::size_t s = 0; s < e.n_paths(); ++s) acc += e.probs()[s] * e.path_values(s).back();
  return acc;
}

/// E[X_T] / rho with +inf for rho <= 0 and 0 for E <= 0 < rho.
inline double ratio_index(double reward, double risk) {
  if (risk <= 0.0) return kInf;
  if (reward <= 0.0) return 0.0;
  return reward / risk;
}

/// integral_0^z F(s) ds by midpoint quadrature on n cells.
inline double integrated_cdf_quadrature(const std::vector<double>& x, const std::vector<double>& w,
                                        double z, std::size_t n = 200000) {
  const double h = z / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = (static_cast<double>(k) + 0.5) * h;
    double f = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] <= s) f += w[j];
    }
    acc += f * h;
  }
  return acc;
}

/// Direct max drawdown: largest x_i - x_j over i <= j.
inline double max_drawdown_pairs(const std::vector<double>& x) {
  double best = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i; j < x.size(); ++j) best = std::max(best, x[i] - x[j]);
  }
  return best;
}

}  // namespace pathrisk::test::oracle
