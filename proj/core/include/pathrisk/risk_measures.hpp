#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathrisk/paths.hpp"

namespace pathrisk {

/// Thrown by the order-statistic AVaR estimator when floor(n * gamma) == 0.
class InsufficientTailSample : public std::invalid_argument {
 public:
  InsufficientTailSample() : std::invalid_argument("insufficient tail sample") {}
};

/// Weighted sample, sorted ascending with tied outcomes merged.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution(std::vector<double> outcomes, std::vector<double> weights);

  static EmpiricalDistribution equally_weighted(std::span<const double> sample);
  static EmpiricalDistribution point_mass(double c);

  std::span<const double> outcomes() const noexcept { return outcomes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return outcomes_.size(); }

  /// Right-continuous F(x) = P(outcome <= x).
  double cdf(double x) const noexcept;
  double mean() const noexcept;

  /// Distribution of factor * outcome, factor > 0.
  EmpiricalDistribution scaled(double factor) const;
  /// Distribution of outcome + offset.
  EmpiricalDistribution shifted(double offset) const;

 private:
  std::vector<double> outcomes_;
  std::vector<double> weights_;
};

/// Psi(u) = min(u / gamma, 1). Any gamma > 0 is accepted; gamma in (0, 1]
/// gives a distortion with Psi(1) = 1.
class Distortion {
 public:
  explicit Distortion(double gamma);
  double gamma() const noexcept { return gamma_; }
  double operator()(double u) const noexcept;

 private:
  double gamma_;
};

/// Discrete probability measure on (0, 1] used for the spectral (weighted VaR) form.
struct SpectralAtom {
  double level;
  double mass;
};

/// VaR_s = -(lower s-quantile). Requires s in (0, 1].
double value_at_risk(const EmpiricalDistribution& d, double s);

/// AVaR_gamma = (1/gamma) * integral_0^gamma VaR_s ds, evaluated exactly:
/// the worst gamma of mass is averaged, splitting an atom where needed.
double average_value_at_risk(const EmpiricalDistribution& d, double gamma);

/// -(1/k) * (sum of the k smallest values), k = floor(n * gamma).
double avar_order_stat(std::span<const double> sample, double gamma);

/// -sum_i y_i [Psi(F(y_i)) - Psi(F(y_{i-1}))] over sorted outcomes.
double distorted_expectation(const EmpiricalDistribution& d, const Distortion& psi);

/// sum_j mass_j * AVaR_{level_j}.
double weighted_var(const EmpiricalDistribution& d, std::span<const SpectralAtom> mu);

enum class PathTransform {
  running_min,   // inf_t X_t
  max_drawdown,  // sup_t D_t
  time_average,  // (1/T) int_0^T X_t dt
  terminal,      // X_T
};

std::string to_string(PathTransform theta);
PathTransform path_transform_from_string(const std::string& name);

using StaticRisk = std::function<double(const EmpiricalDistribution&)>;

/// Distribution of theta(X) across scenarios, weighted by scenario probabilities.
EmpiricalDistribution transformed_distribution(const PathEnsemble& e, PathTransform theta);

/// rho(X) = rho_static(theta(X)).
double process_risk(const PathEnsemble& e, PathTransform theta, const StaticRisk& rho_static);

/// Two-column CSV "outcome,weight".
std::string distribution_csv(const EmpiricalDistribution& d);

}  // namespace pathrisk
