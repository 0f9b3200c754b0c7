#pragma once

#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathrisk/paths.hpp"
#include "pathrisk/risk_measures.hpp"

namespace pathrisk {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultSearchCap = 1e6;
inline constexpr double kDefaultSearchTolerance = 1e-9;

/// Degenerate-case rules that decided an index value instead of the plain ratio.
enum class Convention {
  denominator_nonpositive,  // risk <= 0: index is +inf
  numerator_nonpositive,    // reward <= 0 with positive risk: index clamps to 0
  zero_denominator,         // zero drawdown / zero dispersion with positive reward: +inf
  empty_acceptance_set,     // rho_0 > 0: sup of the empty set is 0
  search_cap_reached,       // rho_{x_max} <= 0: reported as +inf
};

std::string to_string(Convention c);

/// An index value in [0, +inf] together with the conventions that produced it.
struct IndexResult {
  double value = 0.0;
  std::vector<Convention> conventions;

  bool triggered(Convention c) const noexcept;
};

/// Thrown when bisection meets rho_x that decreases in x.
class FamilyNotIncreasing : public std::runtime_error {
 public:
  FamilyNotIncreasing() : std::runtime_error("family not x-increasing") {}
};

using RiskFamily = std::function<double(double x, const PathEnsemble& e)>;

/// A family (rho_x) of risk functionals nondecreasing in x. The acceptance sets
/// A_x = {X : rho_x(X) <= 0} shrink as x grows.
class IndexFamily {
 public:
  /// Monotonicity in x is spot-checked on `probes` over a fixed ladder of levels.
  explicit IndexFamily(RiskFamily rho, double x_max = kDefaultSearchCap,
                       std::span<const PathEnsemble> probes = {});

  double operator()(double x, const PathEnsemble& e) const { return rho_(x, e); }
  double x_max() const noexcept { return x_max_; }

 private:
  RiskFamily rho_;
  double x_max_;
};

/// alpha(X) = sup{x >= 0 : rho_x(X) <= 0} by bisection on [0, x_max] to
/// absolute tolerance `tol`.
IndexResult alpha_sup(const IndexFamily& family, const PathEnsemble& e,
                      double tol = kDefaultSearchTolerance);

/// rho_x(X) = x/(1+x) * AVaR_gamma(inf_t X_t) - 1/(1+x) * E[X_T].
IndexFamily raroc_family(double gamma);

/// E[X_T] / AVaR_gamma(inf_t X_t) with the [0, +inf] conventions.
IndexResult raroc(const PathEnsemble& e, double gamma);

/// E[X_T] / E[max drawdown]; zero when E[X_T] <= 0.
IndexResult calmar(const PathEnsemble& e);

/// Ratio with the conventions shared by the Calmar-style and Sharpe-style
/// estimators: 0 if reward <= 0, +inf if reward > 0 and risk == 0.
IndexResult reward_risk_ratio(double reward, double risk);

struct SharpeVariants {
  IndexResult running_min;   // E[X_T] / sd(inf_t X_t)
  IndexResult max_drawdown;  // E[X_T] / sd(max drawdown)
};

/// Probability-weighted (population) standard deviations.
SharpeVariants sharpe_variants(const PathEnsemble& e);

struct PerformanceEstimates {
  double gamma = 0.0;
  IndexResult calmar;
  IndexResult alpha;
  IndexResult sharpe_running_min;
  IndexResult sharpe_max_drawdown;
};

/// Sample estimators from per-path finals, running minima and max drawdowns.
/// alpha uses -(1/k) * (sum of the k smallest minima), k = floor(n * gamma).
PerformanceEstimates estimators_from_samples(std::span<const double> finals,
                                             std::span<const double> mins,
                                             std::span<const double> mdds, double gamma);

/// integral_0^z F(s) ds = sum_i w_i (z - y_i)^+ for a distribution on [0, inf).
double integrated_cdf(const EmpiricalDistribution& d, double z) noexcept;

enum class SsdVerdict { dominates, dominated, incomparable, equivalent };

std::string to_string(SsdVerdict v);

struct SsdResult {
  SsdVerdict verdict = SsdVerdict::equivalent;
  std::vector<double> z;
  std::vector<double> integrated_first;
  std::vector<double> integrated_second;
};

/// Second-order dominance of X* = sup_t |X_t|: the first ensemble dominates when
/// its integrated CDF lies below the second one everywhere. The verdict is
/// decided exactly at the kinks; `z_grid` only selects reporting points.
SsdResult ssd_check(const PathEnsemble& first, const PathEnsemble& second,
                    std::span<const double> z_grid);

/// A nondecreasing concave utility, validated on a probe grid.
class UtilityFunction {
 public:
  explicit UtilityFunction(std::function<double(double)> u, double probe_lo = 0.0,
                           double probe_hi = 10.0, std::size_t n_probes = 201);

  double operator()(double w) const { return u_(w); }

 private:
  std::function<double(double)> u_;
};

/// E[U(X*)].
double expected_utility(const PathEnsemble& e, const UtilityFunction& u);

/// JSON record {index_name, gamma, value, conventions_triggered}. A NaN gamma
/// renders as null; infinite values render as the string "inf".
std::string index_record_json(const std::string& index_name, double gamma, const IndexResult& r);

}  // namespace pathrisk
