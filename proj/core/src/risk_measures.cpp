#include "pathrisk/risk_measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "pathrisk/ensemble_io.hpp"

namespace pathrisk {

namespace {

// Cumulative weights are compared against probability levels with this slack so
// that levels sitting exactly on an atom boundary resolve to the lower quantile.
constexpr double kLevelSlack = 1e-14;

void require_level(double s, const char* what) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in (0, 1]");
  }
}

}  // namespace

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> outcomes, std::vector<double> weights) {
  if (outcomes.empty() || outcomes.size() != weights.size()) {
    throw std::invalid_argument("distribution needs matching, non-empty outcomes and weights");
  }
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!std::isfinite(outcomes[i])) throw std::invalid_argument("outcomes must be finite");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw std::invalid_argument("weights must be positive");
    }
  }
  if (std::abs(compensated_sum(weights) - 1.0) > kProbabilitySumTolerance) {
    throw std::invalid_argument("weights must sum to 1");
  }

  std::vector<std::size_t> order(outcomes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return outcomes[a] < outcomes[b]; });

  outcomes_.reserve(order.size());
  weights_.reserve(order.size());
  for (std::size_t idx : order) {
    if (!outcomes_.empty() && outcomes_.back() == outcomes[idx]) {
      weights_.back() += weights[idx];
    } else {
      outcomes_.push_back(outcomes[idx]);
      weights_.push_back(weights[idx]);
    }
  }
}

EmpiricalDistribution EmpiricalDistribution::equally_weighted(std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::vector<double> w(sample.size(), 1.0 / static_cast<double>(sample.size()));
  return EmpiricalDistribution({sample.begin(), sample.end()}, std::move(w));
}

EmpiricalDistribution EmpiricalDistribution::point_mass(double c) {
  return EmpiricalDistribution({c}, {1.0});
}

double EmpiricalDistribution::cdf(double x) const noexcept {
  const auto end = std::upper_bound(outcomes_.begin(), outcomes_.end(), x);
  const auto k = static_cast<std::size_t>(end - outcomes_.begin());
  if (k == outcomes_.size()) return 1.0;
  return compensated_sum(std::span<const double>(weights_).first(k));
}

double EmpiricalDistribution::mean() const noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < outcomes_.size(); ++i) acc += weights_[i] * outcomes_[i];
  return acc;
}

EmpiricalDistribution EmpiricalDistribution::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
  std::vector<double> y(outcomes_);
  for (double& v : y) v *= factor;
  return EmpiricalDistribution(std::move(y), weights_);
}

EmpiricalDistribution EmpiricalDistribution::shifted(double offset) const {
  std::vector<double> y(outcomes_);
  for (double& v : y) v += offset;
  return EmpiricalDistribution(std::move(y), weights_);
}

Distortion::Distortion(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("distortion parameter must be positive");
  }
}

double Distortion::operator()(double u) const noexcept { return std::min(u / gamma_, 1.0); }

double value_at_risk(const EmpiricalDistribution& d, double s) {
  require_level(s, "VaR level");
  double cum = 0.0;
  const auto y = d.outcomes();
  const auto w = d.weights();
  for (std::size_t i = 0; i < y.size(); ++i) {
    cum += w[i];
    if (cum >= s - kLevelSlack) return -y[i];
  }
  return -y.back();
}

double average_value_at_risk(const EmpiricalDistribution& d, double gamma) {
  require_level(gamma, "AVaR level");
  const auto y = d.outcomes();
  const auto w = d.weights();
  double remaining = gamma;
  double tail = 0.0;
  for (std::size_t i = 0; i < y.size() && remaining > 0.0; ++i) {
    const double take = std::min(w[i], remaining);
    tail += take * y[i];
    remaining -= take;
  }
  // Weights may fall short of 1 by rounding; the residue belongs to the top atom.
  if (remaining > 0.0) tail += remaining * y.back();
  return -tail / gamma;
}

double avar_order_stat(std::span<const double> sample, double gamma) {
  require_level(gamma, "AVaR level");
  const double n_gamma = static_cast<double>(sample.size()) * gamma;
  // The guard absorbs products such as 100 * 0.29 = 28.999999999999996.
  const auto k = static_cast<std::size_t>(std::floor(n_gamma + 1e-9));
  if (k == 0) throw InsufficientTailSample();
  std::vector<double> smallest(k);
  std::partial_sort_copy(sample.begin(), sample.end(), smallest.begin(), smallest.end());
  double acc = 0.0;
  for (double v : smallest) acc += v;
  return -acc / static_cast<double>(k);
}

double distorted_expectation(const EmpiricalDistribution& d, const Distortion& psi) {
  const auto y = d.outcomes();
  const auto w = d.weights();
  double cum = 0.0;
  double prev_psi = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    cum += w[i];
    const double f = (i + 1 == y.size()) ? 1.0 : cum;
    const double cur_psi = psi(f);
    acc += y[i] * (cur_psi - prev_psi);
    prev_psi = cur_psi;
  }
  return -acc;
}

double weighted_var(const EmpiricalDistribution& d, std::span<const SpectralAtom> mu) {
  if (mu.empty()) throw std::invalid_argument("spectral measure has no atoms");
  std::vector<double> masses;
  masses.reserve(mu.size());
  for (const SpectralAtom& a : mu) {
    if (!(a.level > 0.0 && a.level <= 1.0)) {
      throw std::invalid_argument("spectral atom outside (0, 1]");
    }
    if (!(a.mass > 0.0)) throw std::invalid_argument("spectral masses must be positive");
    masses.push_back(a.mass);
  }
  if (std::abs(compensated_sum(masses) - 1.0) > kProbabilitySumTolerance) {
    throw std::invalid_argument("spectral masses must sum to 1");
  }
  double acc = 0.0;
  for (const SpectralAtom& a : mu) acc += a.mass * average_value_at_risk(d, a.level);
  return acc;
}

std::string to_string(PathTransform theta) {
  switch (theta) {
    case PathTransform::running_min: return "running_min";
    case PathTransform::max_drawdown: return "max_drawdown";
    case PathTransform::time_average: return "time_average";
    case PathTransform::terminal: return "terminal";
  }
  return "unknown";
}

PathTransform path_transform_from_string(const std::string& name) {
  for (PathTransform t : {PathTransform::running_min, PathTransform::max_drawdown,
                          PathTransform::time_average, PathTransform::terminal}) {
    if (to_string(t) == name) return t;
  }
  throw std::invalid_argument("unknown path transform '" + name + "'");
}

EmpiricalDistribution transformed_distribution(const PathEnsemble& e, PathTransform theta) {
  std::vector<double> y(e.n_paths());
  for (std::size_t i = 0; i < e.n_paths(); ++i) {
    const auto v = e.path_values(i);
    switch (theta) {
      case PathTransform::running_min: y[i] = *std::min_element(v.begin(), v.end()); break;
      case PathTransform::max_drawdown: y[i] = max_drawdown(v); break;
      case PathTransform::time_average: y[i] = time_average(e.grid(), v); break;
      case PathTransform::terminal: y[i] = v.back(); break;
    }
  }
  return EmpiricalDistribution(std::move(y), {e.probs().begin(), e.probs().end()});
}

double process_risk(const PathEnsemble& e, PathTransform theta, const StaticRisk& rho_static) {
  return rho_static(transformed_distribution(e, theta));
}

std::string distribution_csv(const EmpiricalDistribution& d) {
  std::string out = "outcome,weight\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    out += format_double(d.outcomes()[i]);
    out += ',';
    out += format_double(d.weights()[i]);
    out += '\n';
  }
  return out;
}

}  // namespace pathrisk
