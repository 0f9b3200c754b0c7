#include "pathrisk/acceptability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "json_text.hpp"

namespace pathrisk {

namespace {

double expected_terminal(const PathEnsemble& e) {
  double acc = 0.0;
  for (std::size_t i = 0; i < e.n_paths(); ++i) acc += e.probs()[i] * e.path_values(i).back();
  return acc;
}

double mean_of(std::span<const double> xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

// Weighted population standard deviation, two-pass.
double weighted_sd(std::span<const double> xs, std::span<const double> w) {
  double m = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) m += w[i] * xs[i];
  double var = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) var += w[i] * (xs[i] - m) * (xs[i] - m);
  return std::sqrt(var);
}

IndexResult sharpe_ratio(double reward, double sd) {
  if (sd == 0.0) {
    if (reward > 0.0) return {kInfinity, {Convention::zero_denominator}};
    return {0.0, {Convention::numerator_nonpositive}};
  }
  return {reward / sd, {}};
}

// Same ratio as raroc once the denominator is known.
IndexResult ratio_over_coherent_risk(double reward, double risk) {
  if (risk <= 0.0) return {kInfinity, {Convention::denominator_nonpositive}};
  if (reward <= 0.0) return {0.0, {Convention::numerator_nonpositive}};
  return {reward / risk, {}};
}

}  // namespace

std::string to_string(Convention c) {
  switch (c) {
    case Convention::denominator_nonpositive: return "denominator_nonpositive";
    case Convention::numerator_nonpositive: return "numerator_nonpositive";
    case Convention::zero_denominator: return "zero_denominator";
    case Convention::empty_acceptance_set: return "empty_acceptance_set";
    case Convention::search_cap_reached: return "search_cap_reached";
  }
  return "unknown";
}

bool IndexResult::triggered(Convention c) const noexcept {
  return std::find(conventions.begin(), conventions.end(), c) != conventions.end();
}

IndexFamily::IndexFamily(RiskFamily rho, double x_max, std::span<const PathEnsemble> probes)
    : rho_(std::move(rho)), x_max_(x_max) {
  if (!rho_) throw std::invalid_argument("index family needs a risk functional");
  if (!(x_max_ > 0.0)) throw std::invalid_argument("search cap must be positive");
  constexpr std::array<double, 9> ladder{0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1000.0};
  for (const PathEnsemble& e : probes) {
    double prev = rho_(0.0, e);
    for (double x : ladder) {
      if (x > x_max_) break;
      const double cur = rho_(x, e);
      if (cur < prev - 1e-12 * (1.0 + std::abs(prev))) throw FamilyNotIncreasing();
      prev = cur;
    }
  }
}

IndexResult alpha_sup(const IndexFamily& family, const PathEnsemble& e, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("bisection tolerance must be positive");
  double lo = 0.0;
  double hi = family.x_max();
  double rho_lo = family(lo, e);
  if (rho_lo > 0.0) return {0.0, {Convention::empty_acceptance_set}};
  double rho_hi = family(hi, e);
  if (rho_hi <= 0.0) return {kInfinity, {Convention::search_cap_reached}};

  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double rho_mid = family(mid, e);
    const double slack = 1e-12 * (1.0 + std::abs(rho_lo) + std::abs(rho_hi));
    if (rho_mid < rho_lo - slack || rho_mid > rho_hi + slack) throw FamilyNotIncreasing();
    if (rho_mid <= 0.0) {
      lo = mid;
      rho_lo = rho_mid;
    } else {
      hi = mid;
      rho_hi = rho_mid;
    }
  }
  return {lo + 0.5 * (hi - lo), {}};
}

IndexFamily raroc_family(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("AVaR level must lie in (0, 1]");
  return IndexFamily([gamma](double x, const PathEnsemble& e) {
    const double risk = average_value_at_risk(
        transformed_distribution(e, PathTransform::running_min), gamma);
    const double reward = expected_terminal(e);
    return (x / (1.0 + x)) * risk - (1.0 / (1.0 + x)) * reward;
  });
}

IndexResult raroc(const PathEnsemble& e, double gamma) {
  const double risk =
      average_value_at_risk(transformed_distribution(e, PathTransform::running_min), gamma);
  return ratio_over_coherent_risk(expected_terminal(e), risk);
}

IndexResult reward_risk_ratio(double reward, double risk) {
  if (reward <= 0.0) return {0.0, {Convention::numerator_nonpositive}};
  if (risk <= 0.0) return {kInfinity, {Convention::zero_denominator}};
  return {reward / risk, {}};
}

IndexResult calmar(const PathEnsemble& e) {
  double mdd = 0.0;
  for (std::size_t i = 0; i < e.n_paths(); ++i) {
    mdd += e.probs()[i] * max_drawdown(e.path_values(i));
  }
  return reward_risk_ratio(expected_terminal(e), mdd);
}

SharpeVariants sharpe_variants(const PathEnsemble& e) {
  if (e.n_paths() < 2) throw std::invalid_argument("Sharpe variants need at least two paths");
  const EnsembleFeatures f = ensemble_features(e);
  const double reward = expected_terminal(e);
  return {sharpe_ratio(reward, weighted_sd(f.mins, e.probs())),
          sharpe_ratio(reward, weighted_sd(f.mdds, e.probs()))};
}

PerformanceEstimates estimators_from_samples(std::span<const double> finals,
                                             std::span<const double> mins,
                                             std::span<const double> mdds, double gamma) {
  if (finals.empty() || finals.size() != mins.size() || finals.size() != mdds.size()) {
    throw std::invalid_argument("estimator samples must be non-empty and of equal length");
  }
  const double reward = mean_of(finals);
  const std::vector<double> w(finals.size(), 1.0 / static_cast<double>(finals.size()));

  PerformanceEstimates out;
  out.gamma = gamma;
  out.calmar = reward_risk_ratio(reward, mean_of(mdds));
  out.alpha = ratio_over_coherent_risk(reward, avar_order_stat(mins, gamma));
  out.sharpe_running_min = sharpe_ratio(reward, weighted_sd(mins, w));
  out.sharpe_max_drawdown = sharpe_ratio(reward, weighted_sd(mdds, w));
  return out;
}

double integrated_cdf(const EmpiricalDistribution& d, double z) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    acc += d.weights()[i] * std::max(z - d.outcomes()[i], 0.0);
  }
  return acc;
}

std::string to_string(SsdVerdict v) {
  switch (v) {
    case SsdVerdict::dominates: return "dominates";
    case SsdVerdict::dominated: return "dominated";
    case SsdVerdict::incomparable: return "incomparable";
    case SsdVerdict::equivalent: return "equivalent";
  }
  return "unknown";
}

namespace {

EmpiricalDistribution sup_norm_distribution(const PathEnsemble& e) {
  std::vector<double> y(e.n_paths());
  for (std::size_t i = 0; i < e.n_paths(); ++i) y[i] = sup_norm_star(e.path_values(i));
  return EmpiricalDistribution(std::move(y), {e.probs().begin(), e.probs().end()});
}

}  // namespace

SsdResult ssd_check(const PathEnsemble& first, const PathEnsemble& second,
                    std::span<const double> z_grid) {
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    if (!(z_grid[i] > 0.0) || (i > 0 && !(z_grid[i] > z_grid[i - 1]))) {
      throw std::invalid_argument("z grid must be positive and strictly increasing");
    }
  }
  const EmpiricalDistribution a = sup_norm_distribution(first);
  const EmpiricalDistribution b = sup_norm_distribution(second);

  // Both integrated CDFs are piecewise linear with kinks at the support points
  // and slope 1 beyond the largest one, so the kinks decide the order.
  std::vector<double> kinks(a.outcomes().begin(), a.outcomes().end());
  kinks.insert(kinks.end(), b.outcomes().begin(), b.outcomes().end());
  std::sort(kinks.begin(), kinks.end());

  bool first_below = true;
  bool second_below = true;
  for (double z : kinks) {
    const double diff = integrated_cdf(a, z) - integrated_cdf(b, z);
    const double slack = 1e-12 * (1.0 + z);
    if (diff > slack) first_below = false;
    if (diff < -slack) second_below = false;
  }

  SsdResult out;
  if (first_below && second_below) {
    out.verdict = SsdVerdict::equivalent;
  } else if (first_below) {
    out.verdict = SsdVerdict::dominates;
  } else if (second_below) {
    out.verdict = SsdVerdict::dominated;
  } else {
    out.verdict = SsdVerdict::incomparable;
  }
  out.z.assign(z_grid.begin(), z_grid.end());
  for (double z : z_grid) {
    out.integrated_first.push_back(integrated_cdf(a, z));
    out.integrated_second.push_back(integrated_cdf(b, z));
  }
  return out;
}

UtilityFunction::UtilityFunction(std::function<double(double)> u, double probe_lo, double probe_hi,
                                 std::size_t n_probes)
    : u_(std::move(u)) {
  if (!u_) throw std::invalid_argument("utility function is empty");
  if (n_probes < 3 || !(probe_hi > probe_lo)) throw std::invalid_argument("bad utility probe grid");
  std::vector<double> values(n_probes);
  const double step = (probe_hi - probe_lo) / static_cast<double>(n_probes - 1);
  for (std::size_t i = 0; i < n_probes; ++i) values[i] = u_(probe_lo + step * static_cast<double>(i));
  for (std::size_t i = 1; i < n_probes; ++i) {
    const double slack = 1e-12 * (1.0 + std::abs(values[i - 1]));
    if (values[i] < values[i - 1] - slack) {
      throw std::invalid_argument("utility must be nondecreasing");
    }
    if (i + 1 < n_probes) {
      const double chord = 0.5 * (values[i - 1] + values[i + 1]);
      if (values[i] < chord - 1e-12 * (1.0 + std::abs(chord))) {
        throw std::invalid_argument("utility must be concave");
      }
    }
  }
}

double expected_utility(const PathEnsemble& e, const UtilityFunction& u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < e.n_paths(); ++i) {
    acc += e.probs()[i] * u(sup_norm_star(e.path_values(i)));
  }
  return acc;
}

std::string index_record_json(const std::string& index_name, double gamma, const IndexResult& r) {
  detail::Json j;
  j["index_name"] = index_name;
  j["gamma"] = std::isnan(gamma) ? detail::Json(nullptr) : detail::number(gamma);
  j["value"] = detail::number(r.value);
  detail::Json conv = detail::Json::array();
  for (Convention c : r.conventions) conv.push_back(to_string(c));
  j["conventions_triggered"] = std::move(conv);
  return detail::dump(j, -1);
}

}  // namespace pathrisk
