#include "pathrisk/paths.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace pathrisk {

double compensated_sum(std::span<const double> xs) noexcept {
  double sum = 0.0;
  double carry = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

TimeGrid::TimeGrid(std::vector<double> times) : t_(std::move(times)) {
  if (t_.size() < 2) {
    throw std::invalid_argument("time grid needs at least two points");
  }
  if (t_.front() != 0.0) {
    throw std::invalid_argument("time grid must start at 0");
  }
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!std::isfinite(t_[i]) || !(t_[i] > t_[i - 1])) {
      throw std::invalid_argument("time grid must be finite and strictly increasing");
    }
  }
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t n_steps) {
  if (n_steps < 1) throw std::invalid_argument("uniform grid needs n_steps >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be positive and finite");
  }
  std::vector<double> t(n_steps + 1);
  const auto n = static_cast<double>(n_steps);
  for (std::size_t i = 0; i <= n_steps; ++i) {
    t[i] = horizon * static_cast<double>(i) / n;
  }
  t.back() = horizon;
  return TimeGrid(std::move(t));
}

Path::Path(TimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw GridMismatch("path has " + std::to_string(values_.size()) +
                       " values for a grid of " + std::to_string(grid_.size()) + " points");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("path values must be finite");
  }
}

PathEnsemble::PathEnsemble(TimeGrid grid, std::vector<double> values, std::vector<double> probs)
    : grid_(std::move(grid)), values_(std::move(values)), probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("ensemble needs at least one path");
  if (values_.size() != probs_.size() * grid_.size()) {
    throw GridMismatch("ensemble values do not match n_paths x n_points");
  }
  for (double p : probs_) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("scenario probabilities must be positive");
    }
  }
  if (std::abs(compensated_sum(probs_) - 1.0) > kProbabilitySumTolerance) {
    throw std::invalid_argument("scenario probabilities must sum to 1");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("path values must be finite");
  }
}

PathEnsemble PathEnsemble::equally_weighted(TimeGrid grid, std::vector<double> values) {
  const std::size_t m = grid.size();
  if (values.empty() || values.size() % m != 0) {
    throw GridMismatch("ensemble values do not match the grid length");
  }
  const std::size_t n = values.size() / m;
  std::vector<double> probs(n, 1.0 / static_cast<double>(n));
  return PathEnsemble(std::move(grid), std::move(values), std::move(probs));
}

PathEnsemble PathEnsemble::from_paths(std::span<const Path> paths, std::vector<double> probs) {
  if (paths.empty()) throw std::invalid_argument("ensemble needs at least one path");
  const TimeGrid& grid = paths.front().grid();
  std::vector<double> values;
  values.reserve(paths.size() * grid.size());
  for (const Path& p : paths) {
    if (!(p.grid() == grid)) throw GridMismatch("paths in an ensemble must share a grid");
    values.insert(values.end(), p.values().begin(), p.values().end());
  }
  return PathEnsemble(grid, std::move(values), std::move(probs));
}

Path PathEnsemble::path(std::size_t i) const {
  auto v = path_values(i);
  return Path(grid_, std::vector<double>(v.begin(), v.end()));
}

PathEnsemble PathEnsemble::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return PathEnsemble(grid_, std::move(v), probs_);
}

PathEnsemble PathEnsemble::shifted(double offset) const {
  std::vector<double> v(values_);
  for (double& x : v) x += offset;
  return PathEnsemble(grid_, std::move(v), probs_);
}

std::vector<double> running_min(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::min(out[i - 1], out[i]);
  return out;
}

Path running_min(const Path& p) { return Path(p.grid(), running_min(p.values())); }

std::vector<double> drawdown_process(std::span<const double> values) {
  std::vector<double> out(values.size());
  double peak = values.empty() ? 0.0 : values.front();
  for (std::size_t i = 0; i < values.size(); ++i) {
    peak = std::max(peak, values[i]);
    out[i] = peak - values[i];
  }
  return out;
}

Path drawdown_process(const Path& p) { return Path(p.grid(), drawdown_process(p.values())); }

double max_drawdown(std::span<const double> values) noexcept {
  double peak = values.empty() ? 0.0 : values.front();
  double mdd = 0.0;
  for (double v : values) {
    peak = std::max(peak, v);
    mdd = std::max(mdd, peak - v);
  }
  return mdd;
}

double max_drawdown(const Path& p) noexcept { return max_drawdown(p.values()); }

double sup_norm_star(std::span<const double> values) noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double sup_norm_star(const Path& p) noexcept { return sup_norm_star(p.values()); }

double terminal(const Path& p) noexcept { return p.values().back(); }

double time_average(const TimeGrid& grid, std::span<const double> values) noexcept {
  double integral = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    integral += 0.5 * (values[i - 1] + values[i]) * (grid[i] - grid[i - 1]);
  }
  return integral / grid.horizon();
}

double time_average(const Path& p) noexcept { return time_average(p.grid(), p.values()); }

Path lattice_sup(const Path& p, const Path& q) {
  if (!(p.grid() == q.grid())) throw GridMismatch("lattice_sup needs identical grids");
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(p[i], q[i]);
  return Path(p.grid(), std::move(out));
}

namespace {

void require_same_shape(const PathEnsemble& a, const PathEnsemble& b) {
  if (!(a.grid() == b.grid()) || a.n_paths() != b.n_paths()) {
    throw GridMismatch("ensembles must share grid and scenario count");
  }
}

}  // namespace

PathEnsemble lattice_sup(const PathEnsemble& a, const PathEnsemble& b) {
  require_same_shape(a, b);
  std::vector<double> out(a.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(a.values()[i], b.values()[i]);
  return PathEnsemble(a.grid(), std::move(out), {a.probs().begin(), a.probs().end()});
}

double r_inf_norm(const Path& p) noexcept { return sup_norm_star(p); }

double r_inf_norm(const PathEnsemble& e) noexcept { return sup_norm_star(e.values()); }

PathEnsemble convex_combination(const PathEnsemble& a, const PathEnsemble& b, double weight) {
  require_same_shape(a, b);
  if (!std::equal(a.probs().begin(), a.probs().end(), b.probs().begin())) {
    throw GridMismatch("convex combination needs identical scenario probabilities");
  }
  std::vector<double> out(a.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = weight * a.values()[i] + (1.0 - weight) * b.values()[i];
  }
  return PathEnsemble(a.grid(), std::move(out), {a.probs().begin(), a.probs().end()});
}

bool pointwise_leq(const PathEnsemble& a, const PathEnsemble& b) {
  require_same_shape(a, b);
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    if (a.values()[i] > b.values()[i]) return false;
  }
  return true;
}

PathFeatures path_features(std::span<const double> values) noexcept {
  PathFeatures f;
  if (values.empty()) return f;
  f.terminal = values.back();
  f.running_min = values.front();
  f.running_max = values.front();
  for (double v : values) {
    f.running_min = std::min(f.running_min, v);
    f.running_max = std::max(f.running_max, v);
    f.max_drawdown = std::max(f.max_drawdown, f.running_max - v);
  }
  return f;
}

EnsembleFeatures ensemble_features(const PathEnsemble& e) {
  EnsembleFeatures out;
  out.finals.reserve(e.n_paths());
  out.mins.reserve(e.n_paths());
  out.mdds.reserve(e.n_paths());
  for (std::size_t i = 0; i < e.n_paths(); ++i) {
    const PathFeatures f = path_features(e.path_values(i));
    out.finals.push_back(f.terminal);
    out.mins.push_back(f.running_min);
    out.mdds.push_back(f.max_drawdown);
  }
  return out;
}

}  // namespace pathrisk
