#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace pathrisk {

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario probabilities and distribution weights must sum to 1 within this.
inline constexpr double kProbabilitySumTolerance = 1e-12;

/// Sum in index order with Neumaier compensation. Used wherever a probability
/// vector has to be checked against 1 at the 1e-12 level.
double compensated_sum(std::span<const double> xs) noexcept;

/// Strictly increasing instants t_0 = 0 < t_1 < ... < t_m = T (years).
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);

  /// n_steps + 1 equally spaced points on [0, horizon]; t_i = horizon * i / n_steps.
  static TimeGrid uniform(double horizon, std::size_t n_steps);

  std::size_t size() const noexcept { return t_.size(); }
  std::size_t steps() const noexcept { return t_.size() - 1; }
  double horizon() const noexcept { return t_.back(); }
  double operator[](std::size_t i) const noexcept { return t_[i]; }
  std::span<const double> times() const noexcept { return t_; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::vector<double> t_;
};

/// Grid values of a piecewise-constant cadlag path of cumulative returns.
class Path {
 public:
  Path(TimeGrid grid, std::vector<double> values);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

/// Finite scenario set: every path lives on the same grid and carries a
/// strictly positive probability. Values are stored row-major, one row per path.
class PathEnsemble {
 public:
  PathEnsemble(TimeGrid grid, std::vector<double> values, std::vector<double> probs);

  static PathEnsemble equally_weighted(TimeGrid grid, std::vector<double> values);
  static PathEnsemble from_paths(std::span<const Path> paths, std::vector<double> probs);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t n_paths() const noexcept { return probs_.size(); }
  std::size_t n_points() const noexcept { return grid_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::span<const double> path_values(std::size_t i) const noexcept {
    return std::span<const double>(values_).subspan(i * n_points(), n_points());
  }
  Path path(std::size_t i) const;

  /// Every value multiplied by `factor`; probabilities unchanged.
  PathEnsemble scaled(double factor) const;
  /// Every value shifted by `offset` (adds `offset` times the order unit).
  PathEnsemble shifted(double offset) const;

  friend bool operator==(const PathEnsemble&, const PathEnsemble&) = default;

 private:
  TimeGrid grid_;
  std::vector<double> values_;
  std::vector<double> probs_;
};

// Path transforms. Each acts on grid values only.

std::vector<double> running_min(std::span<const double> values);
Path running_min(const Path& p);

std::vector<double> drawdown_process(std::span<const double> values);
Path drawdown_process(const Path& p);

double max_drawdown(std::span<const double> values) noexcept;
double max_drawdown(const Path& p) noexcept;

/// X* = max_i |X_{t_i}|.
double sup_norm_star(std::span<const double> values) noexcept;
double sup_norm_star(const Path& p) noexcept;

double terminal(const Path& p) noexcept;

/// Trapezoidal (1/T) * integral of the path over the grid.
double time_average(const TimeGrid& grid, std::span<const double> values) noexcept;
double time_average(const Path& p) noexcept;

Path lattice_sup(const Path& p, const Path& q);
PathEnsemble lattice_sup(const PathEnsemble& a, const PathEnsemble& b);

/// ||X||_{R^inf} = ||X*||_inf. For an ensemble this is the max over scenarios.
double r_inf_norm(const Path& p) noexcept;
double r_inf_norm(const PathEnsemble& e) noexcept;

/// weight * a + (1 - weight) * b; grids and probabilities must agree.
PathEnsemble convex_combination(const PathEnsemble& a, const PathEnsemble& b, double weight);

/// a <= b at every scenario and grid point. Throws GridMismatch on shape mismatch.
bool pointwise_leq(const PathEnsemble& a, const PathEnsemble& b);

struct PathFeatures {
  double terminal = 0.0;
  double running_min = 0.0;
  double running_max = 0.0;
  double max_drawdown = 0.0;
};

PathFeatures path_features(std::span<const double> values) noexcept;

/// Per-scenario features in scenario order.
struct EnsembleFeatures {
  std::vector<double> finals;
  std::vector<double> mins;
  std::vector<double> mdds;
};

EnsembleFeatures ensemble_features(const PathEnsemble& e);

}  // namespace pathrisk
