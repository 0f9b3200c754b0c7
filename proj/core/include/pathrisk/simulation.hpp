#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "pathrisk/paths.hpp"
#include "pathrisk/rng.hpp"

namespace pathrisk {

/// Arithmetic Brownian motion dX = mu dt + sigma dW in cumulative log-return units.
struct BrownianParams {
  double mu = 0.0;     // 1/year
  double sigma = 0.0;  // 1/sqrt(year)

  void validate() const;
};

/// Kou double-exponential jump diffusion: the Brownian part plus a compound
/// Poisson sum with jumps +Exp(eta1) w.p. p and -Exp(eta2) otherwise.
struct KouParams {
  BrownianParams diffusion;
  double lambda = 0.0;  // jumps per year
  double eta1 = 1.0;    // 1 / mean upward jump
  double eta2 = 1.0;    // 1 / mean downward jump
  double p = 0.5;       // probability of an upward jump

  void validate() const;

  /// E[J] = p/eta1 - (1-p)/eta2.
  double mean_jump() const noexcept { return p / eta1 - (1.0 - p) / eta2; }
  /// E[J^2] = 2p/eta1^2 + 2(1-p)/eta2^2.
  double second_moment_jump() const noexcept {
    return 2.0 * p / (eta1 * eta1) + 2.0 * (1.0 - p) / (eta2 * eta2);
  }
};

using ModelParams = std::variant<BrownianParams, KouParams>;

struct SimConfig {
  double horizon = 1.0;  // years
  std::size_t n_steps = 1000;
  std::size_t n_paths = 1000;
  std::uint64_t seed = 0;

  void validate() const;
  TimeGrid grid() const { return TimeGrid::uniform(horizon, n_steps); }
};

struct SimOptions {
  /// 0 selects the hardware concurrency. PATHRISK_THREADS caps either choice.
  unsigned threads = 0;
  /// Use mu - sigma^2/2 as the diffusion drift.
  bool ito_correction = false;
};

/// Worker count after applying the PATHRISK_THREADS cap; always >= 1.
unsigned resolve_thread_count(unsigned requested);

/// +Exp(eta1) with probability p, otherwise -Exp(eta2). Consumes two uniforms.
double sample_double_exponential(double eta1, double eta2, double p, CounterStream& rng);

/// Poisson(mean) by sequential inversion of one uniform.
std::size_t sample_poisson(double mean, CounterStream& rng);

/// Writes path `path_index` (n_steps + 1 values, X_0 = 0) into `out` and
/// returns the number of jumps drawn. Fully determined by (config.seed, path_index).
std::size_t simulate_path(const ModelParams& model, const SimConfig& config, bool ito_correction,
                          std::size_t path_index, std::span<double> out);

PathEnsemble simulate(const ModelParams& model, const SimConfig& config, const SimOptions& options = {});
PathEnsemble simulate_bm(const BrownianParams& params, const SimConfig& config,
                         const SimOptions& options = {});
PathEnsemble simulate_kou(const KouParams& params, const SimConfig& config,
                          const SimOptions& options = {});

struct SimulatedPath {
  PathFeatures features;
  std::size_t jumps = 0;
};

/// Same paths as simulate(), reduced to per-path features without storing
/// the ensemble. Suitable for 10^5 x 2000 runs.
std::vector<SimulatedPath> simulate_features(const ModelParams& model, const SimConfig& config,
                                             const SimOptions& options = {});

}  // namespace pathrisk
