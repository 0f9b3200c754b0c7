#include "pathrisk/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace pathrisk {

void BrownianParams::validate() const {
  if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be >= 0");
}

void KouParams::validate() const {
  diffusion.validate();
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be >= 0");
  if (!(eta1 > 0.0) || !(eta2 > 0.0) || !std::isfinite(eta1) || !std::isfinite(eta2)) {
    throw std::invalid_argument("eta1 and eta2 must be positive");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
}

void SimConfig::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("T must be > 0");
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
}

unsigned resolve_thread_count(unsigned requested) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("PATHRISK_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && *end == '\0' && v > 0) n = std::min(n, static_cast<unsigned>(v));
  }
  return std::max(1u, n);
}

double sample_double_exponential(double eta1, double eta2, double p, CounterStream& rng) {
  const double side = rng.next_uniform();
  const double magnitude = -std::log(rng.next_uniform());
  return side < p ? magnitude / eta1 : -magnitude / eta2;
}

std::size_t sample_poisson(double mean, CounterStream& rng) {
  if (!(mean > 0.0)) return 0;
  const double u = rng.next_uniform();
  double term = std::exp(-mean);
  double cdf = term;
  std::size_t k = 0;
  // The cap only matters for u within rounding of 1.
  while (u > cdf && k < 10000) {
    ++k;
    term *= mean / static_cast<double>(k);
    cdf += term;
  }
  return k;
}

namespace {

struct StepModel {
  double drift = 0.0;
  double sigma = 0.0;
  const KouParams* kou = nullptr;
};

StepModel step_model(const ModelParams& model, bool ito_correction) {
  StepModel m;
  const BrownianParams& bm = std::holds_alternative<KouParams>(model)
                                 ? std::get<KouParams>(model).diffusion
                                 : std::get<BrownianParams>(model);
  m.drift = ito_correction ? bm.mu - 0.5 * bm.sigma * bm.sigma : bm.mu;
  m.sigma = bm.sigma;
  if (const auto* kou = std::get_if<KouParams>(&model); kou != nullptr && kou->lambda > 0.0) {
    m.kou = kou;
  }
  return m;
}

void validate_model(const ModelParams& model) {
  std::visit([](const auto& p) { p.validate(); }, model);
}

std::size_t fill_path(const StepModel& m, const TimeGrid& grid, std::uint64_t seed,
                      std::size_t path_index, std::span<double> out) {
  CounterStream normals(derive_substream_seed(seed, path_index, StreamTag::diffusion));
  std::size_t jumps = 0;
  out[0] = 0.0;
  if (m.kou == nullptr) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double dt = grid[i] - grid[i - 1];
      out[i] = out[i - 1] + (m.drift * dt + m.sigma * std::sqrt(dt) * normals.next_normal());
    }
    return jumps;
  }
  CounterStream counts(derive_substream_seed(seed, path_index, StreamTag::jump_count));
  CounterStream sizes(derive_substream_seed(seed, path_index, StreamTag::jump_size));
  const KouParams& kou = *m.kou;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double dt = grid[i] - grid[i - 1];
    double increment = m.drift * dt + m.sigma * std::sqrt(dt) * normals.next_normal();
    const std::size_t n = sample_poisson(kou.lambda * dt, counts);
    if (n > 0) {
      double jump = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        jump += sample_double_exponential(kou.eta1, kou.eta2, kou.p, sizes);
      }
      increment += jump;
      jumps += n;
    }
    out[i] = out[i - 1] + increment;
  }
  return jumps;
}

// Runs body(begin, end) over contiguous path ranges on up to `threads` workers.
template <typename Body>
void parallel_paths(std::size_t n_paths, unsigned threads, Body body) {
  const std::size_t workers = std::min<std::size_t>(threads, n_paths);
  if (workers <= 1) {
    body(std::size_t{0}, n_paths);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n_paths + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n_paths, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::size_t simulate_path(const ModelParams& model, const SimConfig& config, bool ito_correction,
                          std::size_t path_index, std::span<double> out) {
  validate_model(model);
  config.validate();
  if (out.size() != config.n_steps + 1) throw GridMismatch("output span must hold n_steps + 1 values");
  return fill_path(step_model(model, ito_correction), config.grid(), config.seed, path_index, out);
}

PathEnsemble simulate(const ModelParams& model, const SimConfig& config, const SimOptions& options) {
  validate_model(model);
  config.validate();
  const TimeGrid grid = config.grid();
  const StepModel m = step_model(model, options.ito_correction);
  const std::size_t n_points = grid.size();
  std::vector<double> values(config.n_paths * n_points);
  parallel_paths(config.n_paths, resolve_thread_count(options.threads),
                 [&](std::size_t begin, std::size_t end) {
                   for (std::size_t i = begin; i < end; ++i) {
                     fill_path(m, grid, config.seed, i,
                               std::span<double>(values).subspan(i * n_points, n_points));
                   }
                 });
  return PathEnsemble::equally_weighted(grid, std::move(values));
}

PathEnsemble simulate_bm(const BrownianParams& params, const SimConfig& config,
                         const SimOptions& options) {
  return simulate(ModelParams{params}, config, options);
}

PathEnsemble simulate_kou(const KouParams& params, const SimConfig& config,
                          const SimOptions& options) {
  return simulate(ModelParams{params}, config, options);
}

std::vector<SimulatedPath> simulate_features(const ModelParams& model, const SimConfig& config,
                                             const SimOptions& options) {
  validate_model(model);
  config.validate();
  const TimeGrid grid = config.grid();
  const StepModel m = step_model(model, options.ito_correction);
  std::vector<SimulatedPath> out(config.n_paths);
  parallel_paths(config.n_paths, resolve_thread_count(options.threads),
                 [&](std::size_t begin, std::size_t end) {
                   std::vector<double> buffer(grid.size());
                   for (std::size_t i = begin; i < end; ++i) {
                     out[i].jumps = fill_path(m, grid, config.seed, i, buffer);
                     out[i].features = path_features(buffer);
                   }
                 });
  return out;
}

}  // namespace pathrisk
