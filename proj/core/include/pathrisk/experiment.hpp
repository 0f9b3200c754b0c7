#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pathrisk/acceptability.hpp"
#include "pathrisk/paths.hpp"
#include "pathrisk/simulation.hpp"
#include "pathrisk/stats.hpp"

namespace pathrisk {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simulation config. Text form is one `key = value` per line, `#` starts a
/// comment, string values may be double-quoted. Keys:
///
///   model           "bm" | "kou"
///   mu, sigma       annual drift and volatility
///   lambda          annual jump intensity          (kou)
///   eta1_inv        mean upward jump size 1/eta1   (kou)
///   eta2_inv        mean downward jump size 1/eta2 (kou)
///   p               probability of an upward jump  (kou)
///   T               horizon in years
///   n_steps, n_paths, seed
///   ito_correction  true | false
struct ExperimentConfig {
  std::string model = "bm";
  double mu = 0.15;
  double sigma = 0.20;
  double lambda = 10.0;
  double eta1_inv = 0.02;
  double eta2_inv = 0.04;
  double p = 0.5;
  SimConfig sim{1.0, 1000, 1000, 42};
  bool ito_correction = false;

  ModelParams model_params() const;
  void validate() const;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& file);
/// Canonical text form; parse_config(config_text(c)) reproduces c.
std::string config_text(const ExperimentConfig& c);

struct SimulateResult {
  std::filesystem::path file;
  std::uint32_t crc32 = 0;
  std::size_t bytes = 0;
};

/// Simulates per config and writes PRSK1, or CSV when `out` ends in .csv.
SimulateResult cmd_simulate(const ExperimentConfig& config, const std::filesystem::path& out,
                            const SimOptions& options = {});

/// Statistics and indices for one simulated model.
struct ModelReport {
  std::string label;
  std::size_t n_paths = 0;
  std::size_t n_steps = 0;
  SummaryStats running_min;
  SummaryStats max_drawdown;
  SummaryStats terminal;
  std::vector<PerformanceEstimates> estimates;  // one per gamma, input order
  Histogram running_min_density;
  Histogram max_drawdown_density;
  Histogram terminal_density;
};

struct ReportCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ReportInput {
  std::string label;
  std::string source;  // file name or "in-memory"
  std::optional<std::uint32_t> crc32;
  std::optional<ExperimentConfig> config;
};

struct ExperimentReport {
  std::vector<ReportInput> inputs;
  std::vector<double> gammas;
  std::vector<ModelReport> models;  // brownian first, jump-diffusion second
  std::vector<ReportCheck> checks;
};

inline constexpr std::size_t kDefaultHistogramBins = 50;

ModelReport summarize_model(const std::string& label, const PathEnsemble& e,
                            std::span<const double> gammas,
                            std::size_t bins = kDefaultHistogramBins);

/// Summary statistics and index tables for a Brownian and a jump-diffusion ensemble.
/// Checks record the ordering alpha_{min gamma} < ... < CR per model and
/// CR(jump-diffusion) > CR(Brownian).
ExperimentReport build_report(const PathEnsemble& brownian, const PathEnsemble& jump_diffusion,
                              std::span<const double> gammas, std::vector<ReportInput> inputs = {});

/// Report files read back from disk, checked against magic and length.
ExperimentReport cmd_report(const std::filesystem::path& brownian_file,
                            const std::filesystem::path& jump_diffusion_file,
                            std::span<const double> gammas);

/// Stable key order, 17 significant digits, infinities as "inf".
std::string report_json(const ExperimentReport& r);
/// Rows Skewness / Kurtosis-3 / Median / Mean / St.Dev. for the six samples.
std::string table1_csv(const ExperimentReport& r);
/// One row per index, one column per model.
std::string table2_csv(const ExperimentReport& r);

/// Writes report.json, table1.csv, table2.csv and figure_*.csv into `dir`.
void write_report_bundle(const ExperimentReport& r, const std::filesystem::path& dir);

struct StudyOptions {
  std::uint64_t seed = 42;
  std::size_t n_paths = 1000;
  std::size_t n_steps = 1000;
  double p = 0.5;
  bool ito_correction = false;
  std::vector<double> gammas{0.01, 0.05};
};

/// Default study configs: mu = .15, sigma = .20, lambda = 10, 1/eta1 = .02,
/// 1/eta2 = .04, T = 1. Both models share the seed, hence the diffusion draws.
ExperimentConfig study_config(const StudyOptions& options, std::string_view model);

/// Simulates both models and builds the report; `out_dir`, when given,
/// also receives the two PRSK1 files and the report bundle.
ExperimentReport run_study(const StudyOptions& options, const SimOptions& sim_options,
                           const std::optional<std::filesystem::path>& out_dir = std::nullopt);

}  // namespace pathrisk
