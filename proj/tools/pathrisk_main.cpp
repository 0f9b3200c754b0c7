// pathrisk: simulate ensembles, build reports, run the duality verifier.
//
// Exit codes: 0 success, 1 property failure, 2 usage, config or input error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathrisk/ensemble_io.hpp"
#include "pathrisk/experiment.hpp"
#include "pathrisk/verifier.hpp"

namespace {

constexpr int kPropertyFailure = 1;
constexpr int kUsageError = 2;

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

void emit(const std::string& text, const std::string& out_file) {
  if (out_file.empty()) {
    std::cout << text;
  } else {
    pathrisk::write_file_bytes(out_file, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-dependent acceptability indices: simulation, reports and duality checks"};
  app.require_subcommand(1);
  app.fallthrough();

  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = hardware); PATHRISK_THREADS caps it");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate an ensemble from a config file");
  std::string sim_config, sim_out, sim_format;
  std::optional<std::uint64_t> sim_seed;
  std::optional<double> sim_p;
  bool sim_ito = false;
  sim->add_option("--config", sim_config, "Config file (key = value)")->required();
  sim->add_option("--out", sim_out, "Output file; .csv selects CSV")->required();
  sim->add_option("--seed", sim_seed, "Override the config seed");
  sim->add_option("--p-jump", sim_p, "Override the upward jump probability");
  sim->add_flag("--ito-correction", sim_ito, "Use mu - sigma^2/2 as drift");
  sim->add_option("--format", sim_format, "Force prsk or csv")->check(CLI::IsMember({"prsk", "csv"}));

  // report
  auto* rep = app.add_subcommand("report", "Summary statistics and indices for a bm/kou pair");
  std::string rep_bm, rep_kou, rep_out_dir, rep_bm_config, rep_kou_config;
  std::vector<double> rep_gammas{0.01, 0.05};
  rep->add_option("--bm", rep_bm, "Brownian ensemble file")->required()->check(CLI::ExistingFile);
  rep->add_option("--kou", rep_kou, "Jump-diffusion ensemble file")->required()->check(CLI::ExistingFile);
  rep->add_option("--gamma", rep_gammas, "AVaR levels")->delimiter(',');
  rep->add_option("--bm-config", rep_bm_config, "Config used for --bm, echoed in the report");
  rep->add_option("--kou-config", rep_kou_config, "Config used for --kou, echoed in the report");
  rep->add_option("--out-dir", rep_out_dir, "Write report.json, tables and figure data here");

  // verify-duality
  auto* ver = app.add_subcommand("verify-duality", "Random-instance duality and axiom checks");
  pathrisk::VerifierOptions vopts;
  std::string ver_out;
  ver->add_option("--instances", vopts.instances, "Random instances")->capture_default_str();
  ver->add_option("--max-scenarios", vopts.max_scenarios, "Scenarios per instance")->capture_default_str();
  ver->add_option("--max-grid", vopts.max_grid, "Grid points per instance")->capture_default_str();
  ver->add_option("--seed", vopts.seed, "Generator seed")->capture_default_str();
  ver->add_flag("--inject-sign-flip", vopts.inject_sign_flip, "Test mode: negate every pairing");
  ver->add_option("--out", ver_out, "Write the JSON report here instead of stdout");

  // study
  auto* stu = app.add_subcommand("study", "Simulate both models with the default parameters and report");
  pathrisk::StudyOptions sopts;
  std::string stu_out_dir;
  bool stu_strict = false;
  stu->add_option("--seed", sopts.seed)->capture_default_str();
  stu->add_option("--paths", sopts.n_paths)->capture_default_str();
  stu->add_option("--steps", sopts.n_steps)->capture_default_str();
  stu->add_option("--p-jump", sopts.p)->capture_default_str();
  stu->add_flag("--ito-correction", sopts.ito_correction);
  stu->add_option("--gamma", sopts.gammas, "AVaR levels")->delimiter(',');
  stu->add_option("--out-dir", stu_out_dir, "Write ensembles, report.json, tables and figure data here");
  stu->add_flag("--strict", stu_strict, "Exit 1 when a report check fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  pathrisk::SimOptions sim_options;
  sim_options.threads = threads;

  try {
    if (*sim) {
      pathrisk::ExperimentConfig cfg = pathrisk::load_config(sim_config);
      if (sim_seed) cfg.sim.seed = *sim_seed;
      if (sim_p) cfg.p = *sim_p;
      if (sim_ito) cfg.ito_correction = true;
      cfg.validate();
      std::filesystem::path out = sim_out;
      if (!sim_format.empty() && (sim_format == "csv") != (pathrisk::format_for(out) == pathrisk::EnsembleFormat::csv)) {
        std::cerr << "error: --format " << sim_format << " conflicts with the extension of " << sim_out << "\n";
        return kUsageError;
      }
      const auto result = pathrisk::cmd_simulate(cfg, out, sim_options);
      std::cout << result.file.string() << " " << result.bytes << " bytes crc32 " << hex32(result.crc32) << "\n";
      return 0;
    }

    if (*rep) {
      pathrisk::ExperimentReport r = pathrisk::cmd_report(rep_bm, rep_kou, rep_gammas);
      if (!rep_bm_config.empty()) r.inputs[0].config = pathrisk::load_config(rep_bm_config);
      if (!rep_kou_config.empty()) r.inputs[1].config = pathrisk::load_config(rep_kou_config);
      if (rep_out_dir.empty()) {
        std::cout << pathrisk::report_json(r);
      } else {
        pathrisk::write_report_bundle(r, rep_out_dir);
      }
      return 0;
    }

    if (*ver) {
      const auto report = pathrisk::run_verifier(vopts);
      emit(pathrisk::verifier_report_json(report), ver_out);
      return report.passed() ? 0 : kPropertyFailure;
    }

    if (*stu) {
      std::optional<std::filesystem::path> dir;
      if (!stu_out_dir.empty()) dir = stu_out_dir;
      const auto r = pathrisk::run_study(sopts, sim_options, dir);
      if (!dir) std::cout << pathrisk::report_json(r);
      bool ok = true;
      for (const auto& c : r.checks) {
        std::cerr << (c.passed ? "ok   " : "FAIL ") << c.name << ": " << c.detail << "\n";
        ok = ok && c.passed;
      }
      return stu_strict && !ok ? kPropertyFailure : 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
