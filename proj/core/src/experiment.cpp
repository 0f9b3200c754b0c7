#include "pathrisk/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "json_text.hpp"
#include "pathrisk/ensemble_io.hpp"

namespace pathrisk {

using detail::Json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Strips a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unquote(std::string_view v, std::size_t line_no) {
  if (!v.empty() && v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') {
      throw ConfigError("line " + std::to_string(line_no) + ": unterminated string");
    }
    return std::string(v.substr(1, v.size() - 2));
  }
  return std::string(v);
}

double parse_real(const std::string& key, const std::string& v, std::size_t line_no) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw ConfigError("line " + std::to_string(line_no) + ": " + key + " expects a real, got '" + v + "'");
  }
  return x;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v, std::size_t line_no) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("line " + std::to_string(line_no) + ": " + key +
                      " expects a non-negative integer, got '" + v + "'");
  }
  return x;
}

bool parse_bool(const std::string& key, const std::string& v, std::size_t line_no) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("line " + std::to_string(line_no) + ": " + key + " expects true or false, got '" + v + "'");
}

}  // namespace

ModelParams ExperimentConfig::model_params() const {
  BrownianParams bm{mu, sigma};
  if (model == "bm") return bm;
  KouParams kou;
  kou.diffusion = bm;
  kou.lambda = lambda;
  kou.eta1 = 1.0 / eta1_inv;
  kou.eta2 = 1.0 / eta2_inv;
  kou.p = p;
  return kou;
}

void ExperimentConfig::validate() const {
  if (model != "bm" && model != "kou") throw ConfigError("model must be \"bm\" or \"kou\", got \"" + model + "\"");
  if (!(eta1_inv > 0.0) || !(eta2_inv > 0.0)) throw ConfigError("eta1_inv and eta2_inv must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
  try {
    sim.validate();
    std::visit([](const auto& m) { m.validate(); }, model_params());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value = unquote(trim(line.substr(eq + 1)), line_no);
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key " + key);

    if (key == "model") {
      c.model = value;
    } else if (key == "mu") {
      c.mu = parse_real(key, value, line_no);
    } else if (key == "sigma") {
      c.sigma = parse_real(key, value, line_no);
    } else if (key == "lambda") {
      c.lambda = parse_real(key, value, line_no);
    } else if (key == "eta1_inv") {
      c.eta1_inv = parse_real(key, value, line_no);
    } else if (key == "eta2_inv") {
      c.eta2_inv = parse_real(key, value, line_no);
    } else if (key == "p") {
      c.p = parse_real(key, value, line_no);
    } else if (key == "T") {
      c.sim.horizon = parse_real(key, value, line_no);
    } else if (key == "n_steps") {
      c.sim.n_steps = parse_unsigned(key, value, line_no);
    } else if (key == "n_paths") {
      c.sim.n_paths = parse_unsigned(key, value, line_no);
    } else if (key == "seed") {
      c.sim.seed = parse_unsigned(key, value, line_no);
    } else if (key == "ito_correction") {
      c.ito_correction = parse_bool(key, value, line_no);
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key " + key);
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::string text;
  try {
    text = read_file_bytes(file);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text);
}

std::string config_text(const ExperimentConfig& c) {
  std::string out;
  out += "model = \"" + c.model + "\"\n";
  out += "mu = " + format_double(c.mu) + "\n";
  out += "sigma = " + format_double(c.sigma) + "\n";
  out += "lambda = " + format_double(c.lambda) + "\n";
  out += "eta1_inv = " + format_double(c.eta1_inv) + "\n";
  out += "eta2_inv = " + format_double(c.eta2_inv) + "\n";
  out += "p = " + format_double(c.p) + "\n";
  out += "T = " + format_double(c.sim.horizon) + "\n";
  out += "n_steps = " + std::to_string(c.sim.n_steps) + "\n";
  out += "n_paths = " + std::to_string(c.sim.n_paths) + "\n";
  out += "seed = " + std::to_string(c.sim.seed) + "\n";
  out += std::string("ito_correction = ") + (c.ito_correction ? "true" : "false") + "\n";
  return out;
}

SimulateResult cmd_simulate(const ExperimentConfig& config, const std::filesystem::path& out,
                            const SimOptions& options) {
  config.validate();
  SimOptions opts = options;
  opts.ito_correction = options.ito_correction || config.ito_correction;
  const PathEnsemble e = simulate(config.model_params(), config.sim, opts);
  const std::string bytes = format_for(out) == EnsembleFormat::csv ? encode_csv(e) : encode_prsk(e);
  write_file_bytes(out, bytes);
  return SimulateResult{out, crc32(bytes), bytes.size()};
}

ModelReport summarize_model(const std::string& label, const PathEnsemble& e,
                            std::span<const double> gammas, std::size_t bins) {
  const EnsembleFeatures f = ensemble_features(e);
  ModelReport r;
  r.label = label;
  r.n_paths = e.n_paths();
  r.n_steps = e.grid().steps();
  r.running_min = summarize(f.mins);
  r.max_drawdown = summarize(f.mdds);
  r.terminal = summarize(f.finals);
  for (double g : gammas) r.estimates.push_back(estimators_from_samples(f.finals, f.mins, f.mdds, g));
  r.running_min_density = histogram(f.mins, bins);
  r.max_drawdown_density = histogram(f.mdds, bins);
  r.terminal_density = histogram(f.finals, bins);
  return r;
}

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_double(x);
}

// Short form for labels: 0.05 rather than 0.050000000000000003.
std::string label_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

void ordering_checks(const ModelReport& m, std::vector<ReportCheck>& checks) {
  std::vector<std::size_t> order(m.estimates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return m.estimates[a].gamma < m.estimates[b].gamma; });
  if (order.empty()) return;

  std::string chain;
  bool ok = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& est = m.estimates[order[k]];
    if (k > 0) {
      ok = ok && m.estimates[order[k - 1]].alpha.value < est.alpha.value;
      chain += " < ";
    }
    chain += "alpha_" + label_number(est.gamma) + "=" + fmt(est.alpha.value);
  }
  const double cr = m.estimates.front().calmar.value;
  ok = ok && m.estimates[order.back()].alpha.value < cr;
  chain += " < CR=" + fmt(cr);
  checks.push_back({m.label + ".alpha_below_calmar", ok, chain});
}

}  // namespace

ExperimentReport build_report(const PathEnsemble& brownian, const PathEnsemble& jump_diffusion,
                              std::span<const double> gammas, std::vector<ReportInput> inputs) {
  if (gammas.empty()) throw std::invalid_argument("report needs at least one gamma");
  ExperimentReport r;
  r.inputs = std::move(inputs);
  r.gammas.assign(gammas.begin(), gammas.end());
  r.models.push_back(summarize_model("brownian", brownian, gammas));
  r.models.push_back(summarize_model("jump_diffusion", jump_diffusion, gammas));

  for (const auto& m : r.models) ordering_checks(m, r.checks);
  const double cr_bm = r.models[0].estimates.front().calmar.value;
  const double cr_jd = r.models[1].estimates.front().calmar.value;
  r.checks.push_back({"calmar_jump_diffusion_above_brownian", cr_jd > cr_bm,
                      "CR(jump_diffusion)=" + fmt(cr_jd) + " vs CR(brownian)=" + fmt(cr_bm)});
  return r;
}

ExperimentReport cmd_report(const std::filesystem::path& brownian_file,
                            const std::filesystem::path& jump_diffusion_file,
                            std::span<const double> gammas) {
  const std::string bm_bytes = read_file_bytes(brownian_file);
  const std::string jd_bytes = read_file_bytes(jump_diffusion_file);
  auto decode = [](std::string_view bytes) {
    return bytes.substr(0, kPrskMagic.size()) == kPrskMagic ? decode_prsk(bytes) : decode_csv(bytes);
  };
  std::vector<ReportInput> inputs;
  inputs.push_back({"brownian", brownian_file.filename().string(), crc32(bm_bytes), std::nullopt});
  inputs.push_back({"jump_diffusion", jump_diffusion_file.filename().string(), crc32(jd_bytes), std::nullopt});
  return build_report(decode(bm_bytes), decode(jd_bytes), gammas, std::move(inputs));
}

namespace {

Json stats_json(const SummaryStats& s) {
  Json j;
  j["skewness"] = detail::number(s.skewness);
  j["excess_kurtosis"] = detail::number(s.excess_kurtosis);
  j["median"] = detail::number(s.median);
  j["mean"] = detail::number(s.mean);
  j["sd"] = detail::number(s.sd);
  j["shape_defined"] = s.shape_defined;
  return j;
}

Json index_json(const IndexResult& r) {
  Json j;
  j["value"] = detail::number(r.value);
  Json conv = Json::array();
  for (Convention c : r.conventions) conv.push_back(to_string(c));
  j["conventions"] = conv;
  return j;
}

Json config_json(const ExperimentConfig& c) {
  Json j;
  j["model"] = c.model;
  j["mu"] = c.mu;
  j["sigma"] = c.sigma;
  if (c.model == "kou") {
    j["lambda"] = c.lambda;
    j["eta1_inv"] = c.eta1_inv;
    j["eta2_inv"] = c.eta2_inv;
    j["p"] = c.p;
  }
  j["T"] = c.sim.horizon;
  j["n_steps"] = c.sim.n_steps;
  j["n_paths"] = c.sim.n_paths;
  j["seed"] = c.sim.seed;
  j["ito_correction"] = c.ito_correction;
  return j;
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

// Values of the original 1000 x 1000 study, for side-by-side reading only.
struct ReferenceColumn {
  const char* label;
  double calmar, alpha_05, alpha_01, sharpe_running_min, sharpe_max_drawdown;
  double skew_min, kurt_min, median_min, mean_min, sd_min;
  double skew_mdd, kurt_mdd, median_mdd, mean_mdd, sd_mdd;
  double skew_T, kurt_T, median_T, mean_T, sd_T;
};

constexpr ReferenceColumn kReference[] = {
    {"brownian", 1.3718, 0.7950, 0.5998, 3.2652, 3.6670,
     -1.6448, 4.0113, -0.0351, -0.0452, 0.0369,
     1.6036, 4.3742, 0.0807, 0.0879, 0.0328,
     -0.1415, -0.0784, 0.1212, 0.1206, 0.1006},
    {"jump_diffusion", 2.8133, 1.3130, 0.9182, 5.2582, 5.2421,
     -2.2125, 7.1043, -0.0283, -0.0413, 0.0401,
     1.5868, 3.7368, 0.0925, 0.1040, 0.0454,
     0.4063, 0.5070, 0.3756, 0.3946, 0.2192},
};

Json reference_json(const ExperimentReport& r) {
  Json out;
  out["note"] = "informational only; not asserted";
  for (std::size_t m = 0; m < r.models.size() && m < std::size(kReference); ++m) {
    const ReferenceColumn& ref = kReference[m];
    const ModelReport& model = r.models[m];
    Json j;
    auto row = [&](const char* name, double reference, double observed) {
      Json e;
      e["reference"] = reference;
      e["observed"] = detail::number(observed);
      e["difference"] = detail::number(observed - reference);
      j[name] = e;
    };
    row("calmar", ref.calmar, model.estimates.front().calmar.value);
    for (const auto& est : model.estimates) {
      if (est.gamma == 0.05) row("alpha_0.05", ref.alpha_05, est.alpha.value);
      if (est.gamma == 0.01) row("alpha_0.01", ref.alpha_01, est.alpha.value);
    }
    row("sharpe_running_min", ref.sharpe_running_min, model.estimates.front().sharpe_running_min.value);
    row("sharpe_max_drawdown", ref.sharpe_max_drawdown, model.estimates.front().sharpe_max_drawdown.value);
    row("running_min.mean", ref.mean_min, model.running_min.mean);
    row("running_min.sd", ref.sd_min, model.running_min.sd);
    row("running_min.skewness", ref.skew_min, model.running_min.skewness);
    row("max_drawdown.mean", ref.mean_mdd, model.max_drawdown.mean);
    row("max_drawdown.sd", ref.sd_mdd, model.max_drawdown.sd);
    row("max_drawdown.skewness", ref.skew_mdd, model.max_drawdown.skewness);
    row("terminal.mean", ref.mean_T, model.terminal.mean);
    row("terminal.sd", ref.sd_T, model.terminal.sd);
    row("terminal.skewness", ref.skew_T, model.terminal.skewness);
    out[ref.label] = j;
  }
  return out;
}

}  // namespace

std::string report_json(const ExperimentReport& r) {
  Json j;
  j["format"] = "pathrisk-report/1";

  Json inputs = Json::array();
  for (const auto& in : r.inputs) {
    Json e;
    e["label"] = in.label;
    e["source"] = in.source;
    e["crc32"] = in.crc32 ? Json(hex32(*in.crc32)) : Json(nullptr);
    e["config"] = in.config ? config_json(*in.config) : Json(nullptr);
    inputs.push_back(e);
  }
  j["inputs"] = inputs;

  Json gammas = Json::array();
  for (double g : r.gammas) gammas.push_back(g);
  j["gammas"] = gammas;

  Json table1;
  for (const auto& m : r.models) {
    Json block;
    block["n_paths"] = m.n_paths;
    block["n_steps"] = m.n_steps;
    block["running_min"] = stats_json(m.running_min);
    block["max_drawdown"] = stats_json(m.max_drawdown);
    block["terminal"] = stats_json(m.terminal);
    table1[m.label] = block;
  }
  j["summary_statistics"] = table1;

  Json table2;
  for (const auto& m : r.models) {
    Json block;
    block["calmar"] = index_json(m.estimates.front().calmar);
    Json alphas = Json::array();
    for (const auto& est : m.estimates) {
      Json a;
      a["gamma"] = est.gamma;
      a["alpha"] = index_json(est.alpha);
      alphas.push_back(a);
    }
    block["alpha"] = alphas;
    block["sharpe_running_min"] = index_json(m.estimates.front().sharpe_running_min);
    block["sharpe_max_drawdown"] = index_json(m.estimates.front().sharpe_max_drawdown);
    table2[m.label] = block;
  }
  j["performance_indices"] = table2;

  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["detail"] = c.detail;
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["reference_comparison"] = reference_json(r);
  return detail::dump(j) + "\n";
}

std::string table1_csv(const ExperimentReport& r) {
  struct Column {
    std::string name;
    const SummaryStats* s;
  };
  std::vector<Column> cols;
  for (const auto& m : r.models) cols.push_back({"min_" + m.label, &m.running_min});
  for (const auto& m : r.models) cols.push_back({"mdd_" + m.label, &m.max_drawdown});
  for (const auto& m : r.models) cols.push_back({"terminal_" + m.label, &m.terminal});

  std::string out = "statistic";
  for (const auto& c : cols) out += "," + c.name;
  out += "\n";
  auto row = [&](const char* name, double SummaryStats::*field) {
    out += name;
    for (const auto& c : cols) out += "," + fmt(c.s->*field);
    out += "\n";
  };
  row("skewness", &SummaryStats::skewness);
  row("excess_kurtosis", &SummaryStats::excess_kurtosis);
  row("median", &SummaryStats::median);
  row("mean", &SummaryStats::mean);
  row("sd", &SummaryStats::sd);
  return out;
}

std::string table2_csv(const ExperimentReport& r) {
  std::string out = "index";
  for (const auto& m : r.models) out += "," + m.label;
  out += "\n";
  out += "calmar";
  for (const auto& m : r.models) out += "," + fmt(m.estimates.front().calmar.value);
  out += "\n";
  for (std::size_t g = 0; g < r.gammas.size(); ++g) {
    out += "alpha_" + label_number(r.gammas[g]);
    for (const auto& m : r.models) out += "," + fmt(m.estimates[g].alpha.value);
    out += "\n";
  }
  out += "sharpe_running_min";
  for (const auto& m : r.models) out += "," + fmt(m.estimates.front().sharpe_running_min.value);
  out += "\n";
  out += "sharpe_max_drawdown";
  for (const auto& m : r.models) out += "," + fmt(m.estimates.front().sharpe_max_drawdown.value);
  out += "\n";
  return out;
}

void write_report_bundle(const ExperimentReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_bytes(dir / "report.json", report_json(r));
  write_file_bytes(dir / "table1.csv", table1_csv(r));
  write_file_bytes(dir / "table2.csv", table2_csv(r));
  for (const auto& m : r.models) {
    write_file_bytes(dir / ("figure_running_min_" + m.label + ".csv"), histogram_csv(m.running_min_density));
    write_file_bytes(dir / ("figure_max_drawdown_" + m.label + ".csv"), histogram_csv(m.max_drawdown_density));
    write_file_bytes(dir / ("figure_terminal_" + m.label + ".csv"), histogram_csv(m.terminal_density));
  }
}

ExperimentConfig study_config(const StudyOptions& options, std::string_view model) {
  ExperimentConfig c;
  c.model = std::string(model);
  c.mu = 0.15;
  c.sigma = 0.20;
  c.lambda = 10.0;
  c.eta1_inv = 0.02;
  c.eta2_inv = 0.04;
  c.p = options.p;
  c.sim = SimConfig{1.0, options.n_steps, options.n_paths, options.seed};
  c.ito_correction = options.ito_correction;
  c.validate();
  return c;
}

ExperimentReport run_study(const StudyOptions& options, const SimOptions& sim_options,
                           const std::optional<std::filesystem::path>& out_dir) {
  const ExperimentConfig bm = study_config(options, "bm");
  const ExperimentConfig kou = study_config(options, "kou");
  SimOptions opts = sim_options;
  opts.ito_correction = options.ito_correction;
  const PathEnsemble x = simulate(bm.model_params(), bm.sim, opts);
  const PathEnsemble y = simulate(kou.model_params(), kou.sim, opts);
  const std::string x_bytes = encode_prsk(x);
  const std::string y_bytes = encode_prsk(y);

  std::vector<ReportInput> inputs;
  inputs.push_back({"brownian", "bm.prsk", crc32(x_bytes), bm});
  inputs.push_back({"jump_diffusion", "kou.prsk", crc32(y_bytes), kou});
  ExperimentReport r = build_report(x, y, options.gammas, std::move(inputs));
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    write_file_bytes(*out_dir / "bm.prsk", x_bytes);
    write_file_bytes(*out_dir / "kou.prsk", y_bytes);
    write_report_bundle(r, *out_dir);
  }
  return r;
}

}  // namespace pathrisk
