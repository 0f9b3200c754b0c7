#include "pathrisk/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "json_text.hpp"
#include "pathrisk/acceptability.hpp"
#include "pathrisk/ensemble_io.hpp"

namespace pathrisk {

using detail::Json;

namespace {

// Relative slack for comparisons that hold exactly on real numbers.
constexpr double kSlack = 1e-12;

bool approx_leq(double a, double b) {
  if (a <= b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  return a - b <= kSlack * std::max({1.0, std::abs(a), std::abs(b)});
}

bool same_index(double a, double b, double abs_tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= abs_tol;
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_double(x);
}

Json ensemble_object(const PathEnsemble& e) {
  Json j;
  Json grid = Json::array();
  for (double t : e.grid().times()) grid.push_back(t);
  Json probs = Json::array();
  for (double p : e.probs()) probs.push_back(p);
  Json values = Json::array();
  for (std::size_t s = 0; s < e.n_paths(); ++s) {
    Json row = Json::array();
    for (double v : e.path_values(s)) row.push_back(v);
    values.push_back(row);
  }
  j["grid"] = grid;
  j["probs"] = probs;
  j["values"] = values;
  return j;
}

PathEnsemble values_like(std::mt19937_64& rng, const PathEnsemble& shape) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> values(shape.values().size());
  for (double& v : values) v = unit(rng);
  return PathEnsemble(shape.grid(), std::move(values),
                      std::vector<double>(shape.probs().begin(), shape.probs().end()));
}

class Tally {
 public:
  explicit Tally(std::vector<PropertyVerdict>& out) : out_(out) {}

  // Records one check of property `name`; `witness` is only invoked on the first failure.
  void record(const std::string& name, bool ok, const std::function<Json()>& witness) {
    PropertyVerdict& v = find(name);
    ++v.checked;
    if (ok) return;
    ++v.failures;
    if (v.witness.empty()) v.witness = detail::dump(witness(), -1);
  }

 private:
  PropertyVerdict& find(const std::string& name) {
    for (auto& v : out_) {
      if (v.name == name) return v;
    }
    out_.push_back(PropertyVerdict{name, 0, 0, {}});
    return out_.back();
  }

  std::vector<PropertyVerdict>& out_;
};

}  // namespace

void VerifierOptions::validate() const {
  if (instances < 1) throw std::invalid_argument("instances must be >= 1");
  if (max_scenarios < 1) throw std::invalid_argument("max-scenarios must be >= 1");
  if (max_grid < 2) throw std::invalid_argument("max-grid must be >= 2");
}

bool VerifierReport::passed() const noexcept {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyVerdict& v) { return v.passed(); });
}

PathEnsemble random_instance(std::mt19937_64& rng, std::size_t max_scenarios, std::size_t max_grid) {
  std::uniform_int_distribution<std::size_t> scen(1, max_scenarios);
  std::uniform_int_distribution<std::size_t> points(2, max_grid);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  const std::size_t n_s = scen(rng);
  const std::size_t n_p = points(rng);
  std::vector<double> probs(n_s);
  double total = 0.0;
  for (double& p : probs) total += (p = weight(rng));
  for (double& p : probs) p /= total;

  const double mode = coin(rng);
  const bool lattice = coin(rng) < 0.3;
  std::vector<double> values(n_s * n_p);
  for (double& v : values) {
    v = unit(rng);
    if (lattice) v = std::round(v * 4.0) / 4.0;
    if (mode < 0.1) v = std::abs(v);
  }
  if (mode >= 0.1 && mode < 0.2) {
    for (std::size_t s = 0; s < n_s; ++s) values[s * n_p + n_p - 1] = -std::abs(values[s * n_p + n_p - 1]);
  }
  return PathEnsemble(TimeGrid::uniform(1.0, n_p - 1), std::move(values), std::move(probs));
}

BiVariateKernel random_unit_kernel(std::mt19937_64& rng, std::span<const double> probs,
                                   std::size_t n_points) {
  std::exponential_distribution<double> size(1.0);
  std::bernoulli_distribution sparse(0.5);
  const std::size_t n_s = probs.size();
  std::vector<double> pr(n_s * n_points, 0.0);
  std::vector<double> op(n_s * n_points, 0.0);
  for (std::size_t s = 0; s < n_s; ++s) {
    for (std::size_t i = 0; i < n_points; ++i) {
      if (i > 0 && !sparse(rng)) pr[s * n_points + i] = size(rng);
      if (!sparse(rng)) op[s * n_points + i] = size(rng);
    }
  }
  // Guarantee positive mass.
  op[n_points - 1] += 1.0;
  BiVariateKernel k(n_s, n_points, pr, op);
  const double m = k.mass(probs);
  for (double& d : pr) d /= m;
  for (double& d : op) d /= m;
  return BiVariateKernel(n_s, n_points, std::move(pr), std::move(op));
}

VerifierReport run_verifier(const VerifierOptions& options) {
  options.validate();
  VerifierReport report;
  report.options = options;
  Tally tally(report.properties);

  const PairingFn pair = options.inject_sign_flip
                             ? PairingFn([](const PathEnsemble& e, const BiVariateKernel& a) { return -pairing(e, a); })
                             : PairingFn(pairing);
  const double tol = kDefaultSearchTolerance;
  constexpr double kGammas[] = {0.1, 0.25, 0.5, 1.0};
  constexpr double kLevels[] = {0.0, 0.5, 1.0, 2.0, 5.0};

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> gamma_pick(0, std::size(kGammas) - 1);

  for (std::size_t k = 0; k < options.instances; ++k) {
    const PathEnsemble e = random_instance(rng, options.max_scenarios, options.max_grid);
    const auto probs = e.probs();
    const std::size_t n_s = e.n_paths();
    const std::size_t n_p = e.n_points();
    auto witness = [&](const std::string& detail) {
      return [&e, k, detail] {
        Json j;
        j["instance"] = k;
        j["ensemble"] = ensemble_object(e);
        j["detail"] = detail;
        return j;
      };
    };

    // Duality: norm bound, vertex optimality, vertex shortcut, order unit.
    const auto points = enumerate_extreme_points(n_s, n_p);
    double vertex_min = kInfinity;
    for (const auto& p : points) {
      const double shortcut = vertex_pairing(e, p);
      const double explicit_value = pair(e, p.to_kernel(probs, n_p));
      vertex_min = std::min(vertex_min, explicit_value);
      tally.record("extreme_point_pairing", same_index(shortcut, explicit_value, kSlack * std::max(1.0, std::abs(shortcut))),
                   witness("vertex (" + std::to_string(p.scenario) + "," + std::to_string(p.index) +
                           ") shortcut " + fmt(shortcut) + " explicit " + fmt(explicit_value)));
    }
    const PathEnsemble ones(e.grid(), std::vector<double>(e.values().size(), 1.0),
                            std::vector<double>(probs.begin(), probs.end()));
    for (int r = 0; r < 8; ++r) {
      const BiVariateKernel a = random_unit_kernel(rng, probs, n_p);
      const double v = pair(e, a);
      const double bound = r_inf_norm(e) * a.mass(probs);
      tally.record("pairing_norm_bound", approx_leq(std::abs(v), bound),
                   witness("|<X,A>| = " + fmt(std::abs(v)) + " > " + fmt(bound)));
      tally.record("extreme_point_optimality", approx_leq(vertex_min, v),
                   witness("sampled kernel " + fmt(v) + " below vertex minimum " + fmt(vertex_min)));
      const double unit = pair(ones, a);
      tally.record("order_unit_pairing", same_index(unit, 1.0, 1e-12),
                   witness("<1,A> = " + fmt(unit)));

      PathEnsemble bumped = e;
      {
        std::vector<double> vals(e.values().begin(), e.values().end());
        for (double& x : vals) x += coin(rng) < 0.5 ? 0.0 : coin(rng);
        bumped = PathEnsemble(e.grid(), std::move(vals), std::vector<double>(probs.begin(), probs.end()));
      }
      const double up = pair(bumped, a);
      tally.record("pairing_monotone", approx_leq(v, up),
                   witness("<X,A> = " + fmt(v) + " > <X',A> = " + fmt(up) + " for X <= X'"));
    }

    double expectation = 0.0;
    for (std::size_t s = 0; s < n_s; ++s) expectation += probs[s] * e.path_values(s).back();
    const double b_value = pair(e, terminal_kernel(n_s, n_p));
    tally.record("terminal_kernel_expectation", same_index(b_value, expectation, 1e-12),
                 witness("<X,B> = " + fmt(b_value) + " vs E[X_T] = " + fmt(expectation)));

    const IndexResult full = full_raroc(e);
    const IndexResult brute = alpha_bruteforce(e, tol, pair);
    const bool beyond_cap = std::isfinite(full.value) && full.value > kDefaultSearchCap;
    tally.record("alpha_bruteforce_matches_ratio",
                 beyond_cap ? std::isinf(brute.value) : same_index(brute.value, full.value, 2.0 * tol),
                 witness("alpha_bruteforce " + fmt(brute.value) + " vs E/rho " + fmt(full.value)));

    // Chain at a random level away from the boundary.
    double x = 0.0;
    do {
      x = std::exp(std::uniform_real_distribution<double>(-4.0, 4.0)(rng));
    } while (std::isfinite(full.value) && std::abs(x - full.value) <= 1e-6 * std::max(1.0, full.value));
    const EquivalenceChain chain = evaluate_chain(e, x, tol, pair);
    std::string links;
    const auto values = chain.links();
    for (std::size_t l = 0; l < values.size(); ++l) {
      links += std::string(l ? ", " : "") + EquivalenceChain::link_names()[l] + "=" + (values[l] ? "1" : "0");
    }
    tally.record("equivalence_chain", chain.consistent(), witness("x = " + fmt(x) + ": " + links));

    // Supporting-kernel sets.
    std::vector<BiVariateKernel> candidates;
    for (const auto& p : points) candidates.push_back(p.to_kernel(probs, n_p));
    for (int r = 0; r < 4; ++r) candidates.push_back(random_unit_kernel(rng, probs, n_p));
    candidates.push_back(terminal_kernel(n_s, n_p));
    const std::size_t b_index = candidates.size() - 1;
    std::vector<PathEnsemble> probes{e};
    for (int r = 0; r < 5; ++r) probes.push_back(values_like(rng, e));
    const AlphaFn alpha = [](const PathEnsemble& p) { return full_raroc(p).value; };
    std::vector<std::vector<std::size_t>> sets;
    for (double level : kLevels) sets.push_back(kernel_set_from_alpha(alpha, level, candidates, probes, pair));
    for (std::size_t a = 0; a + 1 < sets.size(); ++a) {
      const bool nested = std::includes(sets[a + 1].begin(), sets[a + 1].end(), sets[a].begin(), sets[a].end());
      tally.record("kernel_set_nesting", nested,
                   witness("set at x=" + fmt(kLevels[a]) + " not inside set at x=" + fmt(kLevels[a + 1])));
    }
    for (std::size_t a = 0; a < sets.size(); ++a) {
      const bool kept = std::binary_search(sets[a].begin(), sets[a].end(), b_index);
      tally.record("terminal_kernel_supports", kept,
                   witness("terminal kernel dropped at x=" + fmt(kLevels[a])));
    }

    // RAROC axioms on AVaR of the running minimum.
    const double gamma = kGammas[gamma_pick(rng)];
    const double base = raroc(e, gamma).value;
    const double lambda = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
    const double scaled = raroc(e.scaled(lambda), gamma).value;
    tally.record("raroc_scale_invariance",
                 std::isinf(base) ? scaled == base : std::abs(scaled - base) <= kSlack * std::max(1.0, base),
                 witness("gamma " + fmt(gamma) + " lambda " + fmt(lambda) + ": " + fmt(base) + " vs " + fmt(scaled)));

    {
      std::vector<double> vals(e.values().begin(), e.values().end());
      for (double& v : vals) v += coin(rng) < 0.5 ? 0.0 : coin(rng);
      const PathEnsemble up(e.grid(), std::move(vals), std::vector<double>(probs.begin(), probs.end()));
      const double raised = raroc(up, gamma).value;
      tally.record("raroc_monotonicity", approx_leq(base, raised),
                   witness("gamma " + fmt(gamma) + ": raroc(X) " + fmt(base) + " > raroc(X') " + fmt(raised)));
    }

    {
      const PathEnsemble other = values_like(rng, e);
      const double other_value = raroc(other, gamma).value;
      for (int r = 0; r < 10; ++r) {
        const double w = coin(rng);
        const double mixed = raroc(convex_combination(e, other, w), gamma).value;
        tally.record("raroc_quasi_concavity", approx_leq(std::min(base, other_value), mixed),
                     witness("gamma " + fmt(gamma) + " w " + fmt(w) + ": mix " + fmt(mixed) +
                             " below min(" + fmt(base) + ", " + fmt(other_value) + ")"));
      }
    }

    {
      const PathEnsemble noise = values_like(rng, e);
      for (int n : {40, 45, 50}) {
        const double eps = std::ldexp(1.0, -n);
        std::vector<double> vals(e.values().begin(), e.values().end());
        for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += eps * noise.values()[i];
        const PathEnsemble near(e.grid(), std::move(vals), std::vector<double>(probs.begin(), probs.end()));
        const double approx = raroc(near, gamma).value;
        const bool ok = std::isinf(base) || approx <= base * (1.0 + 1e-6) + 1e-6;
        tally.record("raroc_fatou", ok,
                     witness("gamma " + fmt(gamma) + " n " + std::to_string(n) + ": " + fmt(approx) +
                             " exceeds limit value " + fmt(base)));
      }
    }

    {
      const IndexResult sup = alpha_sup(raroc_family(gamma), e, tol);
      const bool beyond = std::isfinite(base) && base > kDefaultSearchCap;
      tally.record("alpha_sup_matches_raroc", beyond ? std::isinf(sup.value) : same_index(sup.value, base, 2.0 * tol),
                   witness("gamma " + fmt(gamma) + ": alpha_sup " + fmt(sup.value) + " vs raroc " + fmt(base)));
    }
  }
  return report;
}

std::string verifier_report_json(const VerifierReport& report) {
  Json j;
  j["format"] = "pathrisk-verify/1";
  Json opts;
  opts["instances"] = report.options.instances;
  opts["max_scenarios"] = report.options.max_scenarios;
  opts["max_grid"] = report.options.max_grid;
  opts["seed"] = report.options.seed;
  opts["inject_sign_flip"] = report.options.inject_sign_flip;
  j["options"] = opts;
  Json props = Json::array();
  for (const auto& v : report.properties) {
    Json p;
    p["name"] = v.name;
    p["checked"] = v.checked;
    p["failures"] = v.failures;
    p["passed"] = v.passed();
    p["witness"] = v.witness.empty() ? Json(nullptr) : Json::parse(v.witness);
    props.push_back(p);
  }
  j["properties"] = props;
  j["passed"] = report.passed();
  return detail::dump(j) + "\n";
}

std::string ensemble_json(const PathEnsemble& e) { return detail::dump(ensemble_object(e)); }

}  // namespace pathrisk
