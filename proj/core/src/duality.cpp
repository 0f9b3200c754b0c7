#include "pathrisk/duality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace pathrisk {

BiVariateKernel::BiVariateKernel(std::size_t n_scenarios, std::size_t n_points)
    : n_scenarios_(n_scenarios),
      n_points_(n_points),
      pr_(n_scenarios * n_points, 0.0),
      op_(n_scenarios * n_points, 0.0) {
  if (n_scenarios == 0 || n_points < 2) throw std::invalid_argument("kernel shape is empty");
}

BiVariateKernel::BiVariateKernel(std::size_t n_scenarios, std::size_t n_points,
                                 std::vector<double> predictable, std::vector<double> optional)
    : n_scenarios_(n_scenarios),
      n_points_(n_points),
      pr_(std::move(predictable)),
      op_(std::move(optional)) {
  if (n_scenarios == 0 || n_points < 2) throw std::invalid_argument("kernel shape is empty");
  if (pr_.size() != n_scenarios * n_points || op_.size() != n_scenarios * n_points) {
    throw GridMismatch("kernel increments do not match n_scenarios x n_points");
  }
  for (std::size_t s = 0; s < n_scenarios; ++s) {
    if (pr_[s * n_points] != 0.0) {
      throw std::invalid_argument("predictable part must vanish at t_0");
    }
  }
}

void BiVariateKernel::set(KernelPart part, std::size_t scenario, std::size_t index,
                          double increment) {
  if (scenario >= n_scenarios_ || index >= n_points_) throw std::out_of_range("kernel coordinate");
  if (part == KernelPart::predictable) {
    if (index == 0) throw std::invalid_argument("predictable part must vanish at t_0");
    pr_[scenario * n_points_ + index] = increment;
  } else {
    op_[scenario * n_points_ + index] = increment;
  }
}

double BiVariateKernel::mass(std::span<const double> probs) const {
  if (probs.size() != n_scenarios_) throw GridMismatch("probabilities do not match the kernel");
  double acc = 0.0;
  for (std::size_t s = 0; s < n_scenarios_; ++s) {
    double var = 0.0;
    for (double d : predictable(s)) var += std::abs(d);
    for (double d : optional(s)) var += std::abs(d);
    acc += probs[s] * var;
  }
  return acc;
}

bool BiVariateKernel::in_unit_base(std::span<const double> probs) const {
  const auto nonneg = [](double d) { return d >= 0.0; };
  if (!std::all_of(pr_.begin(), pr_.end(), nonneg)) return false;
  if (!std::all_of(op_.begin(), op_.end(), nonneg)) return false;
  return std::abs(mass(probs) - 1.0) <= kProbabilitySumTolerance;
}

BiVariateKernel BiVariateKernel::mix(double weight, const BiVariateKernel& a,
                                     const BiVariateKernel& b) {
  if (a.n_scenarios_ != b.n_scenarios_ || a.n_points_ != b.n_points_) {
    throw GridMismatch("kernels differ in shape");
  }
  std::vector<double> pr(a.pr_.size());
  std::vector<double> op(a.op_.size());
  for (std::size_t i = 0; i < pr.size(); ++i) {
    pr[i] = weight * a.pr_[i] + (1.0 - weight) * b.pr_[i];
    op[i] = weight * a.op_[i] + (1.0 - weight) * b.op_[i];
  }
  return BiVariateKernel(a.n_scenarios_, a.n_points_, std::move(pr), std::move(op));
}

BiVariateKernel KernelExtremePoint::to_kernel(std::span<const double> probs,
                                              std::size_t n_points) const {
  BiVariateKernel k(probs.size(), n_points);
  k.set(part, scenario, index, 1.0 / probs[scenario]);
  return k;
}

double pairing(const PathEnsemble& e, const BiVariateKernel& a) {
  if (e.n_paths() != a.n_scenarios() || e.n_points() != a.n_points()) {
    throw GridMismatch("kernel and ensemble differ in shape");
  }
  double acc = 0.0;
  for (std::size_t s = 0; s < e.n_paths(); ++s) {
    const auto x = e.path_values(s);
    const auto pr = a.predictable(s);
    const auto op = a.optional(s);
    double inner = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) inner += x[i - 1] * pr[i];
    for (std::size_t i = 0; i < x.size(); ++i) inner += x[i] * op[i];
    acc += e.probs()[s] * inner;
  }
  return acc;
}

double vertex_pairing(const PathEnsemble& e, const KernelExtremePoint& point) {
  const auto x = e.path_values(point.scenario);
  return point.part == KernelPart::predictable ? x[point.index - 1] : x[point.index];
}

std::vector<KernelExtremePoint> enumerate_extreme_points(std::size_t n_scenarios,
                                                         std::size_t n_points) {
  std::vector<KernelExtremePoint> points;
  points.reserve(n_scenarios * (2 * n_points - 1));
  for (std::size_t s = 0; s < n_scenarios; ++s) {
    for (std::size_t i = 1; i < n_points; ++i) points.push_back({s, i, KernelPart::predictable});
    for (std::size_t i = 0; i < n_points; ++i) points.push_back({s, i, KernelPart::optional});
  }
  return points;
}

double rho_full(const PathEnsemble& e) {
  double lowest = kInfinity;
  for (const KernelExtremePoint& p : enumerate_extreme_points(e.n_paths(), e.n_points())) {
    lowest = std::min(lowest, vertex_pairing(e, p));
  }
  return -lowest;
}

BiVariateKernel terminal_kernel(std::size_t n_scenarios, std::size_t n_points) {
  BiVariateKernel b(n_scenarios, n_points);
  for (std::size_t s = 0; s < n_scenarios; ++s) b.set(KernelPart::optional, s, n_points - 1, 1.0);
  return b;
}

BiVariateKernel tilde_kernel(double x, const BiVariateKernel& a, std::span<const double> probs) {
  if (!(x >= 0.0)) throw std::invalid_argument("level x must be nonnegative");
  if (!a.in_unit_base(probs)) throw std::invalid_argument("kernel is not in D_sigma");
  const BiVariateKernel b = terminal_kernel(a.n_scenarios(), a.n_points());
  return BiVariateKernel::mix(1.0 / (1.0 + x), b, a);
}

double min_tilde_pairing(const PathEnsemble& e, double x, const PairingFn& pair) {
  double lowest = kInfinity;
  for (const KernelExtremePoint& p : enumerate_extreme_points(e.n_paths(), e.n_points())) {
    const BiVariateKernel vertex = p.to_kernel(e.probs(), e.n_points());
    lowest = std::min(lowest, pair(e, tilde_kernel(x, vertex, e.probs())));
  }
  return lowest;
}

IndexResult alpha_bruteforce(const PathEnsemble& e, double tol, const PairingFn& pair) {
  if (!(tol > 0.0)) throw std::invalid_argument("bisection tolerance must be positive");
  double lo = 0.0;
  double hi = kDefaultSearchCap;
  if (min_tilde_pairing(e, lo, pair) < 0.0) return {0.0, {Convention::empty_acceptance_set}};
  if (min_tilde_pairing(e, hi, pair) >= 0.0) return {kInfinity, {Convention::search_cap_reached}};
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (min_tilde_pairing(e, mid, pair) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo + 0.5 * (hi - lo), {}};
}

IndexResult full_raroc(const PathEnsemble& e) {
  const double risk = rho_full(e);
  if (risk <= 0.0) return {kInfinity, {Convention::denominator_nonpositive}};
  double expectation = 0.0;
  for (std::size_t s = 0; s < e.n_paths(); ++s) {
    expectation += e.probs()[s] * e.path_values(s).back();
  }
  if (expectation <= 0.0) return {0.0, {Convention::numerator_nonpositive}};
  return {expectation / risk, {}};
}

std::array<bool, EquivalenceChain::kLinks> EquivalenceChain::links() const noexcept {
  return {alpha_at_least_x,   ratio_at_least_x,      reward_covers_risk,         mixed_value_nonneg,
          inf_of_mixture_nonneg, linear_tilde_pairing_nonneg, tilde_pairing_nonneg};
}

const std::array<const char*, EquivalenceChain::kLinks>& EquivalenceChain::link_names() noexcept {
  static const std::array<const char*, kLinks> names = {
      "alpha_at_least_x",      "ratio_at_least_x",
      "reward_covers_risk",    "mixed_value_nonneg",
      "inf_of_mixture_nonneg", "linear_tilde_pairing_nonneg",
      "tilde_pairing_nonneg"};
  return names;
}

bool EquivalenceChain::consistent() const noexcept {
  const auto l = links();
  return std::all_of(l.begin(), l.end(), [&](bool b) { return b == l.front(); });
}

EquivalenceChain evaluate_chain(const PathEnsemble& e, double x, double tol, const PairingFn& pair) {
  if (!(x > 0.0)) throw std::invalid_argument("chain level x must be positive");
  EquivalenceChain c;
  c.x = x;
  for (std::size_t s = 0; s < e.n_paths(); ++s) {
    c.expectation += e.probs()[s] * e.path_values(s).back();
  }
  c.risk = rho_full(e);
  c.alpha = alpha_bruteforce(e, tol, pair).value;

  const double w_b = 1.0 / (1.0 + x);
  const double w_a = x / (1.0 + x);
  c.alpha_at_least_x = c.alpha >= x;
  c.ratio_at_least_x = full_raroc(e).value >= x;
  c.reward_covers_risk = c.expectation - x * c.risk >= 0.0;
  c.mixed_value_nonneg = w_b * c.expectation - w_a * c.risk >= 0.0;

  const auto points = enumerate_extreme_points(e.n_paths(), e.n_points());
  const double b_value = pair(e, terminal_kernel(e.n_paths(), e.n_points()));
  double inf_mixture = kInfinity;
  double inf_linear = kInfinity;
  for (const KernelExtremePoint& p : points) {
    inf_mixture = std::min(inf_mixture, w_b * c.expectation + w_a * vertex_pairing(e, p));
    inf_linear = std::min(inf_linear, w_b * b_value + w_a * pair(e, p.to_kernel(e.probs(), e.n_points())));
  }
  c.inf_of_mixture_nonneg = inf_mixture >= 0.0;
  c.linear_tilde_pairing_nonneg = inf_linear >= 0.0;
  c.tilde_pairing_nonneg = min_tilde_pairing(e, x, pair) >= 0.0;
  return c;
}

std::vector<std::size_t> kernel_set_from_alpha(const AlphaFn& alpha, double x,
                                               std::span<const BiVariateKernel> candidates,
                                               std::span<const PathEnsemble> probes,
                                               const PairingFn& pair) {
  std::vector<const PathEnsemble*> binding;
  for (const PathEnsemble& probe : probes) {
    if (alpha(probe) > x) binding.push_back(&probe);
  }
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const bool supports = std::all_of(binding.begin(), binding.end(), [&](const PathEnsemble* p) {
      return pair(*p, candidates[k]) >= 0.0;
    });
    if (supports) kept.push_back(k);
  }
  return kept;
}

}  // namespace pathrisk
