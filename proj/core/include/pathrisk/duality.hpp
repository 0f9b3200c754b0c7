#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pathrisk/acceptability.hpp"
#include "pathrisk/paths.hpp"

namespace pathrisk {

enum class KernelPart { predictable, optional };

/// Discrete bivariate kernel A = (A^pr, A^op) on a finite scenario set and grid.
/// Stored as per-scenario increment arrays of length n_points; the predictable
/// increment at t_0 is always zero.
class BiVariateKernel {
 public:
  BiVariateKernel(std::size_t n_scenarios, std::size_t n_points);
  BiVariateKernel(std::size_t n_scenarios, std::size_t n_points, std::vector<double> predictable,
                  std::vector<double> optional);

  std::size_t n_scenarios() const noexcept { return n_scenarios_; }
  std::size_t n_points() const noexcept { return n_points_; }

  std::span<const double> predictable(std::size_t scenario) const noexcept {
    return std::span<const double>(pr_).subspan(scenario * n_points_, n_points_);
  }
  std::span<const double> optional(std::size_t scenario) const noexcept {
    return std::span<const double>(op_).subspan(scenario * n_points_, n_points_);
  }

  void set(KernelPart part, std::size_t scenario, std::size_t index, double increment);

  /// E[Var(A^pr) + Var(A^op)] for nonnegative increments; the A^1 norm.
  double mass(std::span<const double> probs) const;

  /// Membership in D_sigma: nonnegative increments with unit expected mass.
  bool in_unit_base(std::span<const double> probs) const;

  /// weight * a + (1 - weight) * b.
  static BiVariateKernel mix(double weight, const BiVariateKernel& a, const BiVariateKernel& b);

  friend bool operator==(const BiVariateKernel&, const BiVariateKernel&) = default;

 private:
  std::size_t n_scenarios_;
  std::size_t n_points_;
  std::vector<double> pr_;
  std::vector<double> op_;
};

/// A vertex of D_sigma: all mass 1/p_omega on one coordinate.
struct KernelExtremePoint {
  std::size_t scenario = 0;
  std::size_t index = 0;
  KernelPart part = KernelPart::optional;

  BiVariateKernel to_kernel(std::span<const double> probs, std::size_t n_points) const;
};

using PairingFn = std::function<double(const PathEnsemble&, const BiVariateKernel&)>;

/// <X, A> = sum_w p_w [ sum_{i>=1} X_{i-1} dA^pr_i + sum_{i>=0} X_i dA^op_i ].
double pairing(const PathEnsemble& e, const BiVariateKernel& a);

/// Pairing against an extreme point; the probability cancels the 1/p mass.
double vertex_pairing(const PathEnsemble& e, const KernelExtremePoint& point);

/// Every (scenario, index, part) with predictable parts restricted to index >= 1.
std::vector<KernelExtremePoint> enumerate_extreme_points(std::size_t n_scenarios,
                                                         std::size_t n_points);

/// rho(X) = -inf_{A in D_sigma} <X, A>, minimized over the vertices.
double rho_full(const PathEnsemble& e);

/// B = (0, 1_{T <= t}): unit optional mass at the horizon in every scenario.
BiVariateKernel terminal_kernel(std::size_t n_scenarios, std::size_t n_points);

/// A~ = 1/(1+x) B + x/(1+x) A for A in D_sigma.
BiVariateKernel tilde_kernel(double x, const BiVariateKernel& a, std::span<const double> probs);

/// inf over { A~(x, A) : A a vertex of D_sigma } of <X, A~>, by explicit pairing.
double min_tilde_pairing(const PathEnsemble& e, double x, const PairingFn& pair = pairing);

/// alpha(X) = sup{x >= 0 : inf_{A~ in Q^x} <X, A~> >= 0} by bisection on x.
IndexResult alpha_bruteforce(const PathEnsemble& e, double tol = kDefaultSearchTolerance,
                             const PairingFn& pair = pairing);

/// E[X_T] / rho_full(X) with the index conventions: +inf when rho_full <= 0,
/// 0 when E[X_T] <= 0 < rho_full.
IndexResult full_raroc(const PathEnsemble& e);

/// One evaluation of the RAROC equivalence chain at level x > 0. Every link is
/// computed independently; on exact arithmetic they all agree.
struct EquivalenceChain {
  double x = 0.0;
  double expectation = 0.0;   // E[X_T]
  double risk = 0.0;          // rho_full(X)
  double alpha = 0.0;         // alpha_bruteforce(X)

  bool alpha_at_least_x = false;          // alpha_bruteforce(X) >= x
  bool ratio_at_least_x = false;          // full_raroc(X) >= x
  bool reward_covers_risk = false;        // E - x rho >= 0
  bool mixed_value_nonneg = false;        // E/(1+x) - x/(1+x) rho >= 0
  bool inf_of_mixture_nonneg = false;     // inf_A E/(1+x) + x/(1+x) <X, A> >= 0
  bool linear_tilde_pairing_nonneg = false;  // inf_A <X,B>/(1+x) + x/(1+x) <X,A> >= 0
  bool tilde_pairing_nonneg = false;      // inf_A <X, A~(x, A)> >= 0

  static constexpr std::size_t kLinks = 7;
  std::array<bool, kLinks> links() const noexcept;
  static const std::array<const char*, kLinks>& link_names() noexcept;
  bool consistent() const noexcept;
};

EquivalenceChain evaluate_chain(const PathEnsemble& e, double x,
                                double tol = kDefaultSearchTolerance,
                                const PairingFn& pair = pairing);

using AlphaFn = std::function<double(const PathEnsemble&)>;

/// Indices of the candidates A with <X, A> >= 0 for every probe X with alpha(X) > x.
std::vector<std::size_t> kernel_set_from_alpha(const AlphaFn& alpha, double x,
                                               std::span<const BiVariateKernel> candidates,
                                               std::span<const PathEnsemble> probes,
                                               const PairingFn& pair = pairing);

}  // namespace pathrisk
