#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pathrisk/duality.hpp"
#include "pathrisk/paths.hpp"

namespace pathrisk {

struct VerifierOptions {
  std::size_t instances = 200;
  std::size_t max_scenarios = 4;
  std::size_t max_grid = 5;  // grid points, >= 2
  std::uint64_t seed = 7;
  /// Test mode: every pairing evaluation returns -<X, A>.
  bool inject_sign_flip = false;

  void validate() const;
};

struct PropertyVerdict {
  std::string name;
  std::size_t checked = 0;
  std::size_t failures = 0;
  /// JSON object describing the first counterexample; empty when none.
  std::string witness;

  bool passed() const noexcept { return failures == 0; }
};

struct VerifierReport {
  VerifierOptions options;
  std::vector<PropertyVerdict> properties;

  bool passed() const noexcept;
};

/// Random finite instance: 1..max_scenarios paths on a uniform grid of
/// 2..max_grid points, random positive probabilities. A fraction of the
/// draws is forced nonnegative or given a nonpositive terminal mean so the
/// index conventions are exercised.
PathEnsemble random_instance(std::mt19937_64& rng, std::size_t max_scenarios, std::size_t max_grid);

/// A random element of D_sigma for the given shape.
BiVariateKernel random_unit_kernel(std::mt19937_64& rng, std::span<const double> probs,
                                   std::size_t n_points);

/// Runs the duality properties and the RAROC axiom suite on
/// `options.instances` random instances.
VerifierReport run_verifier(const VerifierOptions& options);

std::string verifier_report_json(const VerifierReport& report);

/// Ensemble as a JSON object {grid, probs, values}.
std::string ensemble_json(const PathEnsemble& e);

}  // namespace pathrisk
