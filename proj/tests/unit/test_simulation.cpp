#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pathrisk/simulation.hpp"

using namespace pathrisk;

namespace {

KouParams study_kou(double sigma = 0.2) {
  KouParams k;
  k.diffusion = {0.15, sigma};
  k.lambda = 10.0;
  k.eta1 = 1.0 / 0.02;
  k.eta2 = 1.0 / 0.04;
  k.p = 0.5;
  return k;
}

}  // namespace

TEST(Params, Validation) {
  EXPECT_THROW((BrownianParams{0.0, -1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((BrownianParams{NAN, 1.0}.validate()), std::invalid_argument);
  KouParams k = study_kou();
  k.eta1 = 0.0;
  EXPECT_THROW(k.validate(), std::invalid_argument);
  k = study_kou();
  k.p = 1.5;
  EXPECT_THROW(k.validate(), std::invalid_argument);
  k = study_kou();
  k.lambda = -1.0;
  EXPECT_THROW(k.validate(), std::invalid_argument);
  EXPECT_THROW((SimConfig{0.0, 10, 10, 1}.validate()), std::invalid_argument);
  EXPECT_THROW((SimConfig{1.0, 0, 10, 1}.validate()), std::invalid_argument);
  EXPECT_THROW((SimConfig{1.0, 10, 0, 1}.validate()), std::invalid_argument);
}

TEST(KouParams, JumpMomentsMatchStudyValues) {
  const KouParams k = study_kou();
  EXPECT_NEAR(k.mean_jump(), 0.5 * 0.02 - 0.5 * 0.04, 1e-15);
  EXPECT_NEAR(std::sqrt(k.second_moment_jump()), std::sqrt(0.002), 1e-15);
  EXPECT_NEAR(std::sqrt(k.second_moment_jump()), 0.0447, 5e-5);
}

TEST(SimulateBm, ZeroVolatilityIsDeterministicDrift) {
  const PathEnsemble e = simulate_bm({0.15, 0.0}, SimConfig{2.0, 50, 3, 5});
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t i = 0; i < e.n_points(); ++i) {
      EXPECT_NEAR(e.path_values(s)[i], 0.15 * e.grid()[i], 1e-13);
    }
  }
}

TEST(SimulateBm, SameSeedIsBitwiseIdentical) {
  const SimConfig cfg{1.0, 100, 64, 42};
  EXPECT_EQ(simulate_bm({0.15, 0.2}, cfg), simulate_bm({0.15, 0.2}, cfg));
  SimConfig other = cfg;
  other.seed = 43;
  EXPECT_FALSE(simulate_bm({0.15, 0.2}, cfg) == simulate_bm({0.15, 0.2}, other));
}

TEST(SimulateBm, IndependentOfThreadCount) {
  const SimConfig cfg{1.0, 50, 37, 42};
  const PathEnsemble one = simulate(KouParams(study_kou()), cfg, SimOptions{1, false});
  for (unsigned t : {2u, 4u, 8u}) EXPECT_EQ(simulate(KouParams(study_kou()), cfg, SimOptions{t, false}), one);
}

TEST(SimulateBm, TerminalMomentsDriftless) {
  const auto paths = simulate_features(BrownianParams{0.0, 1.0}, SimConfig{1.0, 10, 100000, 3});
  double sum = 0.0, sum2 = 0.0;
  for (const auto& p : paths) {
    sum += p.features.terminal;
    sum2 += p.features.terminal * p.features.terminal;
  }
  const double n = static_cast<double>(paths.size());
  EXPECT_NEAR(sum / n, 0.0, 3.0 / std::sqrt(n));
  const double sd = std::sqrt(sum2 / n - (sum / n) * (sum / n));
  EXPECT_NEAR(sd, 1.0, 3.0 / std::sqrt(2.0 * n));
}

TEST(SimulateBm, TerminalMomentsWithDrift) {
  const auto paths = simulate_features(BrownianParams{0.15, 0.2}, SimConfig{1.0, 20, 50000, 4});
  double sum = 0.0, sum2 = 0.0;
  for (const auto& p : paths) {
    sum += p.features.terminal;
    sum2 += p.features.terminal * p.features.terminal;
  }
  const double n = static_cast<double>(paths.size());
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.15, 3.0 * 0.2 / std::sqrt(n));
  EXPECT_NEAR(std::sqrt(sum2 / n - mean * mean), 0.2, 3.0 * 0.2 / std::sqrt(2.0 * n));
}

TEST(SimulateBm, ItoCorrectionShiftsDrift) {
  const SimConfig cfg{1.0, 10, 4, 8};
  const PathEnsemble plain = simulate_bm({0.15, 0.2}, cfg, SimOptions{1, false});
  const PathEnsemble corrected = simulate_bm({0.15, 0.2}, cfg, SimOptions{1, true});
  for (std::size_t s = 0; s < 4; ++s) {
    EXPECT_NEAR(plain.path_values(s).back() - corrected.path_values(s).back(), 0.5 * 0.04, 1e-12);
  }
}

TEST(SimulateBm, FeaturesMatchStoredEnsemble) {
  const SimConfig cfg{1.0, 200, 25, 77};
  const PathEnsemble e = simulate(KouParams(study_kou()), cfg);
  const auto features = simulate_features(KouParams(study_kou()), cfg);
  for (std::size_t s = 0; s < 25; ++s) {
    const PathFeatures f = path_features(e.path_values(s));
    EXPECT_EQ(features[s].features.terminal, f.terminal);
    EXPECT_EQ(features[s].features.running_min, f.running_min);
    EXPECT_EQ(features[s].features.max_drawdown, f.max_drawdown);
  }
}

TEST(SimulatePath, MatchesEnsembleRows) {
  const SimConfig cfg{1.0, 30, 5, 11};
  const PathEnsemble e = simulate(KouParams(study_kou()), cfg);
  std::vector<double> row(31);
  simulate_path(KouParams(study_kou()), cfg, false, 3, row);
  EXPECT_TRUE(std::equal(row.begin(), row.end(), e.path_values(3).begin()));
  std::vector<double> wrong(5);
  EXPECT_THROW(simulate_path(KouParams(study_kou()), cfg, false, 3, wrong), GridMismatch);
}

TEST(DoubleExponential, OneSidedMean) {
  CounterStream rng(1);
  constexpr int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_double_exponential(50.0, 25.0, 1.0, rng);
  EXPECT_NEAR(sum / n, 0.02, 3.0 * 0.02 / std::sqrt(n));
}

TEST(DoubleExponential, SymmetricLaplaceAndStudyVolatility) {
  CounterStream rng(2);
  constexpr int n = 1000000;
  double sym = 0.0;
  for (int i = 0; i < n; ++i) sym += sample_double_exponential(10.0, 10.0, 0.5, rng);
  EXPECT_NEAR(sym / n, 0.0, 3.0 * std::sqrt(2.0) * 0.1 / std::sqrt(n));

  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double j = sample_double_exponential(50.0, 25.0, 0.5, rng);
    sq += j * j;
  }
  EXPECT_NEAR(std::sqrt(sq / n), 0.0447, 0.0447 * 0.01);
}

TEST(Poisson, MeanAndVariance) {
  for (double mean : {0.01, 1.0, 5.0}) {
    CounterStream rng(3);
    constexpr int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(sample_poisson(mean, rng));
      s += k;
      s2 += k * k;
    }
    const double m = s / n;
    EXPECT_NEAR(m, mean, 4.0 * std::sqrt(mean / n)) << mean;
    EXPECT_NEAR(s2 / n - m * m, mean, 0.05 * mean + 4.0 * std::sqrt(2.0 * mean * mean / n)) << mean;
  }
  CounterStream rng(4);
  EXPECT_EQ(sample_poisson(0.0, rng), 0u);
}

TEST(SimulateKou, NoJumpsEqualsBrownian) {
  KouParams k = study_kou();
  k.lambda = 0.0;
  const SimConfig cfg{1.0, 100, 20, 42};
  EXPECT_EQ(simulate_kou(k, cfg), simulate_bm(k.diffusion, cfg));
}

TEST(SimulateKou, SharesDiffusionWithBrownian) {
  // Same seed: Y - X is the pure jump part, so it is piecewise constant between jump steps.
  const SimConfig cfg{1.0, 1000, 50, 42};
  const PathEnsemble x = simulate_bm({0.15, 0.2}, cfg);
  KouParams k = study_kou();
  const PathEnsemble y = simulate_kou(k, cfg);
  KouParams jumps_only = k;
  jumps_only.diffusion = {0.0, 0.0};
  const PathEnsemble j = simulate_kou(jumps_only, cfg);
  for (std::size_t s = 0; s < 50; ++s) {
    for (std::size_t i = 0; i < 1001; ++i) {
      EXPECT_NEAR(y.path_values(s)[i], x.path_values(s)[i] + j.path_values(s)[i], 1e-12);
    }
  }
}

TEST(SimulateKou, MeanJumpCount) {
  const auto paths = simulate_features(study_kou(), SimConfig{1.0, 1000, 10000, 5});
  double total = 0.0;
  for (const auto& p : paths) total += static_cast<double>(p.jumps);
  EXPECT_NEAR(total / 10000.0, 10.0, 3.0 * std::sqrt(10.0 / 10000.0));
}

TEST(SimulateKou, CompoundPoissonMean) {
  const KouParams k = study_kou(0.0);
  KouParams pure = k;
  pure.diffusion.mu = 0.0;
  const auto paths = simulate_features(pure, SimConfig{1.0, 100, 100000, 6});
  double sum = 0.0;
  for (const auto& p : paths) sum += p.features.terminal;
  const double n = static_cast<double>(paths.size());
  const double expected = 10.0 * k.mean_jump();
  EXPECT_NEAR(sum / n, expected, 3.0 * std::sqrt(10.0 * k.second_moment_jump() / n));
}

TEST(SimulateBm, RunningMinimumLawAtModerateSize) {
  const double mu = 0.15, sigma = 0.2;
  const auto paths = simulate_features(BrownianParams{mu, sigma}, SimConfig{1.0, 2000, 20000, 12});
  std::vector<double> mins;
  for (const auto& p : paths) mins.push_back(p.features.running_min);
  std::sort(mins.begin(), mins.end());
  double worst = 0.0;
  const double n = static_cast<double>(mins.size());
  for (std::size_t i = 0; i < mins.size(); ++i) {
    if (mins[i] >= 0.0) break;
    const double f = test::oracle::running_min_cdf(mins[i], mu, sigma, 1.0);
    worst = std::max({worst, std::abs(f - (i + 1) / n), std::abs(f - i / n)});
  }
  // Discrete monitoring biases the minimum upward; the gap is of order sigma * sqrt(dt).
  EXPECT_LT(worst, 0.05);
}

TEST(SimulateBm, GridRefinementIsCauchy) {
  // One fine path per scenario, read at strides 8, 4, 2, 1.
  const SimConfig fine{1.0, 2000, 4000, 21};
  const BrownianParams bm{0.15, 0.2};
  std::vector<double> row(fine.n_steps + 1);
  std::vector<double> mean_mdd(4, 0.0);
  for (std::size_t s = 0; s < fine.n_paths; ++s) {
    simulate_path(bm, fine, false, s, row);
    for (std::size_t level = 0; level < 4; ++level) {
      const std::size_t stride = std::size_t{8} >> level;
      std::vector<double> coarse;
      for (std::size_t i = 0; i < row.size(); i += stride) coarse.push_back(row[i]);
      mean_mdd[level] += max_drawdown(coarse) / static_cast<double>(fine.n_paths);
    }
  }
  const double d1 = std::abs(mean_mdd[1] - mean_mdd[0]);
  const double d2 = std::abs(mean_mdd[2] - mean_mdd[1]);
  const double d3 = std::abs(mean_mdd[3] - mean_mdd[2]);
  EXPECT_GT(d1, d2);
  EXPECT_GT(d2, d3);
  EXPECT_GE(mean_mdd[3], mean_mdd[0]);
}

TEST(ThreadCount, EnvironmentCap) {
  EXPECT_GE(resolve_thread_count(0), 1u);
  EXPECT_EQ(resolve_thread_count(1), 1u);
  setenv("PATHRISK_THREADS", "2", 1);
  EXPECT_EQ(resolve_thread_count(8), 2u);
  EXPECT_EQ(resolve_thread_count(1), 1u);
  setenv("PATHRISK_THREADS", "junk", 1);
  EXPECT_EQ(resolve_thread_count(8), 8u);
  unsetenv("PATHRISK_THREADS");
}
