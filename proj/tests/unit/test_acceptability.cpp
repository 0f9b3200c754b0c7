#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "pathrisk/acceptability.hpp"

using namespace pathrisk;

namespace {

// finals {0.2, 0.4}, running minima {-0.1, -0.3}, max drawdowns {0.8, 0.2}.
PathEnsemble two_path_hand_ensemble() {
  return PathEnsemble(TimeGrid::uniform(1.0, 3), {0.0, 0.7, -0.1, 0.2, -0.1, -0.1, -0.3, 0.4}, {0.5, 0.5});
}

PathEnsemble single(std::vector<double> values) {
  const std::size_t n = values.size();
  return PathEnsemble(TimeGrid::uniform(1.0, n - 1), std::move(values), {1.0});
}

}  // namespace

TEST(AlphaSup, ClosedFormFamily) {
  const IndexFamily family([](double x, const PathEnsemble&) { return x / (1 + x) * 0.3 - 1 / (1 + x) * 0.3; });
  const IndexResult r = alpha_sup(family, single({0.0, 1.0}));
  EXPECT_NEAR(r.value, 1.0, 1e-9);
  EXPECT_TRUE(r.conventions.empty());
}

TEST(AlphaSup, EmptyAndFullAcceptance) {
  const PathEnsemble e = single({0.0, 1.0});
  const IndexResult none = alpha_sup(IndexFamily([](double, const PathEnsemble&) { return 1.0; }), e);
  EXPECT_EQ(none.value, 0.0);
  EXPECT_TRUE(none.triggered(Convention::empty_acceptance_set));
  const IndexResult all = alpha_sup(IndexFamily([](double, const PathEnsemble&) { return -1.0; }), e);
  EXPECT_EQ(all.value, kInfinity);
  EXPECT_TRUE(all.triggered(Convention::search_cap_reached));
}

TEST(AlphaSup, DetectsDecreasingFamilies) {
  const PathEnsemble e = single({0.0, 1.0});
  const PathEnsemble probes[] = {e};
  EXPECT_THROW(IndexFamily([](double x, const PathEnsemble&) { return 0.5 - x; }, kDefaultSearchCap, probes),
               FamilyNotIncreasing);
  const IndexFamily bumpy([](double x, const PathEnsemble&) {
    if (x > 4e5 && x < 6e5) return 5.0;
    return x < 1e5 ? -1.0 : 1.0;
  });
  try {
    alpha_sup(bumpy, e);
    FAIL() << "expected FamilyNotIncreasing";
  } catch (const FamilyNotIncreasing& err) {
    EXPECT_STREQ(err.what(), "family not x-increasing");
  }
  EXPECT_THROW(alpha_sup(bumpy, e, 0.0), std::invalid_argument);
}

TEST(Raroc, Examples) {
  const IndexResult r = raroc(two_path_hand_ensemble(), 0.5);
  EXPECT_DOUBLE_EQ(r.value, 1.0);

  const IndexResult c = raroc(single({0.4, 0.4, 0.4}), 0.1);
  EXPECT_EQ(c.value, kInfinity);
  EXPECT_TRUE(c.triggered(Convention::denominator_nonpositive));

  const PathEnsemble e = two_path_hand_ensemble();
  EXPECT_DOUBLE_EQ(raroc(e.scaled(3.7), 0.5).value, 1.0);

  const IndexResult neg = raroc(single({0.0, -0.5, -0.2}), 0.5);
  EXPECT_EQ(neg.value, 0.0);
  EXPECT_TRUE(neg.triggered(Convention::numerator_nonpositive));
  EXPECT_THROW(raroc(e, 0.0), std::invalid_argument);
}

TEST(Calmar, Examples) {
  EXPECT_DOUBLE_EQ(calmar(two_path_hand_ensemble()).value, 0.6);
  const IndexResult up = calmar(single({0.0, 0.1, 0.3}));
  EXPECT_EQ(up.value, kInfinity);
  EXPECT_TRUE(up.triggered(Convention::zero_denominator));
  const IndexResult down = calmar(single({0.0, 0.1, -0.3}));
  EXPECT_EQ(down.value, 0.0);
  EXPECT_TRUE(down.triggered(Convention::numerator_nonpositive));
}

TEST(Calmar, StoredCounterexampleViolatesMonotonicity) {
  const PathEnsemble x = single({0.0, 0.2, 0.1, 0.5});
  const PathEnsemble y = single({0.0, 1.0, 0.1, 0.5});
  ASSERT_TRUE(pointwise_leq(x, y));
  EXPECT_DOUBLE_EQ(calmar(x).value, 5.0);
  EXPECT_DOUBLE_EQ(calmar(y).value, 0.5 / 0.9);
  EXPECT_LT(calmar(y).value, calmar(x).value);
  // RAROC keeps the order on the same pair.
  EXPECT_LE(raroc(x, 1.0).value, raroc(y, 1.0).value);
}

TEST(Sharpe, Examples) {
  const SharpeVariants s = sharpe_variants(two_path_hand_ensemble());
  EXPECT_DOUBLE_EQ(s.running_min.value, 3.0);
  EXPECT_DOUBLE_EQ(s.max_drawdown.value, 0.3 / 0.3);

  const PathEnsemble same(TimeGrid::uniform(1.0, 1), {0.0, 0.2, 0.0, 0.2}, {0.5, 0.5});
  EXPECT_EQ(sharpe_variants(same).running_min.value, kInfinity);
  const PathEnsemble losing(TimeGrid::uniform(1.0, 1), {0.0, -0.2, 0.0, -0.2}, {0.5, 0.5});
  EXPECT_EQ(sharpe_variants(losing).running_min.value, 0.0);
  EXPECT_THROW(sharpe_variants(single({0.0, 1.0})), std::invalid_argument);
}

TEST(Sharpe, ShiftOfMinimaLeavesDispersionUnchanged) {
  const PathEnsemble e = two_path_hand_ensemble();
  const EnsembleFeatures f = ensemble_features(e);
  std::vector<double> shifted = f.mins;
  for (double& m : shifted) m -= 0.25;
  EXPECT_DOUBLE_EQ(estimators_from_samples(f.finals, shifted, f.mdds, 0.5).sharpe_running_min.value,
                   estimators_from_samples(f.finals, f.mins, f.mdds, 0.5).sharpe_running_min.value);
}

TEST(Estimators, HandEnsemble) {
  const PerformanceEstimates p = estimators_from_samples(std::vector<double>{0.2, 0.4}, std::vector<double>{-0.1, -0.3},
                                                         std::vector<double>{0.8, 0.2}, 0.5);
  EXPECT_DOUBLE_EQ(p.calmar.value, 0.6);
  EXPECT_DOUBLE_EQ(p.alpha.value, 1.0);
  EXPECT_DOUBLE_EQ(p.sharpe_running_min.value, 3.0);
  const PerformanceEstimates full = estimators_from_samples(std::vector<double>{0.2, 0.4}, std::vector<double>{-0.1, -0.3},
                                                            std::vector<double>{0.8, 0.2}, 1.0);
  EXPECT_DOUBLE_EQ(full.alpha.value, 0.3 / 0.2);
  EXPECT_THROW(estimators_from_samples(std::vector<double>{0.2}, std::vector<double>{}, std::vector<double>{0.8}, 0.5),
               std::invalid_argument);
  EXPECT_THROW(estimators_from_samples(std::vector<double>{0.2, 0.4}, std::vector<double>{-0.1, -0.3},
                                       std::vector<double>{0.8, 0.2}, 0.1),
               InsufficientTailSample);
}

TEST(Ssd, Examples) {
  const double z[] = {0.5, 1.0, 2.0, 3.0};
  const PathEnsemble two = single({0.0, 2.0});
  const PathEnsemble one = single({0.0, -1.0});
  EXPECT_EQ(ssd_check(two, one, z).verdict, SsdVerdict::dominates);
  EXPECT_EQ(ssd_check(one, two, z).verdict, SsdVerdict::dominated);
  EXPECT_EQ(ssd_check(two, two, z).verdict, SsdVerdict::equivalent);

  const PathEnsemble spread(TimeGrid::uniform(1.0, 1), {0.0, 1.0, 0.0, 4.0}, {0.5, 0.5});
  const PathEnsemble fixed = single({0.0, 2.0});
  const SsdResult r = ssd_check(spread, fixed, z);
  EXPECT_EQ(r.verdict, SsdVerdict::incomparable);
  ASSERT_EQ(r.integrated_first.size(), 4u);
  EXPECT_DOUBLE_EQ(r.integrated_first[2], 0.5);   // 0.5 * (2 - 1)
  EXPECT_DOUBLE_EQ(r.integrated_second[2], 0.0);
  EXPECT_EQ(to_string(r.verdict), "incomparable");
}

TEST(Ssd, IntegratedCdfMatchesQuadrature) {
  test::Gen g(41);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = g.index(1, 5);
    std::vector<double> x(n);
    for (double& v : x) v = g.uniform(0.0, 3.0);
    const auto w = g.probabilities(n);
    const EmpiricalDistribution d(x, w);
    for (double z : {0.5, 1.7, 3.5}) {
      EXPECT_NEAR(integrated_cdf(d, z), test::oracle::integrated_cdf_quadrature(x, w, z, 20000), 1e-3);
    }
  }
}

TEST(ExpectedUtility, IdentityAndValidation) {
  const PathEnsemble e(TimeGrid::uniform(1.0, 1), {0.0, 1.0, 0.0, -3.0}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(expected_utility(e, UtilityFunction([](double w) { return w; })), 2.0);
  EXPECT_DOUBLE_EQ(expected_utility(e, UtilityFunction([](double w) { return std::log1p(w); })),
                   0.5 * std::log(2.0) + 0.5 * std::log(4.0));
  EXPECT_THROW(UtilityFunction([](double w) { return -w; }), std::invalid_argument);
  EXPECT_THROW(UtilityFunction([](double w) { return w * w; }), std::invalid_argument);
}

TEST(IndexRecordJson, Fields) {
  EXPECT_EQ(index_record_json("raroc", 0.05, IndexResult{1.5, {}}),
            R"({"index_name":"raroc","gamma":0.050000000000000003,"value":1.5,"conventions_triggered":[]})");
  EXPECT_EQ(index_record_json("calmar", NAN, IndexResult{kInfinity, {Convention::zero_denominator}}),
            R"({"index_name":"calmar","gamma":null,"value":"inf","conventions_triggered":["zero_denominator"]})");
}

// Properties on random finite ensembles.

TEST(RarocProperties, AlphaSupReproducesRaroc) {
  test::Gen g(42);
  for (int trial = 0; trial < 300; ++trial) {
    SCOPED_TRACE(trial);
    const PathEnsemble e = test::random_ensemble(g, 5, 6);
    const double gamma = g.uniform(0.05, 1.0);
    const double direct = raroc(e, gamma).value;
    const double searched = alpha_sup(raroc_family(gamma), e).value;
    if (std::isinf(direct) || direct > kDefaultSearchCap) {
      EXPECT_EQ(searched, kInfinity);
    } else {
      EXPECT_NEAR(searched, direct, 2e-9);
    }
  }
}

TEST(RarocProperties, LawInvariance) {
  test::Gen g(43);
  for (int trial = 0; trial < 300; ++trial) {
    SCOPED_TRACE(trial);
    const PathEnsemble e = test::random_ensemble(g, 5, 6);
    // Reverse the scenario order and rebuild each path with the same minimum and final value.
    const std::size_t n = e.n_paths(), m = e.n_points();
    std::vector<double> values, probs;
    for (std::size_t s = n; s-- > 0;) {
      const auto f = path_features(e.path_values(s));
      std::vector<double> row(m, std::max(f.terminal, f.running_min));
      row[0] = f.running_min;
      row[m - 1] = f.terminal;
      values.insert(values.end(), row.begin(), row.end());
      probs.push_back(e.probs()[s]);
    }
    const PathEnsemble twin(e.grid(), values, probs);
    const double gamma = g.uniform(0.05, 1.0);
    const double a = raroc(twin, gamma).value, b = raroc(e, gamma).value;
    // Reordering the scenarios only changes the summation order.
    if (std::isinf(b)) {
      EXPECT_EQ(a, b);
    } else {
      EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, b));
    }
  }
}

TEST(RarocProperties, ExpectationAndArbitrageConsistency) {
  test::Gen g(44);
  for (int trial = 0; trial < 300; ++trial) {
    SCOPED_TRACE(trial);
    PathEnsemble e = test::random_ensemble(g, 5, 6);
    std::vector<double> v(e.values().begin(), e.values().end());
    for (double& x : v) x = std::abs(x) + 0.01;
    const PathEnsemble positive(e.grid(), v, std::vector<double>(e.probs().begin(), e.probs().end()));
    EXPECT_EQ(raroc(positive, g.uniform(0.05, 1.0)).value, kInfinity);
    // A positive mean with some losses still gives a positive index.
    v[0] = -0.5;
    const PathEnsemble mixed(e.grid(), v, std::vector<double>(e.probs().begin(), e.probs().end()));
    EXPECT_GT(raroc(mixed, g.uniform(0.05, 1.0)).value, 0.0);
  }
}
