#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pathrisk/risk_measures.hpp"

namespace pathrisk {

/// Population (1/n) moments. When the sample has zero variance the shape
/// statistics are NaN and `shape_defined` is false.
struct SummaryStats {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  bool shape_defined = true;
};

SummaryStats summarize(std::span<const double> sample);

/// Equal-weight step CDF of the sample.
EmpiricalDistribution empirical_cdf(std::span<const double> sample);

struct Histogram {
  std::vector<double> edges;    // n_bins + 1
  std::vector<double> density;  // count / (n * width)
  std::vector<std::size_t> counts;
};

/// Equal-width bins over [min, max]; the maximum falls in the last bin. A
/// constant sample gets a unit-width range centred on its value.
Histogram histogram(std::span<const double> sample, std::size_t n_bins);

std::string histogram_csv(const Histogram& h);

}  // namespace pathrisk
