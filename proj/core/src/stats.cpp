#include "pathrisk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pathrisk/ensemble_io.hpp"

namespace pathrisk {

SummaryStats summarize(std::span<const double> sample) {
  if (sample.size() < 2) throw std::invalid_argument("summary statistics need n >= 2");
  const auto n = static_cast<double>(sample.size());

  double sum = 0.0;
  for (double x : sample) sum += x;
  const double mean = sum / n;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : sample) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t half = sorted.size() / 2;
  const double median =
      sorted.size() % 2 == 1 ? sorted[half] : 0.5 * (sorted[half - 1] + sorted[half]);

  SummaryStats s;
  s.mean = mean;
  s.median = median;
  s.sd = std::sqrt(m2);
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  } else {
    s.skewness = std::numeric_limits<double>::quiet_NaN();
    s.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
    s.shape_defined = false;
  }
  return s;
}

EmpiricalDistribution empirical_cdf(std::span<const double> sample) {
  return EmpiricalDistribution::equally_weighted(sample);
}

Histogram histogram(std::span<const double> sample, std::size_t n_bins) {
  if (sample.empty()) throw std::invalid_argument("histogram needs a non-empty sample");
  if (n_bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(n_bins);

  Histogram h;
  h.edges.resize(n_bins + 1);
  for (std::size_t b = 0; b <= n_bins; ++b) h.edges[b] = lo + width * static_cast<double>(b);
  h.edges.back() = hi;
  h.counts.assign(n_bins, 0);
  for (double x : sample) {
    auto b = static_cast<std::size_t>((x - lo) / width);
    h.counts[std::min(b, n_bins - 1)] += 1;
  }
  const auto n = static_cast<double>(sample.size());
  h.density.resize(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    h.density[b] = static_cast<double>(h.counts[b]) / (n * (h.edges[b + 1] - h.edges[b]));
  }
  return h;
}

std::string histogram_csv(const Histogram& h) {
  std::string out = "left,right,count,density\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out += format_double(h.edges[b]) + ',' + format_double(h.edges[b + 1]) + ',' +
           std::to_string(h.counts[b]) + ',' + format_double(h.density[b]) + '\n';
  }
  return out;
}

}  // namespace pathrisk
