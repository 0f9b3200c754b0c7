#include "pathrisk/rng.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace pathrisk {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter c, Key k) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kPhiloxW0;
      k[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

std::uint64_t splitmix64(std::uint64_t state) noexcept {
  std::uint64_t z = state + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t derive_substream_seed(std::uint64_t master_seed, std::uint64_t path_index,
                                    std::uint64_t stream_tag) noexcept {
  // Each stage is a bijection of its input, hence of path_index.
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ path_index);
  return splitmix64(s ^ splitmix64(stream_tag ^ 0xA0761D6478BD642Full));
}

CounterStream::CounterStream(std::uint64_t seed) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

std::uint32_t CounterStream::next_u32() noexcept {
  if (used_ == 4) {
    buffer_ = Philox4x32::generate({static_cast<std::uint32_t>(block_),
                                    static_cast<std::uint32_t>(block_ >> 32), 0u, 0u},
                                   key_);
    ++block_;
    used_ = 0;
  }
  return buffer_[used_++];
}

double CounterStream::next_uniform() noexcept {
  const std::uint64_t a = next_u32() >> 5;  // 27 bits
  const std::uint64_t b = next_u32() >> 6;  // 26 bits
  return (static_cast<double>((a << 26) | b) + 0.5) * 0x1.0p-53;
}

double CounterStream::next_normal() { return standard_normal_quantile(next_uniform()); }

double standard_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("normal quantile needs u in (0, 1)");
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

}  // namespace pathrisk
