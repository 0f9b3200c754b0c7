#pragma once

#include <array>
#include <cstdint>

namespace pathrisk {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3"). Pure: the output depends only on counter and key.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key) noexcept;
};

/// SplitMix64 output function applied to `state + golden gamma`.
std::uint64_t splitmix64(std::uint64_t state) noexcept;

/// Substreams used by the simulators. Values are part of the file format's
/// reproducibility contract and must not change.
enum class StreamTag : std::uint64_t {
  diffusion = 1,
  jump_count = 2,
  jump_size = 3,
};

/// Mixes (master, path, tag) into a 64-bit Philox key. For fixed master and tag
/// the map path_index -> seed is a bijection, so distinct paths never collide.
std::uint64_t derive_substream_seed(std::uint64_t master_seed, std::uint64_t path_index,
                                    std::uint64_t stream_tag) noexcept;

inline std::uint64_t derive_substream_seed(std::uint64_t master_seed, std::uint64_t path_index,
                                           StreamTag tag) noexcept {
  return derive_substream_seed(master_seed, path_index, static_cast<std::uint64_t>(tag));
}

/// Sequential reader over the Philox stream keyed by `seed`: block k of four
/// words is Philox(counter = k, key = seed).
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed) noexcept;

  std::uint32_t next_u32() noexcept;
  /// 53-bit uniform on the open interval (0, 1).
  double next_uniform() noexcept;
  /// Standard normal by inverse-CDF transform of next_uniform().
  double next_normal();

 private:
  Philox4x32::Key key_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  unsigned used_ = 4;
};

/// Phi^{-1}(u) for u in (0, 1).
double standard_normal_quantile(double u);

}  // namespace pathrisk
