#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pathrisk/paths.hpp"

namespace pathrisk {

/// Raised on malformed or truncated ensemble files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// PRSK1 container, all fields little-endian:
//
//   offset 0   5 bytes  "PRSK1"
//          5   uint64   n_paths
//         13   uint64   n_steps            (grid has n_steps + 1 points)
//         21   float64  grid[n_steps + 1]
//              float64  probs[n_paths]
//              float64  values[n_paths][n_steps + 1]   row-major
//
// Nothing may follow the values block.
inline constexpr std::string_view kPrskMagic = "PRSK1";

std::string encode_prsk(const PathEnsemble& e);
PathEnsemble decode_prsk(std::string_view bytes);

// CSV: header "prob,<t_0>,...,<t_m>", then one row per path with its
// probability followed by the path values. Numbers use 17 significant digits.
std::string encode_csv(const PathEnsemble& e);
PathEnsemble decode_csv(std::string_view text);

enum class EnsembleFormat { prsk, csv };

/// `.csv` selects CSV, anything else PRSK1.
EnsembleFormat format_for(const std::filesystem::path& file);

void save_ensemble(const PathEnsemble& e, const std::filesystem::path& file);
void save_ensemble(const PathEnsemble& e, const std::filesystem::path& file, EnsembleFormat format);

/// Detects the format from the leading bytes.
PathEnsemble load_ensemble(const std::filesystem::path& file);

std::string read_file_bytes(const std::filesystem::path& file);
void write_file_bytes(const std::filesystem::path& file, std::string_view bytes);

/// Standard CRC-32 (IEEE 802.3) of a byte string.
std::uint32_t crc32(std::string_view bytes);

/// printf-style %.17g rendering; the round-trippable form used by every text output.
std::string format_double(double x);

}  // namespace pathrisk
