#include "pathrisk/ensemble_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include <boost/crc.hpp>

namespace pathrisk {

namespace {

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_f64(std::string& out, double x) { put_u64(out, std::bit_cast<std::uint64_t>(x)); }

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 8;
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw FormatError("PRSK1: truncated file");
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    if (at == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, at - start));
    start = at + 1;
  }
}

double parse_double(std::string_view field) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw FormatError("CSV: cannot parse number '" + std::string(field) + "'");
  }
  return x;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string encode_prsk(const PathEnsemble& e) {
  std::string out;
  out.reserve(kPrskMagic.size() + 16 + 8 * (e.n_points() + e.n_paths() + e.values().size()));
  out.append(kPrskMagic);
  put_u64(out, e.n_paths());
  put_u64(out, e.grid().steps());
  for (double t : e.grid().times()) put_f64(out, t);
  for (double p : e.probs()) put_f64(out, p);
  for (double v : e.values()) put_f64(out, v);
  return out;
}

PathEnsemble decode_prsk(std::string_view bytes) {
  if (bytes.substr(0, kPrskMagic.size()) != kPrskMagic) {
    throw FormatError("PRSK1: bad magic bytes");
  }
  ByteReader in(bytes.substr(kPrskMagic.size()));
  const std::uint64_t n_paths = in.u64();
  const std::uint64_t n_steps = in.u64();
  if (n_paths == 0 || n_steps == 0) throw FormatError("PRSK1: empty ensemble header");
  const std::uint64_t n_points = n_steps + 1;
  // Guard the multiplication before trusting the header.
  const std::uint64_t limit = in.remaining() / 8;
  if (n_points > limit || n_paths > limit || n_paths > limit / n_points) {
    throw FormatError("PRSK1: header sizes exceed file length");
  }
  const std::uint64_t expected = 8 * (n_points + n_paths + n_paths * n_points);
  if (in.remaining() != expected) {
    throw FormatError("PRSK1: payload length " + std::to_string(in.remaining()) +
                      " does not match header (expected " + std::to_string(expected) + ")");
  }
  std::vector<double> grid(n_points);
  for (double& t : grid) t = in.f64();
  std::vector<double> probs(n_paths);
  for (double& p : probs) p = in.f64();
  std::vector<double> values(n_paths * n_points);
  for (double& v : values) v = in.f64();
  try {
    return PathEnsemble(TimeGrid(std::move(grid)), std::move(values), std::move(probs));
  } catch (const std::invalid_argument& err) {
    throw FormatError(std::string("PRSK1: invalid contents: ") + err.what());
  }
}

std::string encode_csv(const PathEnsemble& e) {
  std::string out = "prob";
  for (double t : e.grid().times()) {
    out += ',';
    out += format_double(t);
  }
  out += '\n';
  for (std::size_t i = 0; i < e.n_paths(); ++i) {
    out += format_double(e.probs()[i]);
    for (double v : e.path_values(i)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

PathEnsemble decode_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::string_view line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.size() < 2) throw FormatError("CSV: need a header and at least one row");
  const auto header = split(lines.front(), ',');
  if (header.size() < 3 || header.front() != "prob") {
    throw FormatError("CSV: header must be prob,<t_0>,...,<t_m>");
  }
  std::vector<double> grid;
  for (std::size_t j = 1; j < header.size(); ++j) grid.push_back(parse_double(header[j]));

  std::vector<double> probs;
  std::vector<double> values;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split(lines[r], ',');
    if (fields.size() != header.size()) {
      throw FormatError("CSV: row " + std::to_string(r) + " has " + std::to_string(fields.size()) +
                        " fields, header has " + std::to_string(header.size()));
    }
    probs.push_back(parse_double(fields[0]));
    for (std::size_t j = 1; j < fields.size(); ++j) values.push_back(parse_double(fields[j]));
  }
  try {
    return PathEnsemble(TimeGrid(std::move(grid)), std::move(values), std::move(probs));
  } catch (const std::invalid_argument& err) {
    throw FormatError(std::string("CSV: invalid contents: ") + err.what());
  }
}

EnsembleFormat format_for(const std::filesystem::path& file) {
  return file.extension() == ".csv" ? EnsembleFormat::csv : EnsembleFormat::prsk;
}

void save_ensemble(const PathEnsemble& e, const std::filesystem::path& file) {
  save_ensemble(e, file, format_for(file));
}

void save_ensemble(const PathEnsemble& e, const std::filesystem::path& file, EnsembleFormat format) {
  write_file_bytes(file, format == EnsembleFormat::csv ? encode_csv(e) : encode_prsk(e));
}

PathEnsemble load_ensemble(const std::filesystem::path& file) {
  const std::string bytes = read_file_bytes(file);
  if (std::string_view(bytes).substr(0, kPrskMagic.size()) == kPrskMagic) {
    return decode_prsk(bytes);
  }
  return decode_csv(bytes);
}

std::string read_file_bytes(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path& file, std::string_view bytes) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

std::uint32_t crc32(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

}  // namespace pathrisk
