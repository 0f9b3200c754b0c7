#include "json_text.hpp"

#include <cmath>

#include "pathrisk/ensemble_io.hpp"

namespace pathrisk::detail {

namespace {

std::string non_finite(double x) {
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

void write(const Json& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += indent < 0 ? ":" : ": ";
        write(value, indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write(value, indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : Json(non_finite(x)).dump();
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  write(j, indent, 0, out);
  return out;
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(non_finite(x)); }

}  // namespace pathrisk::detail
