#include "latticeqfi/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "latticeqfi/errors.hpp"

#ifndef LATTICEQFI_VERSION
#define LATTICEQFI_VERSION "0.0.0"
#endif

namespace latticeqfi {

std::string_view version() { return LATTICEQFI_VERSION; }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string content_hash(std::string_view bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string hex(16, '0');
  for (int i = 15; i >= 0; --i) {
    hex[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return "fnv1a64:" + hex;
}

std::string provenance_header(std::string_view command, std::string_view canonical_config) {
  std::string s = "# latticeqfi ";
  s += version();
  s += "\n# command: ";
  s += command;
  s += "\n# config: ";
  s += content_hash(canonical_config);
  s += '\n';
  return s;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw NumericalError("CSV row width mismatch");
  rows.push_back(std::move(row));
}

std::string CsvTable::render(std::string_view preamble) const {
  std::string out(preamble);
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ConfigError("cannot move output into place: " + path.string());
  }
}

std::string gnuplot_script(std::string_view csv_name, std::string_view title, int x, int y,
                           int z) {
  std::string s;
  s += "set datafile separator ','\n";
  s += "set datafile commentschars '#'\n";
  s += "set key autotitle columnhead\n";
  s += "set title '";
  s += title;
  s += "'\n";
  const std::string file = "'" + std::string(csv_name) + "'";
  if (z > 0) {
    s += "plot " + file + " using " + std::to_string(x) + ":" + std::to_string(y) + ":" +
         std::to_string(z) + " with image\n";
  } else {
    s += "plot " + file + " using " + std::to_string(x) + ":" + std::to_string(y) +
         " with lines\n";
  }
  s += "pause mouse close\n";
  return s;
}

}  // namespace latticeqfi
