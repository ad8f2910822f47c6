#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace latticeqfi {

std::string_view version();

/// 12 significant digits, '.' separator, independent of the C locale.
std::string format_number(double x);

std::uint64_t fnv1a64(std::string_view bytes);
/// "fnv1a64:" followed by 16 hex digits.
std::string content_hash(std::string_view bytes);

/// Comment lines ("# ...") naming tool, version, command and config hash.
std::string provenance_header(std::string_view command, std::string_view canonical_config);

/// Header row plus rows of preformatted cells, LF line endings.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string render(std::string_view preamble) const;
};

/// Writes to a temporary sibling, then renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// gnuplot script plotting column `y` against column `x` of `csv_name`
/// (1-based), or an image map of `z` over (x, y) when z > 0.
std::string gnuplot_script(std::string_view csv_name, std::string_view title, int x, int y,
                           int z = 0);

}  // namespace latticeqfi
