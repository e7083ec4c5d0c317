#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cornbn::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // 1-based source line of each row

  int column(std::string_view name) const;  // -1 when absent
  int require_column(std::string_view name, const std::string& source) const;
};

Table read(const std::filesystem::path& path);
Table parse(std::string_view text, const std::string& source);

std::vector<std::string> split_line(std::string_view line);
std::string join_line(const std::vector<std::string>& fields);

// Empty field or NA (any case) reads as missing; anything unparseable throws SchemaError.
std::optional<double> parse_cell(std::string_view text, const std::string& where);
bool is_missing(std::string_view text);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cornbn::csv
