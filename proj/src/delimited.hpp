#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace metro::detail {

struct DelimitedRow {
  std::size_t line = 0;  // 1-based line number in the source file
  std::vector<std::string> fields;
};

struct DelimitedTable {
  std::vector<std::string> header;
  std::vector<DelimitedRow> rows;
};

/// Reads a header + rows table. The delimiter is a tab if the header line
/// contains one, otherwise a comma. Fields are trimmed; double quotes group a
/// field containing the delimiter. Blank lines are skipped.
DelimitedTable read_delimited(const std::filesystem::path& path);

std::vector<std::string> split_delimited(std::string_view line, char delimiter);

/// Strict number parse of a whole field; false on trailing garbage.
bool parse_double(std::string_view text, double& out);

std::string lowercase(std::string_view text);

}  // namespace metro::detail
