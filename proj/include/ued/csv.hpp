#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Minimal RFC 4180 reader and writer. Fields may be quoted; quoted fields may
// contain separators, doubled quotes and line breaks.
namespace ued::csv {

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;
  /// 1-based source line of each row, for error messages.
  std::vector<std::size_t> lines;

  std::optional<std::size_t> find_column(std::string_view name) const;
  /// Throws ValidationError naming `source` when the column is missing.
  std::size_t column(std::string_view name, std::string_view source) const;
};

std::vector<Row> parse(std::string_view text, std::vector<std::size_t>* line_numbers = nullptr);

/// Reads a CSV file whose first row is a header. Rows shorter than the header
/// are padded with empty fields.
Table read_table(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::string escape(std::string_view field);

/// Shortest representation that round-trips to the same double.
std::string format_double(double value);
std::string format_optional(const std::optional<double>& value);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void row(const Row& fields);

 private:
  std::ostream& out_;
};

}  // namespace ued::csv
