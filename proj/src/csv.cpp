#include "ued/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ued/error.hpp"

namespace ued::csv {

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::column(std::string_view name, std::string_view source) const {
  if (auto idx = find_column(name)) return *idx;
  throw ValidationError(std::string(source) + ": missing column '" + std::string(name) + "'", 1);
}

std::vector<Row> parse(std::string_view text, std::vector<std::size_t>* line_numbers) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t row_line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    // A lone empty field is a blank line.
    if (!(row.size() == 1 && row[0].empty())) {
      rows.push_back(std::move(row));
      if (line_numbers) line_numbers->push_back(row_line);
    }
    row.clear();
  };

  // Skip a UTF-8 byte order mark.
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          in_quotes = true;
          field_started = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        row_line = line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw ValidationError("unterminated quoted field", row_line);
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("error writing " + path.string());
}

Table read_table(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  Table table;
  std::vector<std::size_t> lines;
  std::vector<Row> rows;
  try {
    rows = parse(text, &lines);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (rows.empty()) throw ValidationError(path.string() + ": missing header row", 1);
  table.header = std::move(rows.front());
  for (auto& h : table.header) {
    while (!h.empty() && (h.back() == ' ' || h.back() == '\t')) h.pop_back();
    while (!h.empty() && (h.front() == ' ' || h.front() == '\t')) h.erase(h.begin());
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    rows[i].resize(std::max(rows[i].size(), table.header.size()));
    table.rows.push_back(std::move(rows[i]));
    table.lines.push_back(lines[i]);
  }
  return table;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string format_optional(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

void Writer::row(const Row& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << escape(fields[i]);
  }
  out_ << '\n';
}

}  // namespace ued::csv
