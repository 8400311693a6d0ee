#ifndef CAPUTO_CSV_HPP
#define CAPUTO_CSV_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace caputo {

// Floating-point output style for all emitted tables: 6 significant digits,
// scientific notation.
std::string format_sci(double v);

std::uint64_t fnv1a_hash(const std::string& text);

// Comment lines, one header row, preformatted cells.  write() lands the file
// atomically (temp + rename).
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  void comment(const std::string& line) { comments_.push_back(line); }
  void add_row(std::vector<std::string> cells);
  std::string to_string() const;
  void write(const std::string& path) const;

  static std::string cell(double v) { return format_sci(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::uint64_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
};

struct ParsedCsv {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

ParsedCsv parse_csv(const std::string& text);
ParsedCsv read_csv(const std::string& path);

}  // namespace caputo

#endif
