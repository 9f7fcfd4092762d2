#ifndef DECOYJAM_CSV_HPP
#define DECOYJAM_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

namespace decoyjam {

// Numeric cell at 9 significant digits, '.' decimal separator.
std::string csv_num(double v);

// Figure-data writer: a comment line with the config hash, one header row,
// LF line endings.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header,
            const std::string& config_hash);
  void raw_row(const std::string& line);

  template <typename... Cell>
  void row(const Cell&... cells) {
    std::string line;
    append(line, cells...);
    raw_row(line);
  }

 private:
  static void append_one(std::string& line, double v) { line += csv_num(v); }
  static void append_one(std::string& line, int v) { line += std::to_string(v); }
  static void append_one(std::string& line, long v) { line += std::to_string(v); }
  static void append_one(std::string& line, unsigned long v) { line += std::to_string(v); }
  static void append_one(std::string& line, const char* v) { line += v; }
  static void append_one(std::string& line, const std::string& v) { line += v; }

  template <typename First, typename... Rest>
  static void append(std::string& line, const First& first, const Rest&... rest) {
    append_one(line, first);
    if constexpr (sizeof...(rest) > 0) {
      line += ',';
      append(line, rest...);
    }
  }

  std::ofstream out_;
};

}  // namespace decoyjam

#endif
