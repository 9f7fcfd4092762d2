#include "decoyjam/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace decoyjam {

std::string csv_num(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header,
                     const std::string& config_hash)
    : out_(path, std::ios::binary) {
  if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  out_ << "# config_hash=" << config_hash << "\n" << header << "\n";
}

void CsvWriter::raw_row(const std::string& line) { out_ << line << "\n"; }

}  // namespace decoyjam
