#pragma once

#include <string>
#include <vector>

#include "gig/gbm.hpp"

namespace gig {

// RFC-4180 table with a required header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv_file(const std::string& path);
CsvTable parse_csv(const std::string& text);
std::string csv_to_string(const CsvTable& table);
void write_csv_file(const CsvTable& table, const std::string& path);

// shortest round-trip decimal form
std::string format_double(double v);
double parse_double(const std::string& s);

// dataset convention: header row, label column last
CsvTable dataset_to_csv(const Dataset& d);
Dataset dataset_from_csv(const CsvTable& table);

}  // namespace gig
