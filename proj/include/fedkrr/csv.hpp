#pragma once

#include <string>
#include <vector>

#include "fedkrr/core.hpp"

namespace fedkrr::csv {

// Shortest representation that round-trips a double exactly; locale-independent.
std::string format(double v);

void write_matrix(const std::string& path, const Mat& m,
                  const std::vector<std::string>& header);
Mat read_matrix(const std::string& path, bool expect_header = true);

// Generic row-oriented table reader: returns header + string cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int column(const std::string& name) const;  // throws if absent
};
Table read_table(const std::string& path);

}  // namespace fedkrr::csv
