#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace autotune {

// Numeric table read from a comma-separated file. The header is optional and
// detected by a non-numeric cell in the first row.
struct CsvTable {
  std::vector<std::string> header;  // empty when the file has none
  Eigen::MatrixXd values;

  // Column index of `name`; throws InputError if absent or there is no header.
  Eigen::Index column(const std::string& name) const;
};

// Throws InputError on a missing file, ragged rows or non-numeric cells.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(std::istream& in, const std::string& source = "<stream>");

void write_csv(std::ostream& out, const Eigen::MatrixXd& values, const std::vector<std::string>& header = {});

std::string trim(std::string_view s);
// Strict parses of a whole cell; nullopt when the cell is not a number.
std::optional<double> try_parse_number(std::string_view s);
double parse_number(std::string_view s);
long long parse_int(std::string_view s);
// Shortest representation that round-trips; "nan"/"inf" for non-finite values.
std::string format_number(double v);
std::string csv_quote(const std::string& s);

}  // namespace autotune
