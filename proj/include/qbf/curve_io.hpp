#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qbf/bounds_global.hpp"
#include "qbf/core_data.hpp"
#include "qbf/inference.hpp"
#include "qbf/synthetic.hpp"

namespace qbf {

/// Shortest decimal that parses back to the same double; sentinels as -inf / +inf.
std::string format_double(double v);
/// Inverse of format_double. Throws PARSE_ERROR on malformed input.
double parse_double(const std::string& token);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based file line of each row

  /// Column index by name, or MISSING_COLUMN.
  std::size_t column(const std::string& name) const;
};

/// Comma-separated with a header line; double-quoted fields may contain commas.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

struct ColumnMap {
  std::string y = "y";
  std::string d = "d";
  std::vector<std::string> x;
  std::optional<std::string> z;
};

/// Parses reals for y (and z), 0/1 for d, integer codes for x. Rows with a
/// missing or malformed field fail with PARSE_ERROR naming row and column.
Sample ingest_csv(const std::string& path, const ColumnMap& columns);
Sample ingest_csv(std::istream& in, const ColumnMap& columns);

void write_sample_csv(std::ostream& out, const Sample& sample);

void write_frontier_csv(std::ostream& out, const FrontierCurve& curve);
FrontierCurve read_frontier_csv(std::istream& in);

void write_bounds_csv(std::ostream& out, const BoundsCurve& curve);
BoundsCurve read_bounds_csv(std::istream& in);

/// Derived bounds with the point-identified effect (c = 0) alongside.
void write_derived_csv(std::ostream& out, const BoundsCurve& derived, const BoundsCurve& point);

void write_band_csv(std::ostream& out, const BandCurve& band);
BandCurve read_band_csv(std::istream& in);

void write_coverage_csv(std::ostream& out, const CoverageTable& table);

}  // namespace qbf
