#include "qbf/curve_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "qbf/error.hpp"

namespace qbf {

std::string format_double(double v) { return to_token(ExtendedReal(v)); }

double parse_double(const std::string& token) {
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  if (token == "+inf" || token == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || first == last)
    throw Error(ErrorCode::ParseError, "not a number: '" + token + "'");
  return v;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  fields.push_back(std::move(field));
  for (auto& f : fields) {
    auto b = f.find_first_not_of(" \t");
    auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

std::string row_context(std::size_t line, const std::string& column) {
  return "row " + std::to_string(line) + ", column '" + column + "'";
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error(ErrorCode::MissingColumn, "column '" + name + "' not found in header");
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_header) {
      table.header = split_line(line);
      have_header = true;
      continue;
    }
    table.rows.push_back(split_line(line));
    table.line_numbers.push_back(line_no);
  }
  if (!have_header) throw Error(ErrorCode::ParseError, "input has no header line");
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  return read_csv(in);
}

Sample ingest_csv(std::istream& in, const ColumnMap& columns) {
  const CsvTable table = read_csv(in);
  const std::size_t iy = table.column(columns.y);
  const std::size_t id = table.column(columns.d);
  std::vector<std::size_t> ix;
  for (const auto& name : columns.x) ix.push_back(table.column(name));
  std::optional<std::size_t> iz;
  if (columns.z) iz = table.column(*columns.z);

  std::vector<double> y, z;
  std::vector<std::uint8_t> d;
  std::vector<Covariate> x;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    auto field = [&](std::size_t col, const std::string& name) -> const std::string& {
      if (col >= row.size() || row[col].empty())
        throw Error(ErrorCode::ParseError, row_context(line, name) + ": missing value");
      return row[col];
    };
    auto real = [&](std::size_t col, const std::string& name) {
      const std::string& token = field(col, name);
      double v = 0.0;
      try {
        v = parse_double(token);
      } catch (const Error&) {
        throw Error(ErrorCode::ParseError, row_context(line, name) + ": not a number '" + token + "'");
      }
      if (!std::isfinite(v))
        throw Error(ErrorCode::ParseError, row_context(line, name) + ": value must be finite");
      return v;
    };
    y.push_back(real(iy, columns.y));
    const std::string& dv = field(id, columns.d);
    if (dv != "0" && dv != "1")
      throw Error(ErrorCode::ParseError, row_context(line, columns.d) + ": treatment must be 0 or 1, got '" + dv + "'");
    d.push_back(dv == "1" ? 1 : 0);
    Covariate tuple;
    for (std::size_t j = 0; j < ix.size(); ++j) {
      const std::string& token = field(ix[j], columns.x[j]);
      std::int64_t code = 0;
      auto res = std::from_chars(token.data(), token.data() + token.size(), code);
      if (res.ec != std::errc() || res.ptr != token.data() + token.size())
        throw Error(ErrorCode::ParseError,
                    row_context(line, columns.x[j]) + ": covariate must be an integer code, got '" + token + "'");
      tuple.push_back(code);
    }
    x.push_back(std::move(tuple));
    if (iz) z.push_back(real(*iz, *columns.z));
  }
  return Sample(std::move(y), std::move(d), std::move(x), std::move(z));
}

Sample ingest_csv(const std::string& path, const ColumnMap& columns) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  return ingest_csv(in, columns);
}

void write_sample_csv(std::ostream& out, const Sample& sample) {
  const std::size_t width = sample.num_levels() ? sample.levels().front().size() : 0;
  out << "y,d";
  for (std::size_t j = 0; j < width; ++j) out << ",x" << (j + 1);
  out << '\n';
  for (std::size_t i = 0; i < sample.n(); ++i) {
    out << format_double(sample.y()[i]) << ',' << int(sample.d()[i]);
    for (auto v : sample.x(i)) out << ',' << v;
    out << '\n';
  }
}

namespace {

std::vector<double> numeric_column(const CsvTable& t, const std::string& name) {
  const std::size_t c = t.column(name);
  std::vector<double> v;
  v.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (c >= t.rows[r].size())
      throw Error(ErrorCode::ParseError, row_context(t.line_numbers[r], name) + ": missing value");
    v.push_back(parse_double(t.rows[r][c]));
  }
  return v;
}

std::vector<ExtendedReal> extended_column(const CsvTable& t, const std::string& name) {
  std::vector<ExtendedReal> out;
  for (double v : numeric_column(t, name)) out.emplace_back(v);
  return out;
}

}  // namespace

void write_frontier_csv(std::ostream& out, const FrontierCurve& curve) {
  out << "tau,c_raw,c_clamped\n";
  for (std::size_t i = 0; i < curve.taus.size(); ++i)
    out << format_double(curve.taus[i]) << ',' << format_double(curve.c_values[i]) << ','
        << format_double(curve.clamped[i]) << '\n';
}

FrontierCurve read_frontier_csv(std::istream& in) {
  const auto t = read_csv(in);
  FrontierCurve curve;
  curve.taus = numeric_column(t, "tau");
  curve.c_values = numeric_column(t, "c_raw");
  curve.clamped = numeric_column(t, "c_clamped");
  return curve;
}

void write_bounds_csv(std::ostream& out, const BoundsCurve& curve) {
  out << "tau,lower,upper\n";
  for (std::size_t i = 0; i < curve.taus.size(); ++i)
    out << format_double(curve.taus[i]) << ',' << to_token(curve.lower[i]) << ','
        << to_token(curve.upper[i]) << '\n';
}

BoundsCurve read_bounds_csv(std::istream& in) {
  const auto t = read_csv(in);
  BoundsCurve curve;
  curve.taus = numeric_column(t, "tau");
  curve.lower = extended_column(t, "lower");
  curve.upper = extended_column(t, "upper");
  return curve;
}

void write_derived_csv(std::ostream& out, const BoundsCurve& derived, const BoundsCurve& point) {
  out << "tau,lower,upper,point_identified\n";
  for (std::size_t i = 0; i < derived.taus.size(); ++i)
    out << format_double(derived.taus[i]) << ',' << to_token(derived.lower[i]) << ','
        << to_token(derived.upper[i]) << ',' << to_token(point.lower[i]) << '\n';
}

void write_band_csv(std::ostream& out, const BandCurve& band) {
  out << "tau,point,lo,hi\n";
  for (std::size_t i = 0; i < band.taus.size(); ++i)
    out << format_double(band.taus[i]) << ',' << format_double(band.point[i]) << ','
        << format_double(band.lo[i]) << ',' << format_double(band.hi[i]) << '\n';
}

BandCurve read_band_csv(std::istream& in) {
  const auto t = read_csv(in);
  BandCurve band;
  band.taus = numeric_column(t, "tau");
  band.point = numeric_column(t, "point");
  band.lo = numeric_column(t, "lo");
  band.hi = numeric_column(t, "hi");
  return band;
}

void write_coverage_csv(std::ostream& out, const CoverageTable& table) {
  out << "tau,oracle_c,oracle_mc_se,coverage,mc_se,median_width\n";
  for (std::size_t i = 0; i < table.taus.size(); ++i)
    out << format_double(table.taus[i]) << ',' << format_double(table.oracle_c[i]) << ','
        << format_double(table.oracle_mc_se[i]) << ',' << format_double(table.coverage[i]) << ','
        << format_double(table.mc_se[i]) << ',' << format_double(table.median_width[i]) << '\n';
}

}  // namespace qbf
