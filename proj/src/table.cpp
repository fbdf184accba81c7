#include "qtransport/table.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace qt {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void push_complex_columns(std::vector<std::string>& columns, const std::string& name) {
  columns.push_back(name + "_re");
  columns.push_back(name + "_im");
}

void push_complex(std::vector<Cell>& row, cplx v) {
  row.emplace_back(v.real());
  row.emplace_back(v.imag());
}

void CurveTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("CurveTable: row has " + std::to_string(row.size()) + " cells, expected " +
                                std::to_string(columns_.size()));
  rows_.push_back(std::move(row));
}

std::size_t CurveTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name) return i;
  throw std::out_of_range("CurveTable: no column " + name);
}

double CurveTable::number(std::size_t row, const std::string& column) const {
  return std::get<double>(rows_.at(row).at(column_index(column)));
}

const std::string& CurveTable::text(std::size_t row, const std::string& column) const {
  return std::get<std::string>(rows_.at(row).at(column_index(column)));
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void CurveTable::write_csv(std::ostream& os) const {
  os << "# " << metadata_.dump() << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_field(columns_[i]);
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const double* d = std::get_if<double>(&row[i]))
        os << format_number(*d);
      else
        os << csv_field(std::get<std::string>(row[i]));
    }
    os << '\n';
  }
}

void CurveTable::write_json(std::ostream& os) const {
  nlohmann::ordered_json doc;
  doc["metadata"] = metadata_;
  doc["columns"] = columns_;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (const double* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d))
          r.push_back(*d);
        else
          r.push_back(format_number(*d));
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(1) << '\n';
}

nlohmann::ordered_json read_csv_metadata(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw std::runtime_error("CSV has no metadata line");
  return nlohmann::ordered_json::parse(line.substr(2));
}

}  // namespace qt
