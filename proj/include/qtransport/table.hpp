#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qtransport/numerics.hpp"

namespace qt {

using Cell = std::variant<double, std::string>;

// Rectangular table with a JSON metadata header. Complex values are stored
// as <name>_re / <name>_im column pairs.
class CurveTable {
 public:
  CurveTable() = default;
  explicit CurveTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  nlohmann::ordered_json& metadata() { return metadata_; }
  const nlohmann::ordered_json& metadata() const { return metadata_; }

  void add_row(std::vector<Cell> row);
  std::size_t column_index(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;
  const std::string& text(std::size_t row, const std::string& column) const;

  // First line "# " + compact metadata JSON, then the header and rows.
  void write_csv(std::ostream& os) const;
  // {"metadata": ..., "columns": [...], "rows": [[...], ...]}
  void write_json(std::ostream& os) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  nlohmann::ordered_json metadata_ = nlohmann::ordered_json::object();
};

// printf %.17g; nan and inf spelled out.
std::string format_number(double v);

// Appends name_re, name_im.
void push_complex_columns(std::vector<std::string>& columns, const std::string& name);
void push_complex(std::vector<Cell>& row, cplx v);

// Parses the metadata line of a CSV produced by write_csv.
nlohmann::ordered_json read_csv_metadata(std::istream& is);

}  // namespace qt
