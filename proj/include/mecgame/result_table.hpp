// include/mecgame/result_table.hpp
//
// Column-typed result tables and their CSV / JSON renderings. CSV output is
// UTF-8, comma separated, '.' decimal point, one header row; doubles use the
// shortest representation that round-trips.

#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace mecgame {

/// monostate renders as "n/a".
using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

inline Cell na() { return std::monostate{}; }

/// Shortest round-trip decimal form; NaN renders as "n/a", infinities as
/// "inf" / "-inf".
std::string format_number(double v);

class ResultTable {
 public:
  ResultTable() = default;
  explicit ResultTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  /// Throws std::invalid_argument when the row arity differs from the header.
  void add_row(std::vector<Cell> row);

  /// Index of a column by name; throws std::out_of_range when absent.
  std::size_t column(const std::string& name) const;
  const Cell& at(std::size_t row, const std::string& name) const;

  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
  /// Array of row objects keyed by column name.
  std::string to_json() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::map<std::string, std::string> metadata_;
};

std::string render_cell(const Cell& cell);

}  // namespace mecgame
