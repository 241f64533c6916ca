#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace catsim {

// 17 significant digits, enough to round-trip any finite double.
std::string fmt17(double v);

// Delimited table with a mandatory header row.
class Table {
 public:
  explicit Table(std::vector<std::string> columns, char sep = '\t');
  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& cells);
  std::size_t rows() const { return rows_.size(); }
  void write(std::ostream& os) const;
  // One JSON object per row. Numeric cells keep their text verbatim.
  void write_records(std::ostream& os) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  char sep_;
};

}  // namespace catsim
