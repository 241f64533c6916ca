#include "catsim/table.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace catsim {

std::string fmt17(double v) {
  std::array<char, 64> buf{};
  auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return {buf.data(), r.ptr};
}

Table::Table(std::vector<std::string> columns, char sep) : columns_(std::move(columns)), sep_(sep) {
  if (columns_.empty()) throw std::invalid_argument("table needs at least one column");
}

void Table::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(fmt17(v));
  add_row(cells);
}

void Table::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) throw std::invalid_argument("row width does not match header");
  rows_.push_back(cells);
}

void Table::write(std::ostream& os) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? std::string(1, sep_) : "") << cells[i];
    os << '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
}

void Table::write_records(std::ostream& os) const {
  auto numeric = [](const std::string& s) {
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && r.ec == std::errc() && r.ptr == s.data() + s.size() && std::isfinite(v);
  };
  for (const auto& r : rows_) {
    os << '{';
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << (i ? "," : "") << nlohmann::json(columns_[i]).dump() << ':';
      os << (numeric(r[i]) ? r[i] : nlohmann::json(r[i]).dump());
    }
    os << "}\n";
  }
}

}  // namespace catsim
