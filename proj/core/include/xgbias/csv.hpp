#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace xgbias::csv {

using Row = std::vector<std::string>;

// RFC-4180 reader: quoted fields, doubled quotes, embedded separators and
// line breaks. Accepts both CRLF and LF record terminators.
std::vector<Row> parse(std::string_view text);

std::vector<Row> read_file(const std::filesystem::path& path);

// Quotes a field only when it contains a separator, quote or line break.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const Row& row);

// Header-indexed access to a parsed table.
class Table {
 public:
  explicit Table(std::vector<Row> rows);

  static Table from_file(const std::filesystem::path& path);

  const Row& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }
  const Row& row(std::size_t i) const { return rows_[i]; }
  bool has_column(std::string_view name) const;
  std::size_t column(std::string_view name) const;
  const std::string& at(std::size_t i, std::string_view name) const;

 private:
  Row header_;
  std::vector<Row> rows_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace xgbias::csv
