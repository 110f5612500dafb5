#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fountain::ingest {

struct CsvRecord {
  std::size_t line = 0;  // physical line the record starts on, 1-based
  std::vector<std::string> fields;
};

// RFC 4180: comma separated, optional double-quote quoting with "" escapes,
// quoted fields may span lines, CRLF or LF terminators. A UTF-8 BOM is
// skipped. Blank lines are ignored. Throws Error(kMalformedRow) on invalid
// UTF-8, an unterminated quote or a stray quote inside an unquoted field.
std::vector<CsvRecord> parse_csv(std::string_view text);

// A parsed file whose first record is the header. Columns are looked up by
// name, so column order in the file does not matter.
class CsvTable {
 public:
  // `required` columns must be present in the header (kMalformedRow, line 1).
  CsvTable(std::string_view text, std::span<const std::string_view> required);

  std::size_t size() const { return rows_.size(); }
  const CsvRecord& row(std::size_t i) const { return rows_[i]; }
  // Field value for `column`; empty when the column is optional and absent.
  const std::string& get(std::size_t row, std::string_view column) const;
  bool has_column(std::string_view column) const;

 private:
  std::vector<std::string> header_;
  std::vector<CsvRecord> rows_;
};

}  // namespace fountain::ingest
