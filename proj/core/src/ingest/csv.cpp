#include "fountain/ingest/csv.hpp"

#include <algorithm>

#include "fountain/error.hpp"
#include "fountain/utf8.hpp"

namespace fountain::ingest {

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kMalformedRow, "malformed CSV at line " + std::to_string(line) + ": " + what,
              {{"line", line}});
}

std::string trim_copy(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::vector<CsvRecord> parse_csv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") {
    text.remove_prefix(3);
  }
  if (const std::size_t bad = utf8_error_offset(text); bad != std::string_view::npos) {
    const auto prefix = text.substr(0, bad);
    malformed(1 + static_cast<std::size_t>(std::count(prefix.begin(), prefix.end(), '\n')),
              "invalid UTF-8");
  }
  std::vector<CsvRecord> records;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();

  while (i < n) {
    CsvRecord record;
    record.line = line;
    std::string field;
    bool record_done = false;
    bool any_content = false;
    while (!record_done) {
      field.clear();
      if (i < n && text[i] == '"') {
        any_content = true;
        const std::size_t quote_line = line;
        ++i;
        while (true) {
          if (i >= n) malformed(quote_line, "unterminated quoted field");
          const char c = text[i];
          if (c == '"') {
            if (i + 1 < n && text[i + 1] == '"') {
              field.push_back('"');
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (c == '\n') ++line;
          field.push_back(c);
          ++i;
        }
        if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          malformed(line, "unexpected character after closing quote");
        }
      } else {
        while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          if (text[i] == '"') malformed(line, "quote inside unquoted field");
          field.push_back(text[i]);
          ++i;
        }
        if (!field.empty()) any_content = true;
      }
      record.fields.push_back(field);
      if (i < n && text[i] == ',') {
        any_content = true;
        ++i;
        continue;
      }
      if (i < n && text[i] == '\r') ++i;
      if (i < n && text[i] == '\n') ++i;
      ++line;
      record_done = true;
    }
    if (any_content) {
      records.push_back(std::move(record));
    }
  }
  return records;
}

CsvTable::CsvTable(std::string_view text, std::span<const std::string_view> required) {
  auto records = parse_csv(text);
  if (records.empty()) {
    malformed(1, "missing header row");
  }
  for (const auto& name : records.front().fields) {
    header_.push_back(trim_copy(name));
  }
  for (const auto column : required) {
    if (!has_column(column)) {
      malformed(records.front().line, "missing required column '" + std::string(column) + "'");
    }
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].fields.size() != header_.size()) {
      malformed(records[r].line, "expected " + std::to_string(header_.size()) + " fields, found " +
                                     std::to_string(records[r].fields.size()));
    }
    rows_.push_back(std::move(records[r]));
  }
}

bool CsvTable::has_column(std::string_view column) const {
  return std::find(header_.begin(), header_.end(), column) != header_.end();
}

const std::string& CsvTable::get(std::size_t row, std::string_view column) const {
  static const std::string kEmpty;
  const auto it = std::find(header_.begin(), header_.end(), column);
  if (it == header_.end()) return kEmpty;
  return rows_[row].fields[static_cast<std::size_t>(it - header_.begin())];
}

}  // namespace fountain::ingest
