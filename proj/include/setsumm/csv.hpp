#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "setsumm/error.hpp"

namespace setsumm::csv {

using Row = std::vector<std::string>;

// RFC-4180 reader. Quoted fields may contain separators, doubled quotes and
// line breaks. Both LF and CRLF terminate records. A leading UTF-8 BOM is
// skipped and fully blank lines are ignored.
inline std::vector<Row> parse(std::string_view text, char sep = ',') {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_quoted = false;
  bool row_has_content = false;
  std::size_t line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_quoted = false;
  };
  auto end_row = [&] {
    if (row_has_content || !row.empty()) {
      end_field();
      rows.push_back(std::move(row));
    }
    row.clear();
    field.clear();
    field_quoted = false;
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty() || field_quoted) {
        throw Error(Errc::ParseError,
                    "line " + std::to_string(line) + ": unexpected quote inside unquoted field");
      }
      in_quotes = true;
      field_quoted = true;
      row_has_content = true;
    } else if (c == sep) {
      end_field();
      row_has_content = true;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // handled by the '\n' on the next iteration
    } else if (c == '\n') {
      end_row();
      ++line;
    } else {
      if (field_quoted) {
        throw Error(Errc::ParseError,
                    "line " + std::to_string(line) + ": characters after closing quote");
      }
      field.push_back(c);
      row_has_content = true;
    }
  }
  if (in_quotes) throw Error(Errc::ParseError, "unterminated quoted field");
  end_row();
  return rows;
}

inline bool needs_quoting(std::string_view field, char sep = ',') {
  for (char c : field) {
    if (c == sep || c == '"' || c == '\n' || c == '\r') return true;
  }
  return !field.empty() && (field.front() == ' ' || field.back() == ' ');
}

inline void append_field(std::string& out, std::string_view field, char sep = ',') {
  if (!needs_quoting(field, sep)) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

inline void append_row(std::string& out, const Row& row, char sep = ',') {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(sep);
    append_field(out, row[i], sep);
  }
  out.push_back('\n');
}

}  // namespace setsumm::csv
