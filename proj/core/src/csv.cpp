#include "crossfeat/csv.hpp"

#include <fstream>
#include <sstream>

#include "crossfeat/error.hpp"

namespace crossfeat {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool in_quotes = false;
  bool cell_was_quoted = false;
  bool row_has_data = false;

  auto end_cell = [&] {
    row.push_back(std::move(cell));
    cell.clear();
    cell_was_quoted = false;
  };
  auto end_row = [&] {
    end_cell();
    rows.push_back(std::move(row));
    row.clear();
    row_has_data = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (cell.empty() && !cell_was_quoted) {
          in_quotes = true;
          cell_was_quoted = true;
          row_has_data = true;
        } else {
          cell += c;  // stray quote mid-cell, keep verbatim
        }
        break;
      case ',':
        end_cell();
        row_has_data = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;  // swallowed by \n
        end_row();
        break;
      case '\n':
        end_row();
        break;
      default:
        cell += c;
        row_has_data = true;
        break;
    }
  }
  if (in_quotes) throw Error(Errc::io, "unterminated quoted CSV cell");
  if (row_has_data || !row.empty() || !cell.empty()) end_row();
  return rows;
}

std::vector<std::vector<std::string>> read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace crossfeat
