#pragma once

#include <string>
#include <vector>

namespace crossfeat {

// Minimal RFC-4180 reader: comma separated, LF or CRLF records, double-quote
// quoting with "" escapes. Quoted cells may contain commas and newlines.
// The final record may omit its trailing newline.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::vector<std::vector<std::string>> read_csv_file(const std::string& path);

// Quotes a cell only when needed.
std::string csv_escape(const std::string& cell);

}  // namespace crossfeat
