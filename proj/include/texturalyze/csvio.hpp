#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace texturalyze::csvio {

// Splits one line on commas. Fields in this project never contain commas,
// quotes, or embedded newlines, so no quoting rules apply.
std::vector<std::string> split_fields(std::string_view line);

// Splits text into lines on '\n'; a trailing '\r' per line is dropped so
// CRLF exports parse too. A trailing final newline yields no empty line.
std::vector<std::string> split_lines(std::string_view text);

// Strict numeric parsing; returns false on any trailing garbage or on an
// empty field. Surrounding ASCII whitespace is allowed.
bool parse_double(std::string_view field, double& out);
bool parse_int(std::string_view field, long& out);

std::string join(const std::vector<std::string>& fields, char sep = ',');

// Flat `key = value` text with '#' comments. Keys are case-normalized;
// values keep internal spacing but are trimmed. Throws ConfigInvalid on a
// line without '='.
std::vector<std::pair<std::string, std::string>> parse_flat_kv(
    std::string_view text, const std::string& source_name);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace texturalyze::csvio
