#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Minimal RFC-4180 reader/writer: comma separator, double-quote quoting,
// quoted fields may contain commas, quotes ("") and newlines.
namespace emolab::csv {

using Row = std::vector<std::string>;

// Blank lines are skipped; a leading UTF-8 BOM is dropped. Throws DataError
// on an unterminated quote or stray characters after a closing quote.
std::vector<Row> parse(std::string_view text);

std::string quote(std::string_view field);
std::string format_row(std::span<const std::string> fields);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace emolab::csv
