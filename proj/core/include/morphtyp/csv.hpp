#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace morphtyp {

// RFC-4180-style CSV: fields containing comma, quote or newline are quoted.
std::string csv_escape(std::string_view field);

std::string csv_join(const std::vector<std::string>& fields);

// Parses one logical CSV record; quoted fields may not span lines here
// (none of the toolkit's writers emit embedded newlines).
std::vector<std::string> csv_split(std::string_view line);

// Whole-file helpers. write_file is atomic enough for our purposes: it
// truncates and writes in one stream.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Reads a text file into lines, stripping trailing CR. The final newline
// does not produce an empty trailing line.
std::vector<std::string> read_lines(const std::string& path);

}  // namespace morphtyp
