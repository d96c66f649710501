#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace morphtyp {

// Splits on runs of ASCII whitespace (space, tab, CR). Never yields empty
// tokens.
std::vector<std::string> split_whitespace(std::string_view line);

std::vector<std::string> split(std::string_view s, char sep);

// Offset of the first invalid UTF-8 byte, or npos if the string is valid.
std::size_t utf8_invalid_at(std::string_view s);

// Splits a UTF-8 string into code points (each returned element is the
// encoded bytes of one code point). Invalid bytes come back as single-byte
// units so concatenation always reproduces the input.
std::vector<std::string> utf8_codepoints(std::string_view s);

std::size_t utf8_length(std::string_view s);

// ASCII + Latin-1 supplement lowercasing; other code points pass through.
std::string lowercase(std::string_view s);

// A token counts as a word if it contains at least one letter; purely
// numeric or punctuation tokens (e.g. "123", "3.14", "--") do not. Any
// non-ASCII byte is treated as a letter.
bool is_word_surface(std::string_view surface);

// Classic edit distance over code points.
std::size_t levenshtein(std::string_view a, std::string_view b);

// Shortest round-trip decimal formatting; integral values print without a
// trailing ".0". Locale-independent.
std::string format_number(double v);

std::string strip_cr(std::string line);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

std::string trim(std::string_view s);

}  // namespace morphtyp
