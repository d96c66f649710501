#include "morphtyp/text_util.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace morphtyp {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

// Expected continuation-byte count for a UTF-8 lead byte, or -1 if invalid.
int utf8_seq_len(unsigned char b) {
  if (b < 0x80) return 1;
  if ((b & 0xE0) == 0xC0) return (b >= 0xC2) ? 2 : -1;  // reject overlong C0/C1
  if ((b & 0xF0) == 0xE0) return 3;
  if ((b & 0xF8) == 0xF0) return (b <= 0xF4) ? 4 : -1;
  return -1;
}

}  // namespace

std::vector<std::string> split_whitespace(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::size_t utf8_invalid_at(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    int len = utf8_seq_len(static_cast<unsigned char>(s[i]));
    if (len < 0) return i;
    if (i + static_cast<std::size_t>(len) > s.size()) return i;
    for (int k = 1; k < len; ++k) {
      unsigned char c = static_cast<unsigned char>(s[i + k]);
      if ((c & 0xC0) != 0x80) return i;
    }
    // Reject surrogate range ED A0..BF and overlong E0 80..9F.
    if (len == 3) {
      unsigned char b0 = static_cast<unsigned char>(s[i]);
      unsigned char b1 = static_cast<unsigned char>(s[i + 1]);
      if (b0 == 0xE0 && b1 < 0xA0) return i;
      if (b0 == 0xED && b1 >= 0xA0) return i;
    }
    if (len == 4) {
      unsigned char b0 = static_cast<unsigned char>(s[i]);
      unsigned char b1 = static_cast<unsigned char>(s[i + 1]);
      if (b0 == 0xF0 && b1 < 0x90) return i;
      if (b0 == 0xF4 && b1 >= 0x90) return i;
    }
    i += static_cast<std::size_t>(len);
  }
  return std::string_view::npos;
}

std::vector<std::string> utf8_codepoints(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    int len = utf8_seq_len(static_cast<unsigned char>(s[i]));
    std::size_t n = 1;
    if (len > 0 && i + static_cast<std::size_t>(len) <= s.size()) {
      n = static_cast<std::size_t>(len);
      for (int k = 1; k < len; ++k) {
        if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
          n = 1;
          break;
        }
      }
    }
    out.emplace_back(s.substr(i, n));
    i += n;
  }
  return out;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t count = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
  }
  return count;
}

std::string lowercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      out.push_back(static_cast<char>(std::tolower(c)));
      ++i;
    } else if (c == 0xC3 && i + 1 < s.size()) {
      // Latin-1 supplement: U+00C0..U+00DE lowercase by +0x20, except U+00D7.
      unsigned char c2 = static_cast<unsigned char>(s[i + 1]);
      out.push_back(static_cast<char>(c));
      if (c2 >= 0x80 && c2 <= 0x9E && c2 != 0x97) {
        out.push_back(static_cast<char>(c2 + 0x20));
      } else {
        out.push_back(static_cast<char>(c2));
      }
      i += 2;
    } else {
      out.push_back(static_cast<char>(c));
      ++i;
    }
  }
  return out;
}

bool is_word_surface(std::string_view surface) {
  for (char ch : surface) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (c >= 0x80) return true;
    if (std::isalpha(c)) return true;
  }
  return false;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  const std::vector<std::string> ca = utf8_codepoints(a);
  const std::vector<std::string> cb = utf8_codepoints(b);
  const std::size_t n = ca.size(), m = cb.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (ca[i - 1] == cb[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    long long iv = static_cast<long long>(v);
    return std::to_string(iv);
  }
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace morphtyp
