// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace licenserec {

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string lower_copy(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(ascii_lower(c));
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
  return true;
}

// Case-insensitive ordering, usable as a map/set comparator.
struct ILess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const {
    std::size_t n = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < n; ++i) {
      char x = ascii_lower(a[i]), y = ascii_lower(b[i]);
      if (x != y) return x < y;
    }
    return a.size() < b.size();
  }
};

inline std::string_view trim_view(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Lookup key for raw license tags: lowercase, whitespace and underscores
// become hyphens, hyphen runs collapse. "Apache 2.0" and "apache-2.0"
// share a key.
inline std::string canonical_tag_key(std::string_view raw) {
  raw = trim_view(raw);
  std::string key;
  key.reserve(raw.size());
  for (char c : raw) {
    char mapped = ascii_lower(c);
    if (mapped == '_' || std::isspace(static_cast<unsigned char>(mapped))) mapped = '-';
    if (mapped == '-' && (key.empty() || key.back() == '-')) continue;
    key.push_back(mapped);
  }
  while (!key.empty() && key.back() == '-') key.pop_back();
  return key;
}

// Half-up decimal rounding for report tables: 17.4899 -> 17.5.
inline double round_half_up(double value, int decimals) {
  double f = std::pow(10.0, decimals);
  return std::floor(value * f + 0.5) / f;
}

inline std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace licenserec
