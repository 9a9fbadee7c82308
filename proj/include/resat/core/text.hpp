#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace resat::text {

/// Splits into lines, each keeping its trailing '\n'. The last element has no
/// '\n' when the text does not end with one. Empty text yields no lines.
std::vector<std::string> split_lines(std::string_view text);

/// Splits on '\n' and drops the terminators. A trailing '\n' does not produce
/// an empty final element.
std::vector<std::string> split_lines_bare(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep = "");

std::string_view trim(std::string_view s);
std::string_view rtrim(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

/// Counts (possibly overlapping) occurrences of needle in haystack.
std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

/// Byte offsets of every (possibly overlapping) occurrence.
std::vector<std::size_t> find_all(std::string_view haystack, std::string_view needle);

/// Backslashes become '/', leading "./" and duplicate separators are removed.
std::string normalize_path(std::string_view path);

/// 64-bit FNV-1a; used wherever a stable, platform-independent hash is needed.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ull);

}  // namespace resat::text
