#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace scientist::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

// Splits on '\n'. Each element keeps its trailing newline when `keep_newlines`.
std::vector<std::string> split_lines(std::string_view s, bool keep_newlines = false);

std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string replace_all(std::string s, std::string_view from, std::string_view to);

// Substitutes `{key}` for every key in `values`. Unknown braces are left alone,
// so prompt templates may contain literal JSON.
std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& values);

// Last `max_bytes` bytes of `s`, cut forward to a line boundary when possible.
std::string tail(std::string_view s, std::size_t max_bytes);

// Counts occurrences of `needle`, overlapping ones included.
std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

std::size_t word_count(std::string_view s);

}  // namespace scientist::text
