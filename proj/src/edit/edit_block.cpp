#include "scientist/edit/edit_block.hpp"

#include "scientist/util/text.hpp"

namespace scientist::edit {

namespace {

std::string_view rstrip(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool is_marker(std::string_view line, std::string_view marker) { return rstrip(line) == marker; }

bool is_fence(std::string_view line) { return text::starts_with(text::trim(line), "```"); }

std::string clean_filename(std::string_view line) {
  auto name = text::trim(line);
  while (!name.empty() && (name.front() == '`' || name.front() == '*')) name.erase(0, 1);
  while (!name.empty() && (name.back() == '`' || name.back() == '*' || name.back() == ':')) name.pop_back();
  return text::trim(name);
}

enum class State { outside, in_fence, in_search, in_replace };

}  // namespace

std::vector<EditBlock> parse_edit_blocks(std::string_view response) {
  auto lines = text::split_lines(response);
  std::vector<EditBlock> blocks;
  State state = State::outside;
  std::string fence_file;
  EditBlock current;
  std::size_t search_line = 0;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const std::size_t lineno = i + 1;
    switch (state) {
      case State::outside:
        if (is_marker(line, kSearchMarker)) {
          throw EditParseError(lineno, "SEARCH marker outside a fenced block");
        }
        if (is_marker(line, kReplaceMarker)) throw EditParseError(lineno, "dangling REPLACE marker");
        if (is_fence(line)) {
          fence_file = i > 0 ? clean_filename(lines[i - 1]) : std::string{};
          if (i > 0 && (is_fence(lines[i - 1]) || is_marker(lines[i - 1], kDividerMarker))) {
            fence_file.clear();
          }
          state = State::in_fence;
        }
        break;
      case State::in_fence:
        if (text::trim(line) == "```") {
          state = State::outside;
        } else if (is_marker(line, kSearchMarker)) {
          if (fence_file.empty()) throw EditParseError(lineno, "fenced block without a filename");
          current = EditBlock{fence_file, {}, {}};
          search_line = lineno;
          state = State::in_search;
        } else if (is_marker(line, kDividerMarker) || is_marker(line, kReplaceMarker)) {
          throw EditParseError(lineno, "dangling marker without SEARCH");
        }
        break;
      case State::in_search:
        if (is_marker(line, kSearchMarker)) throw EditParseError(lineno, "nested SEARCH marker");
        if (is_marker(line, kReplaceMarker)) {
          throw EditParseError(lineno, "REPLACE marker before the ======= divider");
        }
        if (is_marker(line, kDividerMarker)) {
          state = State::in_replace;
        } else {
          current.search += line;
          current.search += '\n';
        }
        break;
      case State::in_replace:
        if (is_marker(line, kSearchMarker) || is_marker(line, kDividerMarker)) {
          throw EditParseError(lineno, "nested marker inside REPLACE section");
        }
        if (is_marker(line, kReplaceMarker)) {
          blocks.push_back(std::move(current));
          current = {};
          state = State::in_fence;
        } else {
          current.replace += line;
          current.replace += '\n';
        }
        break;
    }
  }
  if (state == State::in_search) {
    throw EditParseError(search_line, "SEARCH block is missing its ======= divider");
  }
  if (state == State::in_replace) {
    throw EditParseError(search_line, "SEARCH block is missing its REPLACE marker");
  }
  return blocks;
}

std::string render_edit_blocks(const std::vector<EditBlock>& blocks) {
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (i) out += '\n';
    out += b.file_path;
    out += "\n```\n";
    out += kSearchMarker;
    out += '\n';
    out += b.search;
    out += kDividerMarker;
    out += '\n';
    out += b.replace;
    out += kReplaceMarker;
    out += "\n```\n";
  }
  return out;
}

}  // namespace scientist::edit
