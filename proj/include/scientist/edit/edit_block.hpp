#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "scientist/util/error.hpp"

namespace scientist::edit {

inline constexpr std::string_view kSearchMarker = "<<<<<<< SEARCH";
inline constexpr std::string_view kDividerMarker = "=======";
inline constexpr std::string_view kReplaceMarker = ">>>>>>> REPLACE";

// One exact-match search/replace patch against a workspace-relative file.
// Both texts are whole lines: empty, or ending in '\n'.
struct EditBlock {
  std::string file_path;
  std::string search;
  std::string replace;

  bool operator==(const EditBlock&) const = default;
};

class EditParseError : public Error {
public:
  EditParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  // 1-based line of the offending marker.
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// Grammar, line by line:
//
//   path/to/file
//   ```lang
//   <<<<<<< SEARCH
//   ...search lines...
//   =======
//   ...replace lines...
//   >>>>>>> REPLACE
//   ```
//
// A fence may hold several blocks. Lines between the markers are taken
// verbatim; fences are not recognized there.
std::vector<EditBlock> parse_edit_blocks(std::string_view response);

std::string render_edit_blocks(const std::vector<EditBlock>& blocks);

}  // namespace scientist::edit
