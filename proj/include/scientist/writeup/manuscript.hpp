#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scientist/util/error.hpp"

namespace scientist::writeup {

inline constexpr std::string_view kAbstract = "Abstract";
inline constexpr std::string_view kRelatedWork = "Related Work";

// Sections in the order they appear in the paper.
const std::vector<std::string>& render_order();
// Sections in the order they are written; Related Work comes from citations.
const std::vector<std::string>& writing_order();

inline constexpr std::string_view kBeginMarker = "%% BEGIN SECTION: ";
inline constexpr std::string_view kEndMarker = "%% END SECTION: ";

class TemplateFormatError : public Error {
public:
  using Error::Error;
};

class WriteupPrecondition : public Error {
public:
  using Error::Error;
};

struct BibEntry {
  std::string key;
  std::string bibtex;
};

struct Figure {
  std::string file;
  std::string caption;
};

struct ManuscriptState {
  // Every name from render_order(), in that order; unwritten sections are empty.
  std::vector<std::pair<std::string, std::string>> sections;
  std::vector<BibEntry> bibliography;
  std::vector<Figure> figures;
  bool compiled = false;
  std::string compile_log_tail;
  bool empty_related_work = false;

  ManuscriptState();

  const std::string& section(std::string_view name) const;
  void set_section(std::string_view name, std::string text);
  bool has_key(std::string_view key) const;
  // False when the key is already present.
  bool add_bib(BibEntry entry);
  std::string bibliography_text() const;
};

nlohmann::json to_json(const ManuscriptState& state);
ManuscriptState manuscript_from_json(const nlohmann::json& j);

// Section bodies found between marker lines. Throws TemplateFormatError on
// unbalanced or duplicated markers.
std::map<std::string, std::string> parse_sections(std::string_view tex);

// Replaces every marked section body in `tex` with the text held in `state`.
std::string splice_sections(std::string_view tex, const ManuscriptState& state);

// Entries of a .bib file, keyed by their citation keys, in file order.
std::vector<BibEntry> parse_bibliography(std::string_view bib);

// Keys used by \cite, \citep, \citet and friends.
std::vector<std::string> cited_keys(std::string_view tex);
// Drops every citation command.
std::string strip_citations(std::string_view tex);
// Removes keys missing from `known`; commands left empty disappear.
std::string filter_citations(std::string_view tex, const std::vector<std::string>& known);

// Files named by \includegraphics.
std::vector<std::string> referenced_figures(std::string_view tex);
// Removes \includegraphics commands whose file does not exist under `dir`.
std::string drop_missing_figures(std::string_view tex, const std::filesystem::path& dir);

}  // namespace scientist::writeup
