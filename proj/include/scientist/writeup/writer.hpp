#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scientist/edit/session.hpp"
#include "scientist/lab/experiment.hpp"
#include "scientist/literature/search.hpp"
#include "scientist/writeup/manuscript.hpp"

namespace scientist::writeup {

class SectionFailed : public Error {
public:
  using Error::Error;
};

struct SectionTips {
  std::map<std::string, std::string> tips;
  const std::string& for_section(const std::string& name) const;
};

// JSON object of section name to guidance. Every written section must have
// an entry.
SectionTips load_section_tips(const std::filesystem::path& path);
SectionTips parse_section_tips(const std::string& json_text);

struct WriteupContext {
  edit::EditSession& session;  // rooted at the idea workspace
  llm::Gateway& gateway;
  llm::ModelSettings model;
  llm::TranscriptWriter* transcript = nullptr;
  std::string tex_file = "latex/template.tex";
  std::string bib_file = "latex/references.bib";
  // Template text with its section markers; every render starts from it.
  std::string skeleton;
  int edit_repair_rounds = 2;
};

// Reads the skeleton, picks up any existing bibliography and the journal's
// figures, and writes the empty template back.
ManuscriptState begin_manuscript(WriteupContext& ctx, const lab::LabJournal& journal);

// Writes state into the template file (and the bibliography file).
void render(const WriteupContext& ctx, const ManuscriptState& state);

// Fills one section, then applies one self-reflection round. Citations are
// stripped. Throws WriteupPrecondition on an empty journal, a section that is
// not written directly, or an earlier section still missing; SectionFailed
// when the edit cannot be applied.
void write_section(ManuscriptState& state, const std::string& section, const lab::LabJournal& journal,
                   const SectionTips& tips, WriteupContext& ctx);

struct CitationReport {
  int rounds = 0;
  int searches = 0;
  int search_failures = 0;
  std::vector<std::string> added_keys;
};

// Query, search, select, append bibtex, insert. Search and protocol failures
// cost a round and nothing more.
CitationReport gather_citations(ManuscriptState& state, WriteupContext& ctx, literature::LiteratureClient& client,
                                int rounds = 20);

struct RefineReport {
  std::vector<std::string> refined;
  std::vector<std::string> failed;
};

// One more reflection pass per written section; a failed section keeps its text.
RefineReport refine_manuscript(ManuscriptState& state, WriteupContext& ctx);

struct CompileSettings {
  // Advisory: its diagnostics are shown to the repair agent with the errors.
  std::string lint_command = "chktex -q -n2 -n24 -n13 -n1 template.tex";
  std::vector<std::string> compile_commands = {
      "pdflatex -interaction=nonstopmode template.tex", "bibtex template",
      "pdflatex -interaction=nonstopmode template.tex", "pdflatex -interaction=nonstopmode template.tex"};
  int repair_rounds = 5;
  std::chrono::seconds timeout{300};
  std::size_t excerpt_lines = 30;
  std::string output_pdf = "paper.pdf";
};

struct CompileResult {
  bool success = false;
  int repair_rounds = 0;  // round on which the PDF appeared
  bool toolchain_missing = false;  // a compile command could not be started
  std::filesystem::path pdf;
  std::string excerpt;
};

// Up to `excerpt_lines` lines starting at the first error marker, or the log
// tail when there is none.
std::string error_excerpt(const std::string& log, std::size_t excerpt_lines);

// Lint, compile, and on failure hand the error excerpt to the edit agent.
// The PDF is copied to the workspace; the log stays in latex/compile.log.
CompileResult compile_manuscript(ManuscriptState& state, WriteupContext& ctx, const CompileSettings& settings);

}  // namespace scientist::writeup
