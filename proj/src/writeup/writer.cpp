#include "scientist/writeup/writer.hpp"

#include <algorithm>

#include "scientist/lab/process.hpp"
#include "scientist/prompts.hpp"
#include "scientist/protocol/reflection.hpp"
#include "scientist/util/fs.hpp"
#include "scientist/util/text.hpp"

namespace scientist::writeup {

namespace fs = std::filesystem;

const std::string& SectionTips::for_section(const std::string& name) const {
  auto it = tips.find(name);
  if (it == tips.end()) throw ConfigError("no writing tips for section " + name);
  return it->second;
}

SectionTips parse_section_tips(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError("section tips must be a JSON object");
  SectionTips out;
  for (const auto& [name, tip] : j.items()) {
    if (!tip.is_string()) throw ConfigError("tips for " + name + " must be text");
    out.tips[name] = tip.get<std::string>();
  }
  for (const auto& name : writing_order()) out.for_section(name);
  return out;
}

SectionTips load_section_tips(const fs::path& path) { return parse_section_tips(fsx::read_file(path)); }

namespace {

fs::path latex_dir(const WriteupContext& ctx) {
  return ctx.session.workspace().resolve(ctx.tex_file).parent_path();
}

std::string normalize_body(std::string body) {
  if (!body.empty() && body.back() != '\n') body += '\n';
  return body;
}

std::vector<std::string> bib_keys(const ManuscriptState& state) {
  std::vector<std::string> keys;
  for (const auto& e : state.bibliography) keys.push_back(e.key);
  return keys;
}

// Section bodies as the agent left them, or nullopt if the markers broke.
std::optional<std::map<std::string, std::string>> read_back(const WriteupContext& ctx) {
  try {
    return parse_sections(ctx.session.workspace().read(ctx.tex_file));
  } catch (const TemplateFormatError&) {
    return std::nullopt;
  }
}

bool edit(WriteupContext& ctx, const std::string& prompt, int repair_rounds) {
  ctx.session.set_chat_files({ctx.tex_file});
  try {
    ctx.session.request_edit(prompt, repair_rounds);
    return true;
  } catch (const edit::EditExhausted&) {
    return false;
  }
}

// Copies every section the agent may have touched back into state, keeping
// only citations that resolve.
bool capture_all(ManuscriptState& state, const WriteupContext& ctx) {
  auto parsed = read_back(ctx);
  if (!parsed) return false;
  auto keys = bib_keys(state);
  for (const auto& name : render_order()) {
    auto it = parsed->find(name);
    if (it != parsed->end()) state.set_section(name, normalize_body(filter_citations(it->second, keys)));
  }
  return true;
}

std::string figure_list(const ManuscriptState& state) {
  if (state.figures.empty()) return "(none)";
  std::string out;
  for (const auto& f : state.figures) out += "- " + f.file + ": " + f.caption + "\n";
  return out;
}

}  // namespace

void render(const WriteupContext& ctx, const ManuscriptState& state) {
  ctx.session.workspace().write(ctx.tex_file, splice_sections(ctx.skeleton, state));
  ctx.session.workspace().write(ctx.bib_file, state.bibliography_text());
}

ManuscriptState begin_manuscript(WriteupContext& ctx, const lab::LabJournal& journal) {
  const auto& ws = ctx.session.workspace();
  if (ctx.skeleton.empty()) ctx.skeleton = ws.read(ctx.tex_file);
  auto sections = parse_sections(ctx.skeleton);
  for (const auto& name : render_order()) {
    if (!sections.count(name)) throw TemplateFormatError("template has no section markers for " + name);
  }
  ManuscriptState state;
  if (ws.exists(ctx.bib_file)) {
    for (auto& e : parse_bibliography(ws.read(ctx.bib_file))) state.add_bib(std::move(e));
  }
  for (const auto& file : journal.figures) {
    auto it = journal.plot_descriptions.find(file);
    state.figures.push_back({file, it == journal.plot_descriptions.end() ? std::string() : it->second});
  }
  render(ctx, state);
  return state;
}

void write_section(ManuscriptState& state, const std::string& section, const lab::LabJournal& journal,
                   const SectionTips& tips, WriteupContext& ctx) {
  if (journal.entries.empty()) throw WriteupPrecondition("no experimental results to write about");
  const auto& order = writing_order();
  auto pos = std::find(order.begin(), order.end(), section);
  if (pos == order.end()) throw WriteupPrecondition(section + " is not written section by section");
  for (auto it = order.begin(); it != pos; ++it) {
    if (text::trim(state.section(*it)).empty()) {
      throw WriteupPrecondition(section + " requested before " + *it);
    }
  }

  auto capture = [&]() -> std::optional<std::string> {
    auto parsed = read_back(ctx);
    if (!parsed || !parsed->count(section)) return std::nullopt;
    return normalize_body(strip_citations(parsed->at(section)));
  };

  render(ctx, state);
  auto prompt = text::fill(prompts::kSectionWrite, {{"section", section},
                                                    {"per_section_tips", tips.for_section(section)},
                                                    {"notes", journal.render()},
                                                    {"figures", figure_list(state)}});
  if (!edit(ctx, prompt, ctx.edit_repair_rounds)) {
    render(ctx, state);
    throw SectionFailed("could not apply the edit for " + section);
  }
  auto draft = capture();
  if (!draft || text::trim(*draft).empty()) {
    render(ctx, state);
    throw SectionFailed(section + " was left empty");
  }
  state.set_section(section, *draft);
  render(ctx, state);

  if (edit(ctx, text::fill(prompts::kSectionReflect, {{"section", section}}), ctx.edit_repair_rounds)) {
    auto refined = capture();
    if (refined && !text::trim(*refined).empty()) state.set_section(section, *refined);
  }
  render(ctx, state);
}

CitationReport gather_citations(ManuscriptState& state, WriteupContext& ctx, literature::LiteratureClient& client,
                                int rounds) {
  for (const auto& name : writing_order()) {
    if (text::trim(state.section(name)).empty()) {
      throw WriteupPrecondition("citations gathered before " + name + " was written");
    }
  }
  CitationReport report;
  for (int round = 1; round <= rounds; ++round) {
    report.rounds = round;
    render(ctx, state);
    llm::Conversation chat(ctx.gateway, ctx.model, std::string(prompts::kWriteupSystem), ctx.transcript);
    protocol::AskFn ask = [&](const std::string& m) { return chat.ask(m); };
    bool done = false;
    auto query_validator = [&](const protocol::Envelope& env) {
      done = env.thought.find(prompts::kNoMoreCitations) != std::string::npos || env.payload.empty();
      if (done) return;
      auto q = env.payload.find("Query");
      if (q == env.payload.end() || !q->is_string() || text::trim(q->get<std::string>()).empty()) {
        throw protocol::ProtocolError(protocol::ProtocolError::Kind::schema, "\"Query\" must be a non-empty string");
      }
    };

    protocol::Envelope query;
    try {
      auto prompt = text::fill(prompts::kCitationQuery, {{"current_round", std::to_string(round)},
                                                         {"num_rounds", std::to_string(rounds)},
                                                         {"draft", ctx.session.workspace().read(ctx.tex_file)}});
      query = protocol::parse_with_retry(ask(prompt), ask, query_validator);
    } catch (const protocol::ProtocolError&) {
      continue;
    }
    if (done) break;

    std::vector<literature::SearchResult> results;
    ++report.searches;
    try {
      results = client.search({query.payload.at("Query").get<std::string>(), 10});
    } catch (const literature::SearchError&) {
      ++report.search_failures;
      continue;
    }
    if (results.empty()) continue;

    auto select_validator = [&](const protocol::Envelope& env) {
      auto s = env.payload.find("Selected");
      if (s == env.payload.end() || !s->is_array()) {
        throw protocol::ProtocolError(protocol::ProtocolError::Kind::schema, "\"Selected\" must be a list of indices");
      }
      for (const auto& i : *s) {
        if (!i.is_number_integer() || i.get<long>() < 0 || i.get<long>() >= static_cast<long>(results.size())) {
          throw protocol::ProtocolError(protocol::ProtocolError::Kind::schema,
                                        "\"Selected\" holds an index outside the result list");
        }
      }
    };
    protocol::Envelope selection;
    try {
      auto prompt = text::fill(prompts::kCitationSelect, {{"results", literature::render_results_for_prompt(results)}});
      selection = protocol::parse_with_retry(ask(prompt), ask, select_validator);
    } catch (const protocol::ProtocolError&) {
      continue;
    }

    std::vector<std::string> keys;
    for (const auto& i : selection.payload.at("Selected")) {
      const auto& r = results[i.get<std::size_t>()];
      if (std::find(keys.begin(), keys.end(), r.citation_key) != keys.end()) continue;
      keys.push_back(r.citation_key);
      if (state.add_bib({r.citation_key, r.bibtex})) report.added_keys.push_back(r.citation_key);
    }
    if (keys.empty()) continue;
    render(ctx, state);

    auto description = selection.payload.value("Description", std::string());
    auto prompt = text::fill(prompts::kCitationInsert, {{"keys", text::join(keys, ", ")}, {"description", description}});
    if (!edit(ctx, prompt, ctx.edit_repair_rounds) || !capture_all(state, ctx)) render(ctx, state);
  }
  state.empty_related_work = text::trim(state.section(kRelatedWork)).empty();
  render(ctx, state);
  return report;
}

RefineReport refine_manuscript(ManuscriptState& state, WriteupContext& ctx) {
  for (const auto& name : writing_order()) {
    if (text::trim(state.section(name)).empty()) throw WriteupPrecondition("refinement before " + name + " was written");
  }
  RefineReport report;
  for (const auto& name : render_order()) {
    if (text::trim(state.section(name)).empty()) continue;
    render(ctx, state);
    bool ok = edit(ctx, text::fill(prompts::kSectionRefine, {{"section", name}}), ctx.edit_repair_rounds);
    auto parsed = ok ? read_back(ctx) : std::nullopt;
    if (parsed && parsed->count(name) && !text::trim(parsed->at(name)).empty()) {
      state.set_section(name, normalize_body(filter_citations(parsed->at(name), bib_keys(state))));
      report.refined.push_back(name);
    } else {
      report.failed.push_back(name);
    }
    render(ctx, state);
  }
  return report;
}

std::string error_excerpt(const std::string& log, std::size_t excerpt_lines) {
  auto lines = text::split_lines(log);
  std::size_t first = lines.size();
  for (std::size_t i = 0; i < lines.size() && first == lines.size(); ++i) {
    const auto& l = lines[i];
    auto lower = text::to_lower(l);
    if (text::starts_with(l, "!") || lower.find("error") != std::string::npos) first = i;
  }
  if (first == lines.size()) first = lines.size() > excerpt_lines ? lines.size() - excerpt_lines : 0;
  auto last = std::min(lines.size(), first + excerpt_lines);
  return text::join(std::vector<std::string>(lines.begin() + first, lines.begin() + last), "\n");
}

namespace {

struct CompilePass {
  bool ok = true;
  bool missing = false;
  std::string log;
  std::string lint;
};

CompilePass run_compile(const fs::path& dir, const CompileSettings& settings) {
  CompilePass pass;
  auto run = [&](const std::string& command) {
    lab::ProcessSpec spec;
    spec.argv = lab::expand_command(command);
    spec.cwd = dir;
    spec.timeout = settings.timeout;
    spec.tail_bytes = 64 * 1024;
    return lab::run_process(spec);
  };
  if (!text::trim(settings.lint_command).empty()) {
    auto res = run(settings.lint_command);
    // An absent linter contributes no diagnostics.
    if (res.exit_code != 127) pass.lint = text::trim(res.stdout_tail + res.stderr_tail);
    pass.log += "$ " + settings.lint_command + "\n" + res.stdout_tail + res.stderr_tail + "\n";
  }
  for (const auto& command : settings.compile_commands) {
    auto res = run(command);
    pass.log += "$ " + command + "\n" + res.stdout_tail + res.stderr_tail + "\n";
    if (!res.ok()) {
      pass.ok = false;
      pass.missing = res.exit_code == 127;
      pass.log += res.timed_out ? "error: timed out\n" : "error: exit status " + std::to_string(res.exit_code) + "\n";
      break;
    }
  }
  return pass;
}

}  // namespace

CompileResult compile_manuscript(ManuscriptState& state, WriteupContext& ctx, const CompileSettings& settings) {
  const auto& ws = ctx.session.workspace();
  auto dir = latex_dir(ctx);
  if (!fs::is_directory(dir)) throw WriteupPrecondition("missing LaTeX directory " + dir.string());
  for (const auto& f : state.figures) {
    auto src = ws.root() / f.file;
    std::error_code ec;
    if (fs::is_regular_file(src)) fs::copy_file(src, dir / fs::path(f.file).filename(), fs::copy_options::overwrite_existing, ec);
  }
  auto guard = [&] {
    auto keys = bib_keys(state);
    for (const auto& name : render_order()) {
      state.set_section(name, drop_missing_figures(filter_citations(state.section(name), keys), dir));
    }
    render(ctx, state);
  };
  guard();

  auto pdf_name = fs::path(ctx.tex_file).filename().replace_extension(".pdf");
  CompileResult result;
  for (int round = 0;; ++round) {
    std::error_code ec;
    fs::remove(dir / pdf_name, ec);
    auto pass = run_compile(dir, settings);
    fsx::write_file_atomic(dir / "compile.log", pass.log);
    state.compile_log_tail = text::tail(pass.log, 4000);
    result.repair_rounds = round;
    if (pass.ok && fs::is_regular_file(dir / pdf_name)) {
      result.success = true;
      result.pdf = ws.root() / settings.output_pdf;
      fs::copy_file(dir / pdf_name, result.pdf, fs::copy_options::overwrite_existing);
      state.compiled = true;
      return result;
    }
    if (pass.missing) {
      result.toolchain_missing = true;
      result.excerpt = error_excerpt(pass.log, settings.excerpt_lines);
      break;
    }
    if (pass.ok) pass.log += "error: no PDF was produced\n";
    result.excerpt = error_excerpt(pass.log, settings.excerpt_lines);
    if (!pass.lint.empty()) result.excerpt += "\n\nLinter diagnostics:\n" + text::tail(pass.lint, 4000);
    if (round >= settings.repair_rounds) break;
    if (!edit(ctx, text::fill(prompts::kCompileRepair, {{"errors", result.excerpt}}), 0) || !capture_all(state, ctx)) {
      render(ctx, state);
    }
    guard();
  }
  state.compiled = false;
  return result;
}

}  // namespace scientist::writeup
