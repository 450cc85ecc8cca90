#include "scientist/writeup/manuscript.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "scientist/util/text.hpp"

namespace scientist::writeup {

namespace fs = std::filesystem;

const std::vector<std::string>& render_order() {
  static const std::vector<std::string> kOrder = {"Abstract",   "Introduction",       "Related Work",
                                                  "Background", "Method",             "Experimental Setup",
                                                  "Results",    "Conclusion"};
  return kOrder;
}

const std::vector<std::string>& writing_order() {
  static const std::vector<std::string> kOrder = {"Abstract", "Introduction",       "Background", "Method",
                                                  "Experimental Setup", "Results", "Conclusion"};
  return kOrder;
}

ManuscriptState::ManuscriptState() {
  for (const auto& name : render_order()) sections.emplace_back(name, "");
}

const std::string& ManuscriptState::section(std::string_view name) const {
  for (const auto& [n, text] : sections) {
    if (n == name) return text;
  }
  throw Error("unknown section: " + std::string(name));
}

void ManuscriptState::set_section(std::string_view name, std::string text) {
  for (auto& [n, body] : sections) {
    if (n == name) {
      body = std::move(text);
      return;
    }
  }
  throw Error("unknown section: " + std::string(name));
}

bool ManuscriptState::has_key(std::string_view key) const {
  return std::any_of(bibliography.begin(), bibliography.end(), [&](const auto& e) { return e.key == key; });
}

bool ManuscriptState::add_bib(BibEntry entry) {
  if (entry.key.empty() || has_key(entry.key)) return false;
  bibliography.push_back(std::move(entry));
  return true;
}

std::string ManuscriptState::bibliography_text() const {
  std::string out;
  for (const auto& e : bibliography) out += text::trim(e.bibtex) + "\n\n";
  return out;
}

nlohmann::json to_json(const ManuscriptState& state) {
  nlohmann::json sections = nlohmann::json::array();
  for (const auto& [name, body] : state.sections) sections.push_back({{"name", name}, {"text", body}});
  nlohmann::json bib = nlohmann::json::array();
  for (const auto& e : state.bibliography) bib.push_back({{"key", e.key}, {"bibtex", e.bibtex}});
  nlohmann::json figs = nlohmann::json::array();
  for (const auto& f : state.figures) figs.push_back({{"file", f.file}, {"caption", f.caption}});
  return {{"sections", sections},
          {"bibliography", bib},
          {"figures", figs},
          {"compiled", state.compiled},
          {"compile_log_tail", state.compile_log_tail},
          {"empty_related_work", state.empty_related_work}};
}

ManuscriptState manuscript_from_json(const nlohmann::json& j) {
  ManuscriptState state;
  for (const auto& s : j.at("sections")) state.set_section(s.at("name").get<std::string>(), s.at("text").get<std::string>());
  for (const auto& e : j.at("bibliography")) state.add_bib({e.at("key").get<std::string>(), e.at("bibtex").get<std::string>()});
  for (const auto& f : j.at("figures")) state.figures.push_back({f.at("file").get<std::string>(), f.at("caption").get<std::string>()});
  state.compiled = j.value("compiled", false);
  state.compile_log_tail = j.value("compile_log_tail", "");
  state.empty_related_work = j.value("empty_related_work", false);
  return state;
}

namespace {

std::optional<std::string> marker_name(std::string_view line, std::string_view marker) {
  auto t = text::trim(line);
  if (!text::starts_with(t, marker)) return std::nullopt;
  return text::trim(std::string_view(t).substr(marker.size()));
}

}  // namespace

std::map<std::string, std::string> parse_sections(std::string_view tex) {
  std::map<std::string, std::string> out;
  std::optional<std::string> open;
  std::string body;
  int line_no = 0;
  for (const auto& line : text::split_lines(tex, true)) {
    ++line_no;
    if (auto name = marker_name(line, kBeginMarker)) {
      if (open) throw TemplateFormatError("line " + std::to_string(line_no) + ": section " + *name + " opened inside " + *open);
      if (out.count(*name)) throw TemplateFormatError("line " + std::to_string(line_no) + ": duplicate section " + *name);
      open = *name;
      body.clear();
    } else if (auto name = marker_name(line, kEndMarker)) {
      if (!open || *open != *name) {
        throw TemplateFormatError("line " + std::to_string(line_no) + ": unmatched end of section " + *name);
      }
      out[*open] = body;
      open.reset();
    } else if (open) {
      body += line;
    }
  }
  if (open) throw TemplateFormatError("section " + *open + " is never closed");
  return out;
}

std::string splice_sections(std::string_view tex, const ManuscriptState& state) {
  parse_sections(tex);
  std::string out;
  bool skipping = false;
  for (const auto& line : text::split_lines(tex, true)) {
    if (auto name = marker_name(line, kBeginMarker)) {
      out += line;
      auto it = std::find_if(state.sections.begin(), state.sections.end(),
                             [&](const auto& s) { return s.first == *name; });
      if (it != state.sections.end()) {
        skipping = true;
        out += it->second;
        if (!it->second.empty() && it->second.back() != '\n') out += '\n';
      }
    } else if (marker_name(line, kEndMarker)) {
      skipping = false;
      out += line;
    } else if (!skipping) {
      out += line;
    }
  }
  return out;
}

std::vector<BibEntry> parse_bibliography(std::string_view bib) {
  std::vector<BibEntry> out;
  std::size_t pos = 0;
  while ((pos = bib.find('@', pos)) != std::string_view::npos) {
    auto open = bib.find('{', pos);
    if (open == std::string_view::npos) break;
    auto comma = bib.find(',', open);
    int depth = 0;
    std::size_t end = open;
    for (; end < bib.size(); ++end) {
      if (bib[end] == '{') ++depth;
      if (bib[end] == '}' && --depth == 0) break;
    }
    if (end >= bib.size()) break;
    auto type = text::to_lower(text::trim(bib.substr(pos + 1, open - pos - 1)));
    bool entry = type != "comment" && type != "string" && type != "preamble";
    if (entry && comma != std::string_view::npos && comma < end) {
      out.push_back({text::trim(bib.substr(open + 1, comma - open - 1)), std::string(bib.substr(pos, end - pos + 1))});
    }
    pos = end + 1;
  }
  return out;
}

namespace {

const std::regex& cite_re() {
  static const std::regex re(R"(~?\\(?:[A-Za-z]*cite[A-Za-z]*)\*?(?:\[[^\]]*\]){0,2}\{([^}]*)\})");
  return re;
}

std::vector<std::string> split_keys(const std::string& list) {
  std::vector<std::string> keys;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto comma = list.find(',', start);
    if (comma == std::string::npos) comma = list.size();
    auto key = text::trim(std::string_view(list).substr(start, comma - start));
    if (!key.empty()) keys.push_back(key);
    start = comma + 1;
  }
  return keys;
}

template <typename F>
std::string rewrite(std::string_view in, const std::regex& re, F&& replace) {
  std::string s(in), out;
  auto last = s.cbegin();
  for (std::sregex_iterator it(s.begin(), s.end(), re), end; it != end; ++it) {
    out.append(last, (*it)[0].first);
    out += replace(*it);
    last = (*it)[0].second;
  }
  out.append(last, s.cend());
  return out;
}

}  // namespace

std::vector<std::string> cited_keys(std::string_view tex) {
  std::vector<std::string> out;
  std::string s(tex);
  for (std::sregex_iterator it(s.begin(), s.end(), cite_re()), end; it != end; ++it) {
    for (auto& k : split_keys((*it)[1].str())) out.push_back(std::move(k));
  }
  return out;
}

std::string strip_citations(std::string_view tex) {
  return rewrite(tex, cite_re(), [](const std::smatch&) { return std::string(); });
}

std::string filter_citations(std::string_view tex, const std::vector<std::string>& known) {
  std::set<std::string> ok(known.begin(), known.end());
  return rewrite(tex, cite_re(), [&](const std::smatch& m) {
    auto keys = split_keys(m[1].str());
    std::vector<std::string> kept;
    std::copy_if(keys.begin(), keys.end(), std::back_inserter(kept), [&](const auto& k) { return ok.count(k) > 0; });
    if (kept.empty()) return std::string();
    if (kept.size() == keys.size()) return m[0].str();
    auto whole = m[0].str();
    auto brace = whole.rfind('{');
    return whole.substr(0, brace + 1) + text::join(kept, ",") + "}";
  });
}

namespace {

const std::regex& graphics_re() {
  static const std::regex re(R"(\\includegraphics\*?(?:\[[^\]]*\])?\{([^}]*)\})");
  return re;
}

bool figure_exists(const fs::path& dir, const std::string& name) {
  auto p = dir / name;
  if (fs::is_regular_file(p)) return true;
  if (p.has_extension()) return false;
  for (const char* ext : {".pdf", ".png", ".jpg", ".jpeg", ".eps"}) {
    if (fs::is_regular_file(fs::path(p).concat(ext))) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> referenced_figures(std::string_view tex) {
  std::vector<std::string> out;
  std::string s(tex);
  for (std::sregex_iterator it(s.begin(), s.end(), graphics_re()), end; it != end; ++it) {
    out.push_back(text::trim((*it)[1].str()));
  }
  return out;
}

std::string drop_missing_figures(std::string_view tex, const fs::path& dir) {
  return rewrite(tex, graphics_re(), [&](const std::smatch& m) {
    return figure_exists(dir, text::trim(m[1].str())) ? m[0].str() : std::string();
  });
}

}  // namespace scientist::writeup
