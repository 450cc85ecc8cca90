#include "scientist/literature/search.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "scientist/util/fs.hpp"
#include "scientist/util/hash.hpp"
#include "scientist/util/text.hpp"

namespace scientist::literature {

void validate(const SearchQuery& q) {
  if (text::trim(q.query).empty()) throw SearchError("search query is empty");
  if (q.limit < 1) throw SearchError("search limit must be positive");
}

std::string normalize_query(std::string_view query) {
  std::string out;
  bool space = false;
  for (char c : text::trim(query)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

namespace {

std::string alnum_lower(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

std::string last_name(const std::string& author) {
  auto t = text::trim(author);
  auto sp = t.find_last_of(' ');
  return sp == std::string::npos ? t : t.substr(sp + 1);
}

std::string bibtex_key(const std::string& bibtex) {
  auto brace = bibtex.find('{');
  auto comma = bibtex.find(',', brace == std::string::npos ? 0 : brace);
  if (brace == std::string::npos || comma == std::string::npos) return {};
  return text::trim(std::string_view(bibtex).substr(brace + 1, comma - brace - 1));
}

std::string with_key(const std::string& bibtex, const std::string& key) {
  auto brace = bibtex.find('{');
  auto comma = bibtex.find(',', brace);
  return bibtex.substr(0, brace + 1) + key + bibtex.substr(comma);
}

std::string string_or_empty(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_string()) return {};
  return j[field].get<std::string>();
}

}  // namespace

std::string make_citation_key(const SearchResult& r) {
  static const std::vector<std::string> kStop = {"a", "an", "the", "on", "of", "for", "in", "to", "and"};
  std::string key = r.authors.empty() ? "anon" : alnum_lower(last_name(r.authors.front()));
  if (key.empty()) key = "anon";
  if (r.year > 0) key += std::to_string(r.year);
  std::istringstream words(r.title);
  for (std::string w; words >> w;) {
    auto cleaned = alnum_lower(w);
    if (cleaned.empty() || std::find(kStop.begin(), kStop.end(), cleaned) != kStop.end()) continue;
    key += cleaned;
    break;
  }
  return key;
}

std::string synthesize_bibtex(const SearchResult& r) {
  std::ostringstream out;
  out << "@article{" << (r.citation_key.empty() ? make_citation_key(r) : r.citation_key) << ",\n"
      << "  title = {" << r.title << "},\n";
  if (!r.authors.empty()) out << "  author = {" << text::join(r.authors, " and ") << "},\n";
  if (!r.venue.empty()) out << "  journal = {" << r.venue << "},\n";
  if (r.year > 0) out << "  year = {" << r.year << "},\n";
  out << "}";
  return out.str();
}

std::vector<SearchResult> parse_search_response(const std::string& body, int limit) {
  auto json = nlohmann::json::parse(body, nullptr, false);
  if (json.is_discarded() || !json.is_object()) throw SearchError("unparseable search response");
  std::vector<SearchResult> results;
  if (!json.contains("data") || !json["data"].is_array()) return results;

  std::map<std::string, int> key_uses;
  for (const auto& item : json["data"]) {
    if (static_cast<int>(results.size()) >= limit) break;
    SearchResult r;
    r.title = text::trim(string_or_empty(item, "title"));
    if (r.title.empty()) continue;
    if (item.contains("authors") && item["authors"].is_array()) {
      for (const auto& a : item["authors"]) {
        auto name = a.is_object() ? string_or_empty(a, "name") : std::string{};
        if (!name.empty()) r.authors.push_back(name);
      }
    }
    if (item.contains("year") && item["year"].is_number_integer()) r.year = item["year"].get<int>();
    r.abstract = string_or_empty(item, "abstract");
    r.venue = string_or_empty(item, "venue");
    if (item.contains("citationStyles") && item["citationStyles"].is_object()) {
      r.bibtex = string_or_empty(item["citationStyles"], "bibtex");
    }
    auto key = bibtex_key(r.bibtex);
    if (key.empty()) key = make_citation_key(r);
    int uses = key_uses[key]++;
    if (uses > 0) key += std::string(1, static_cast<char>('a' + std::min(uses - 1, 25))) +
                         (uses > 26 ? std::to_string(uses) : "");
    r.citation_key = key;
    r.bibtex = r.bibtex.empty() || bibtex_key(r.bibtex).empty() ? synthesize_bibtex(r)
                                                                : with_key(r.bibtex, key);
    results.push_back(std::move(r));
  }
  return results;
}

std::string render_results_for_prompt(const std::vector<SearchResult>& results,
                                      std::size_t abstract_budget) {
  if (results.empty()) return std::string(kNoResultsText);
  std::ostringstream out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (i) out << "\n\n";
    out << i << ": " << r.title << ". " << (r.authors.empty() ? "Unknown authors" : text::join(r.authors, ", "))
        << ". " << (r.venue.empty() ? "Unknown venue" : r.venue) << ", "
        << (r.year > 0 ? std::to_string(r.year) : "n.d.") << ".\n";
    std::string abstract = r.abstract.empty() ? "No abstract available." : r.abstract;
    if (abstract.size() > abstract_budget) abstract = abstract.substr(0, abstract_budget) + "...";
    out << "Abstract: " << abstract;
  }
  return out.str();
}

TokenBucket::TokenBucket(double rate_per_s, double burst)
    : rate_(rate_per_s), burst_(std::max(1.0, burst)), tokens_(burst_), last_(Clock::now()) {}

void TokenBucket::acquire() {
  std::unique_lock lock(mu_);
  while (true) {
    auto now = Clock::now();
    tokens_ = std::min(burst_, tokens_ + std::chrono::duration<double>(now - last_).count() * rate_);
    last_ = now;
    if (tokens_ >= 1.0 || rate_ <= 0) {
      tokens_ -= 1.0;
      return;
    }
    auto wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
    lock.unlock();
    std::this_thread::sleep_for(wait);
    lock.lock();
  }
}

std::string fixture_file_name(std::string_view query) {
  auto norm = normalize_query(query);
  std::string slug;
  for (char c : norm) {
    slug += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    if (slug.size() >= 60) break;
  }
  return slug + "-" + sha256_hex(norm).substr(0, 10) + ".json";
}

std::vector<SearchResult> FixtureLiteratureClient::search(const SearchQuery& q) {
  validate(q);
  auto path = dir_ / fixture_file_name(q.query);
  if (!std::filesystem::exists(path)) {
    throw SearchError("no literature fixture for query '" + normalize_query(q.query) + "' (" +
                      path.filename().string() + ")");
  }
  return parse_search_response(fsx::read_file(path), q.limit);
}

}  // namespace scientist::literature
