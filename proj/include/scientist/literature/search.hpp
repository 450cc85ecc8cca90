#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "scientist/util/error.hpp"

namespace scientist::literature {

struct SearchResult {
  std::string title;
  std::vector<std::string> authors;
  int year = 0;  // 0 when the API does not report one
  std::string abstract;
  std::string venue;
  std::string citation_key;
  std::string bibtex;

  bool operator==(const SearchResult&) const = default;
};

struct SearchQuery {
  std::string query;
  int limit = 10;
};

class SearchError : public Error {
public:
  using Error::Error;
};

class LiteratureClient {
public:
  virtual ~LiteratureClient() = default;
  // At most q.limit results in the API's relevance order. No hits is an empty
  // list, not an error.
  virtual std::vector<SearchResult> search(const SearchQuery& q) = 0;
};

// Throws SearchError for an empty query or non-positive limit.
void validate(const SearchQuery& q);

// Lowercased, whitespace-collapsed, trimmed.
std::string normalize_query(std::string_view query);

// Parses a paper-search response body ({"data": [...]}) and assigns unique
// citation keys, synthesizing bibtex where the API has none.
std::vector<SearchResult> parse_search_response(const std::string& body, int limit);

std::string make_citation_key(const SearchResult& r);
std::string synthesize_bibtex(const SearchResult& r);

inline constexpr std::string_view kNoResultsText = "No papers found.";

// Numbered entries with title, authors, venue, year and abstract. Abstracts
// longer than `abstract_budget` characters are cut and marked with "...".
std::string render_results_for_prompt(const std::vector<SearchResult>& results,
                                      std::size_t abstract_budget = 2000);

// Refills at `rate_per_s` up to `burst` tokens; acquire() blocks until a token
// is available.
class TokenBucket {
public:
  using Clock = std::chrono::steady_clock;
  TokenBucket(double rate_per_s, double burst);
  void acquire();

private:
  std::mutex mu_;
  double rate_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
};

struct SemanticScholarOptions {
  std::string endpoint = "https://api.semanticscholar.org/graph/v1/paper/search";
  std::string api_key;  // optional; sent as x-api-key
  double requests_per_second = 1.0;
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{2000};
  // When set, every response body is also written as a fixture file.
  std::filesystem::path record_dir;
  std::function<void(std::chrono::milliseconds)> sleep;
};

class SemanticScholarClient : public LiteratureClient {
public:
  explicit SemanticScholarClient(SemanticScholarOptions options);
  std::vector<SearchResult> search(const SearchQuery& q) override;

private:
  SemanticScholarOptions options_;
  TokenBucket bucket_;
};

// File name under which the response body for `query` is stored.
std::string fixture_file_name(std::string_view query);

// Serves recorded response bodies from a directory.
class FixtureLiteratureClient : public LiteratureClient {
public:
  explicit FixtureLiteratureClient(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::vector<SearchResult> search(const SearchQuery& q) override;

private:
  std::filesystem::path dir_;
};

}  // namespace scientist::literature
