#include <httplib.h>

#include <thread>

#include "scientist/literature/search.hpp"
#include "scientist/util/fs.hpp"

namespace scientist::literature {

SemanticScholarClient::SemanticScholarClient(SemanticScholarOptions options)
    : options_(std::move(options)), bucket_(options_.requests_per_second, 1.0) {
  if (!options_.sleep) {
    options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::vector<SearchResult> SemanticScholarClient::search(const SearchQuery& q) {
  validate(q);
  const auto& url = options_.endpoint;
  auto scheme_end = url.find("://");
  auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  httplib::Client client(url.substr(0, path_start));
  client.set_connection_timeout(30);
  client.set_read_timeout(60);
  httplib::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("x-api-key", options_.api_key);
  httplib::Params params{{"query", q.query},
                         {"limit", std::to_string(q.limit)},
                         {"fields", "title,authors,venue,year,abstract,citationStyles"}};
  auto path = path_start == std::string::npos ? std::string("/") : url.substr(path_start);

  auto backoff = options_.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    bucket_.acquire();
    auto res = client.Get(path, params, headers);
    if (res && res->status == 200) {
      if (!options_.record_dir.empty()) {
        fsx::write_file_atomic(options_.record_dir / fixture_file_name(q.query), res->body);
      }
      return parse_search_response(res->body, q.limit);
    }
    if (res && res->status != 429 && res->status < 500) {
      throw SearchError("search rejected with status " + std::to_string(res->status));
    }
    last_error = res ? "status " + std::to_string(res->status) : httplib::to_string(res.error());
    if (attempt < options_.max_attempts) {
      options_.sleep(backoff);
      backoff *= 2;
    }
  }
  throw SearchError("search failed after " + std::to_string(options_.max_attempts) +
                    " attempts: " + last_error);
}

}  // namespace scientist::literature
