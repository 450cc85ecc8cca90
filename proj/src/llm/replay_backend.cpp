#include <algorithm>
#include <fstream>

#include "scientist/llm/backend.hpp"
#include "scientist/util/error.hpp"

namespace scientist::llm {

namespace fs = std::filesystem;

namespace {

void load_file(ReplayBackend& backend, const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open transcript " + file.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    Completion c;
    c.text = record.at("response").get<std::string>();
    c.prompt_tokens = record.value("prompt_tokens", std::uint64_t{0});
    c.completion_tokens = record.value("completion_tokens", std::uint64_t{0});
    backend.add(record.at("digest").get<std::string>(), std::move(c));
  }
}

}  // namespace

void ReplayBackend::load(const fs::path& path) {
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) load_file(*this, f);
  } else {
    load_file(*this, path);
  }
}

void ReplayBackend::add(const std::string& digest, Completion completion) {
  std::lock_guard lock(mu_);
  fixtures_[digest].responses.push_back(std::move(completion));
}

std::size_t ReplayBackend::size() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [_, e] : fixtures_) n += e.responses.size();
  return n;
}

Completion ReplayBackend::complete(const CompletionRequest& request) {
  auto digest = request_digest(request);
  std::lock_guard lock(mu_);
  auto it = fixtures_.find(digest);
  if (it == fixtures_.end()) throw ReplayMiss(digest);
  auto& entry = it->second;
  // Past the end of the queue the last answer repeats; identical requests
  // beyond what was recorded are assumed to be deterministic.
  auto idx = std::min(entry.cursor, entry.responses.size() - 1);
  ++entry.cursor;
  return entry.responses[idx];
}

}  // namespace scientist::llm
