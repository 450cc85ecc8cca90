#pragma once

#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>

#include "scientist/llm/chat.hpp"

namespace scientist::llm {

class Backend {
public:
  virtual ~Backend() = default;
  virtual Completion complete(const CompletionRequest& request) = 0;
};

// Serves recorded completions keyed by request digest. Each digest holds a
// queue, so a transcript that issued the same request twice replays both
// answers in their recorded order.
class ReplayBackend : public Backend {
public:
  ReplayBackend() = default;

  // Loads one transcript file, or every *.jsonl file below a directory.
  void load(const std::filesystem::path& path);
  void add(const std::string& digest, Completion completion);
  std::size_t size() const;

  Completion complete(const CompletionRequest& request) override;

private:
  struct Entry {
    std::vector<Completion> responses;
    std::size_t cursor = 0;
  };
  mutable std::mutex mu_;
  std::map<std::string, Entry> fixtures_;
};

// Adapts a callable; used for scripted tests and fault injection.
class CallbackBackend : public Backend {
public:
  using Fn = std::function<Completion(const CompletionRequest&)>;
  explicit CallbackBackend(Fn fn) : fn_(std::move(fn)) {}
  Completion complete(const CompletionRequest& request) override { return fn_(request); }

private:
  Fn fn_;
};

struct HttpBackendOptions {
  // Base URL of an OpenAI-compatible API, e.g. https://api.openai.com/v1
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  double connect_timeout_s = 30;
  double read_timeout_s = 600;
};

// Chat-completions client for OpenAI-compatible endpoints.
class HttpChatBackend : public Backend {
public:
  explicit HttpChatBackend(HttpBackendOptions options);
  Completion complete(const CompletionRequest& request) override;

  // Exposed for tests of the wire format.
  static nlohmann::json build_body(const CompletionRequest& request);
  static Completion parse_body(const std::string& body);

private:
  HttpBackendOptions options_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace scientist::llm
