#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "scientist/llm/backend.hpp"
#include "scientist/llm/chat.hpp"
#include "scientist/llm/ledger.hpp"

namespace scientist::llm {

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{1000};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{60000};
  // Injected so tests do not sleep.
  std::function<void(std::chrono::milliseconds)> sleep;
};

// Append-only newline-delimited record of request digests and responses.
// One writer per session file; the replay backend reads the same format.
class TranscriptWriter {
public:
  explicit TranscriptWriter(std::filesystem::path path);
  void append(const std::string& digest, const CompletionRequest& request,
              const Completion& completion);
  const std::filesystem::path& path() const { return path_; }
  std::size_t entries() const;

private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::size_t entries_ = 0;
};

struct ChatResult {
  std::string text;
  Usage delta;
  std::string digest;
};

class Gateway {
public:
  Gateway(std::shared_ptr<Backend> backend, PriceTable prices = {}, RetryPolicy retry = {});

  // Sends one request with bounded retry on transport and rate-limit errors.
  // Replay misses and request errors are not retried.
  ChatResult chat_complete(const CompletionRequest& request,
                           TranscriptWriter* transcript = nullptr);

  const UsageLedger& ledger() const { return ledger_; }
  const RetryPolicy& retry_policy() const { return retry_; }

private:
  std::shared_ptr<Backend> backend_;
  PriceTable prices_;
  RetryPolicy retry_;
  UsageLedger ledger_;
};

struct ModelSettings {
  std::string model_id = "gpt-4o-2024-05-13";
  double temperature = 0.75;
  int max_output_tokens = 4096;
};

// A multi-turn dialogue owned by one worker: system prompt, history, and the
// gateway it talks through.
class Conversation {
public:
  Conversation(Gateway& gateway, ModelSettings settings, std::string system_prompt,
               TranscriptWriter* transcript = nullptr);

  // Appends the user turn, fetches the reply, appends it, and returns it.
  // On failure the history is left as it was before the call.
  std::string ask(const std::string& user_message);

  const std::vector<ChatTurn>& turns() const { return turns_; }
  int calls() const { return calls_; }
  void set_sample_index(int index) { sample_index_ = index; }

private:
  Gateway& gateway_;
  ModelSettings settings_;
  TranscriptWriter* transcript_;
  std::vector<ChatTurn> turns_;
  int calls_ = 0;
  int sample_index_ = 0;
};

}  // namespace scientist::llm
