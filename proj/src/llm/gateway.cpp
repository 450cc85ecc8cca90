#include "scientist/llm/gateway.hpp"

#include <algorithm>
#include <thread>

#include "scientist/util/fs.hpp"

namespace scientist::llm {

TranscriptWriter::TranscriptWriter(std::filesystem::path path) : path_(std::move(path)) {}

void TranscriptWriter::append(const std::string& digest, const CompletionRequest& request,
                              const Completion& completion) {
  auto record = to_json(request);
  record["digest"] = digest;
  record["response"] = completion.text;
  record["prompt_tokens"] = completion.prompt_tokens;
  record["completion_tokens"] = completion.completion_tokens;
  std::lock_guard lock(mu_);
  fsx::append_file(path_, record.dump() + "\n");
  ++entries_;
}

std::size_t TranscriptWriter::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

Gateway::Gateway(std::shared_ptr<Backend> backend, PriceTable prices, RetryPolicy retry)
    : backend_(std::move(backend)), prices_(std::move(prices)), retry_(std::move(retry)) {
  if (!retry_.sleep) {
    retry_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
  retry_.max_attempts = std::max(1, retry_.max_attempts);
}

ChatResult Gateway::chat_complete(const CompletionRequest& request, TranscriptWriter* transcript) {
  validate(request);
  auto digest = request_digest(request);
  auto backoff = retry_.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    try {
      auto completion = backend_->complete(request);
      if (completion.text.empty()) throw TransportError("empty completion");
      Usage delta{completion.prompt_tokens, completion.completion_tokens,
                  prices_.cost(request.model_id, completion.prompt_tokens,
                               completion.completion_tokens),
                  1};
      ledger_.add(delta);
      if (transcript) transcript->append(digest, request, completion);
      return {std::move(completion.text), delta, digest};
    } catch (const RateLimitError& e) {
      last_error = e.what();
      if (attempt == retry_.max_attempts) break;
      auto hinted = std::chrono::milliseconds(static_cast<long>(e.retry_after_s() * 1000));
      retry_.sleep(std::max(backoff, hinted));
    } catch (const TransportError& e) {
      last_error = e.what();
      if (attempt == retry_.max_attempts) break;
      retry_.sleep(backoff);
    }
    backoff = std::min(retry_.max_backoff,
                       std::chrono::milliseconds(static_cast<long>(backoff.count() * retry_.multiplier)));
  }
  throw RetriesExhausted("completion failed after " + std::to_string(retry_.max_attempts) +
                             " attempts: " + last_error,
                         retry_.max_attempts);
}

Conversation::Conversation(Gateway& gateway, ModelSettings settings, std::string system_prompt,
                           TranscriptWriter* transcript)
    : gateway_(gateway), settings_(std::move(settings)), transcript_(transcript) {
  if (!system_prompt.empty()) turns_.push_back({Role::system, std::move(system_prompt)});
}

std::string Conversation::ask(const std::string& user_message) {
  turns_.push_back({Role::user, user_message});
  CompletionRequest request{turns_, settings_.temperature, settings_.max_output_tokens,
                            settings_.model_id, sample_index_};
  ++calls_;
  try {
    auto result = gateway_.chat_complete(request, transcript_);
    turns_.push_back({Role::assistant, result.text});
    return result.text;
  } catch (...) {
    turns_.pop_back();
    throw;
  }
}

}  // namespace scientist::llm
