#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scientist/util/error.hpp"

namespace scientist::llm {

enum class Role { system, user, assistant };

std::string_view to_string(Role role);
Role role_from_string(std::string_view name);

struct ChatTurn {
  Role role = Role::user;
  std::string content;

  bool operator==(const ChatTurn&) const = default;
};

struct CompletionRequest {
  std::vector<ChatTurn> turns;
  double temperature = 0.7;
  int max_output_tokens = 4096;
  std::string model_id;
  // Distinguishes repeated draws of an identical prompt (ensemble members).
  // Part of the replay key; never sent to a remote API.
  int sample_index = 0;
};

struct Completion {
  std::string text;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
};

class RequestError : public Error {
public:
  using Error::Error;
};

// Retryable failure talking to a backend.
class TransportError : public Error {
public:
  using Error::Error;
};

class RateLimitError : public TransportError {
public:
  RateLimitError(const std::string& what, double retry_after_s)
      : TransportError(what), retry_after_s_(retry_after_s) {}
  double retry_after_s() const { return retry_after_s_; }

private:
  double retry_after_s_;
};

class ReplayMiss : public Error {
public:
  explicit ReplayMiss(std::string digest)
      : Error("replay miss: no fixture for request digest " + digest), digest_(std::move(digest)) {}
  const std::string& digest() const { return digest_; }

private:
  std::string digest_;
};

class RetriesExhausted : public Error {
public:
  RetriesExhausted(const std::string& what, int attempts)
      : Error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

private:
  int attempts_;
};

// Throws RequestError when the request breaks a turn-ordering or range rule.
void validate(const CompletionRequest& request);

nlohmann::json to_json(const CompletionRequest& request);

// SHA-256 over the canonical serialization of (model_id, temperature, turns,
// sample_index). Two requests with equal digests are interchangeable for replay.
std::string request_digest(const CompletionRequest& request);

}  // namespace scientist::llm
