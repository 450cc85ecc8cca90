#pragma once

#include <functional>
#include <string>

#include "scientist/protocol/envelope.hpp"

namespace scientist::protocol {

inline constexpr std::string_view kDefaultTerminationPhrase = "I am done";

struct ReflectionPolicy {
  int max_rounds = 3;
  std::string termination_phrase{kDefaultTerminationPhrase};
};

// Sends one user message in the owning conversation and returns the reply.
using AskFn = std::function<std::string(const std::string& user_message)>;
// Throws ProtocolError(Kind::schema) when a parsed payload breaks a rule.
using Validator = std::function<void(const Envelope&)>;

// Prompt sent after a response that failed to parse or validate.
std::string format_fix_prompt(const ProtocolError& error);

// Parses `response`; on failure asks once for a corrected answer and parses
// that. Throws the second failure. `calls` is incremented per message sent.
Envelope parse_with_retry(const std::string& response, const AskFn& ask,
                          const Validator& validator = {}, int* calls = nullptr);

struct LoopResult {
  Envelope envelope;
  int rounds_used = 0;
  // Messages sent by the loop itself; the seed response is not one of them.
  int calls = 0;
};

// Drives self-reflection from an already obtained seed response, which counts
// as round 1. Each later round sends `reprompt(round)`, or a format-fix prompt
// when the previous reply was malformed, and stops on the first reply whose
// thought contains the termination phrase, on two consecutive malformed
// replies, or at max_rounds. Returns the last valid envelope.
LoopResult run_reflection_loop(const std::string& seed_response, const ReflectionPolicy& policy,
                               const std::function<std::string(int round)>& reprompt,
                               const AskFn& ask, const Validator& validator = {});

}  // namespace scientist::protocol
