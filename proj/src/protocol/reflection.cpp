#include "scientist/protocol/reflection.hpp"

#include <optional>

namespace scientist::protocol {

namespace {

Envelope parse_and_validate(const std::string& response, const Validator& validator) {
  auto env = parse_envelope(response);
  if (validator) validator(env);
  return env;
}

}  // namespace

std::string format_fix_prompt(const ProtocolError& error) {
  return std::string("Your last response could not be parsed: ") + error.what() +
         ".\nRespond again in exactly the requested format, with THOUGHT: followed by "
         "a single ```json fenced block.\nThis JSON will be automatically parsed, so "
         "ensure the format is precise.";
}

Envelope parse_with_retry(const std::string& response, const AskFn& ask,
                          const Validator& validator, int* calls) {
  try {
    return parse_and_validate(response, validator);
  } catch (const ProtocolError& first) {
    if (calls) ++*calls;
    auto retry = ask(format_fix_prompt(first));
    return parse_and_validate(retry, validator);
  }
}

LoopResult run_reflection_loop(const std::string& seed_response, const ReflectionPolicy& policy,
                               const std::function<std::string(int)>& reprompt, const AskFn& ask,
                               const Validator& validator) {
  if (policy.max_rounds < 1) throw Error("reflection policy needs max_rounds >= 1");

  std::optional<Envelope> last_valid;
  std::optional<ProtocolError> last_error;
  int consecutive_failures = 0;
  int round = 1;
  int calls = 0;
  std::string current = seed_response;

  while (true) {
    try {
      auto env = parse_and_validate(current, validator);
      consecutive_failures = 0;
      last_error.reset();
      bool done = round > 1 && env.thought.find(policy.termination_phrase) != std::string::npos;
      last_valid = std::move(env);
      if (done) break;
    } catch (const ProtocolError& e) {
      last_error = e;
      if (++consecutive_failures >= 2) break;
    }
    if (round >= policy.max_rounds) break;
    ++round;
    ++calls;
    current = ask(last_error ? format_fix_prompt(*last_error) : reprompt(round));
  }

  if (!last_valid) throw *last_error;
  return {std::move(*last_valid), round, calls};
}

}  // namespace scientist::protocol
