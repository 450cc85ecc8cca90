#include "scientist/llm/chat.hpp"

#include "scientist/util/hash.hpp"

namespace scientist::llm {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

Role role_from_string(std::string_view name) {
  if (name == "system") return Role::system;
  if (name == "user") return Role::user;
  if (name == "assistant") return Role::assistant;
  throw RequestError("unknown role: " + std::string(name));
}

void validate(const CompletionRequest& request) {
  if (request.turns.empty()) throw RequestError("no turns");
  if (request.temperature < 0.0 || request.temperature > 2.0) {
    throw RequestError("temperature out of range [0,2]");
  }
  if (request.max_output_tokens <= 0) throw RequestError("max_output_tokens must be positive");
  for (std::size_t i = 0; i < request.turns.size(); ++i) {
    const auto& turn = request.turns[i];
    if (turn.role == Role::system && i != 0) {
      throw RequestError("system turn must be first and unique");
    }
    if (turn.role != Role::system && turn.content.empty()) {
      throw RequestError("empty " + std::string(to_string(turn.role)) + " turn");
    }
  }
  if (request.turns.back().role != Role::user) {
    throw RequestError("conversation must end with a user turn");
  }
}

nlohmann::json to_json(const CompletionRequest& request) {
  nlohmann::json turns = nlohmann::json::array();
  for (const auto& t : request.turns) {
    turns.push_back({{"role", to_string(t.role)}, {"content", t.content}});
  }
  return {{"model_id", request.model_id},
          {"temperature", request.temperature},
          {"sample_index", request.sample_index},
          {"turns", std::move(turns)}};
}

std::string request_digest(const CompletionRequest& request) {
  // nlohmann::json orders object keys, so dump() is canonical.
  return sha256_hex(to_json(request).dump());
}

}  // namespace scientist::llm
