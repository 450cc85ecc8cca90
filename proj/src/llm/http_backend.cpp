#include <httplib.h>

#include "scientist/llm/backend.hpp"

namespace scientist::llm {

HttpChatBackend::HttpChatBackend(HttpBackendOptions options) : options_(std::move(options)) {
  const auto& url = options_.base_url;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw RequestError("endpoint must include a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

nlohmann::json HttpChatBackend::build_body(const CompletionRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& t : request.turns) {
    messages.push_back({{"role", to_string(t.role)}, {"content", t.content}});
  }
  return {{"model", request.model_id},
          {"messages", std::move(messages)},
          {"temperature", request.temperature},
          {"max_tokens", request.max_output_tokens},
          {"n", 1}};
}

Completion HttpChatBackend::parse_body(const std::string& body) {
  auto json = nlohmann::json::parse(body, nullptr, false);
  if (json.is_discarded()) throw TransportError("unparseable completion body");
  const auto& choices = json.value("choices", nlohmann::json::array());
  if (choices.empty()) throw TransportError("completion body has no choices");
  Completion c;
  const auto& content = choices[0]["message"]["content"];
  c.text = content.is_string() ? content.get<std::string>() : std::string{};
  if (json.contains("usage")) {
    c.prompt_tokens = json["usage"].value("prompt_tokens", std::uint64_t{0});
    c.completion_tokens = json["usage"].value("completion_tokens", std::uint64_t{0});
  }
  return c;
}

Completion HttpChatBackend::complete(const CompletionRequest& request) {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(std::chrono::milliseconds(
      static_cast<long>(options_.connect_timeout_s * 1000)));
  client.set_read_timeout(std::chrono::milliseconds(
      static_cast<long>(options_.read_timeout_s * 1000)));
  httplib::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);

  auto res = client.Post(path_prefix_ + "/chat/completions", headers,
                         build_body(request).dump(), "application/json");
  if (!res) throw TransportError("transport failure: " + httplib::to_string(res.error()));
  if (res->status == 429) {
    double retry_after = 0;
    if (res->has_header("Retry-After")) {
      try {
        retry_after = std::stod(res->get_header_value("Retry-After"));
      } catch (...) {
      }
    }
    throw RateLimitError("rate limited (429)", retry_after);
  }
  if (res->status >= 500) throw TransportError("server error " + std::to_string(res->status));
  if (res->status != 200) {
    throw RequestError("completion request rejected (" + std::to_string(res->status) +
                       "): " + res->body.substr(0, 500));
  }
  return parse_body(res->body);
}

}  // namespace scientist::llm
