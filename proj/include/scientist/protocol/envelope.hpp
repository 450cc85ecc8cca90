#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "scientist/util/error.hpp"

namespace scientist::protocol {

inline constexpr std::string_view kThoughtMarker = "THOUGHT:";
inline constexpr std::string_view kJsonFence = "json";

// Byte range into the parsed text, used when re-prompting about a bad answer.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class ProtocolError : public Error {
public:
  enum class Kind { no_fence, unterminated_fence, malformed_payload, schema };

  ProtocolError(Kind kind, const std::string& what, Span span = {})
      : Error(what), kind_(kind), span_(span) {}
  Kind kind() const { return kind_; }
  Span span() const { return span_; }

private:
  Kind kind_;
  Span span_;
};

// Payload of the last fence opened with ```<fence_label>. The payload must be
// a single JSON object.
nlohmann::json extract_fenced_payload(std::string_view text,
                                      std::string_view fence_label = kJsonFence);

struct Envelope {
  std::string thought;
  nlohmann::json payload;
  std::string raw;

  bool operator==(const Envelope&) const = default;
};

// THOUGHT: <free text> [HEADER:] ```json {...} ```
// The thought runs from the marker to the payload fence, minus an all-caps
// header line such as "NEW IDEA JSON:". A missing marker yields everything
// before the fence as the thought.
Envelope parse_envelope(std::string_view text, std::string_view fence_label = kJsonFence);

}  // namespace scientist::protocol
