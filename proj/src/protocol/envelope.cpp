#include "scientist/protocol/envelope.hpp"

#include <optional>
#include <regex>
#include <vector>

#include "scientist/util/text.hpp"

namespace scientist::protocol {

namespace {

struct Line {
  std::size_t begin;  // offset of first char
  std::size_t end;    // offset one past the newline (or end of text)
  std::string_view content;
};

std::vector<Line> lines_of(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    auto stop = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back({start, nl == std::string_view::npos ? text.size() : nl + 1,
                     text.substr(start, stop - start)});
    start = stop + 1;
  }
  return lines;
}

bool is_open_fence(std::string_view line, std::string_view label) {
  auto t = text::trim(line);
  return text::starts_with(t, "```") && text::to_lower(text::trim(t.substr(3))) == text::to_lower(label) &&
         !label.empty();
}

bool is_close_fence(std::string_view line) { return text::trim(line) == "```"; }

struct Fence {
  Span whole;    // opening line start .. closing line end
  Span payload;  // between the fences
};

// Locates the last fence with the label. nullopt when none opens.
std::optional<Fence> last_fence(std::string_view text, std::string_view label) {
  auto lines = lines_of(text);
  std::optional<Fence> found;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!is_open_fence(lines[i].content, label)) continue;
    std::size_t j = i + 1;
    while (j < lines.size() && !is_close_fence(lines[j].content)) ++j;
    if (j == lines.size()) {
      throw ProtocolError(ProtocolError::Kind::unterminated_fence,
                          "fenced payload is missing its closing fence",
                          {lines[i].begin, text.size()});
    }
    found = Fence{{lines[i].begin, lines[j].end}, {lines[i].end, lines[j].begin}};
    i = j;
  }
  return found;
}

Fence require_fence(std::string_view text, std::string_view label) {
  auto fence = last_fence(text, label);
  if (!fence) {
    throw ProtocolError(ProtocolError::Kind::no_fence, "no fenced payload", {0, text.size()});
  }
  return *fence;
}

nlohmann::json parse_payload(std::string_view text, const Fence& fence) {
  auto body = text.substr(fence.payload.begin, fence.payload.end - fence.payload.begin);
  auto json = nlohmann::json::parse(body.begin(), body.end(), nullptr, false);
  if (json.is_discarded()) {
    throw ProtocolError(ProtocolError::Kind::malformed_payload,
                        "fenced payload is not valid JSON", fence.payload);
  }
  if (!json.is_object()) {
    throw ProtocolError(ProtocolError::Kind::malformed_payload,
                        "fenced payload is not a single JSON object", fence.payload);
  }
  return json;
}

}  // namespace

nlohmann::json extract_fenced_payload(std::string_view text, std::string_view fence_label) {
  return parse_payload(text, require_fence(text, fence_label));
}

Envelope parse_envelope(std::string_view text, std::string_view fence_label) {
  auto fence = require_fence(text, fence_label);
  Envelope env;
  env.payload = parse_payload(text, fence);
  env.raw = std::string(text);

  auto before = text.substr(0, fence.whole.begin);
  auto marker = before.find(kThoughtMarker);
  if (marker != std::string_view::npos) before.remove_prefix(marker + kThoughtMarker.size());

  auto lines = text::split_lines(before);
  static const std::regex header(R"(^[A-Z][A-Z0-9 /_-]*:\s*$)");
  while (!lines.empty() && text::trim(lines.back()).empty()) lines.pop_back();
  if (!lines.empty() && std::regex_match(text::trim(lines.back()), header)) lines.pop_back();
  env.thought = text::trim(text::join(lines, "\n"));
  return env;
}

}  // namespace scientist::protocol
