#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scientist/llm/gateway.hpp"
#include "scientist/protocol/envelope.hpp"

namespace scientist::review {

enum class Decision { accept, reject };
std::string to_string(Decision d);
// Accepts "Accept"/"Reject" in any case.
Decision decision_from_string(const std::string& s);

struct Review {
  std::string summary;
  std::vector<std::string> strengths;
  std::vector<std::string> weaknesses;
  std::vector<std::string> questions;
  int soundness = 1;
  int presentation = 1;
  int contribution = 1;
  int overall = 1;
  int confidence = 1;
  Decision preliminary_decision = Decision::reject;  // what the model said
  Decision decision = Decision::reject;              // after calibration

  bool operator==(const Review&) const = default;
};

// Strict conversion from the model's JSON (capitalized keys). Throws
// ProtocolError(schema) on missing fields, wrong types or out-of-range scores.
Review review_from_payload(const nlohmann::json& payload);
// The model-facing form, as shown to the Area Chair.
nlohmann::ordered_json to_payload(const Review& review);

// review.json record: lowercase field names.
nlohmann::ordered_json to_record(const Review& review);
Review review_from_record(const nlohmann::json& j);

struct ReviewerConfig {
  int reflections = 5;
  int fewshot_examples = 1;
  int ensemble_size = 5;
  double temperature = 0.1;
  int decision_threshold = 6;
  // Valid member reviews needed for a meta-review; 0 means all of them.
  int quorum = 0;
  std::string model_id = "gpt-4o-2024-05-13";
  int max_output_tokens = 4096;
  bool concurrent = false;
};

// Throws ConfigError.
void validate(const ReviewerConfig& config);

struct ReviewerResources {
  std::string guidelines;
  std::vector<std::string> fewshot;  // rendered paper/review exemplars
};

// review_form.md and fewshot_example*.json from `dir`.
ReviewerResources load_reviewer_resources(const std::filesystem::path& dir);
std::string render_fewshot(const ReviewerResources& res, int count);

class ReviewFailed : public Error {
public:
  using Error::Error;
};

class SpanViolation : public ReviewFailed {
public:
  using ReviewFailed::ReviewFailed;
};

struct ReviewStats {
  int calls = 0;
  int reflection_calls = 0;
  int valid_members = 0;
};

// One reviewer: initial review plus up to config.reflections reflection calls.
// The result carries the calibrated decision.
Review review_once(llm::Gateway& gateway, const std::string& paper_text, const ReviewerConfig& config,
                   const ReviewerResources& resources, int sample_index = 0,
                   llm::TranscriptWriter* transcript = nullptr, ReviewStats* stats = nullptr);

// Throws SpanViolation when a score of `meta` falls outside the members' range.
void check_span(const Review& meta, const std::vector<Review>& members);

std::string render_meta_prompt(const std::vector<Review>& members, const ReviewerResources& resources);

// config.ensemble_size independent reviews, then one Area-Chair call whose
// answer must stay within the members' score spans. A single member is
// returned as is.
Review review_ensemble(llm::Gateway& gateway, const std::string& paper_text, const ReviewerConfig& config,
                       const ReviewerResources& resources, llm::TranscriptWriter* transcript = nullptr,
                       ReviewStats* stats = nullptr);

Decision calibrate_decision(const Review& review, int threshold);

}  // namespace scientist::review
