#include "scientist/review/reviewer.hpp"

#include <algorithm>
#include <future>

#include "scientist/prompts.hpp"
#include "scientist/protocol/reflection.hpp"
#include "scientist/util/fs.hpp"
#include "scientist/util/text.hpp"

namespace scientist::review {

namespace fs = std::filesystem;
using protocol::ProtocolError;

std::string to_string(Decision d) { return d == Decision::accept ? "Accept" : "Reject"; }

Decision decision_from_string(const std::string& s) {
  auto lower = text::to_lower(text::trim(s));
  if (lower == "accept") return Decision::accept;
  if (lower == "reject") return Decision::reject;
  throw ProtocolError(ProtocolError::Kind::schema, "\"Decision\" must be Accept or Reject, got \"" + s + "\"");
}

namespace {

[[noreturn]] void schema(const std::string& what) { throw ProtocolError(ProtocolError::Kind::schema, what); }

int score(const nlohmann::json& p, const char* key, int lo, int hi) {
  auto it = p.find(key);
  if (it == p.end()) schema(std::string("missing \"") + key + "\"");
  double v;
  if (it->is_number()) {
    v = it->get<double>();
  } else {
    schema(std::string("\"") + key + "\" must be a number");
  }
  if (v != static_cast<int>(v)) schema(std::string("\"") + key + "\" must be an integer");
  if (v < lo || v > hi) {
    schema(std::string("\"") + key + "\" must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) +
           "], got " + std::to_string(static_cast<int>(v)));
  }
  return static_cast<int>(v);
}

std::vector<std::string> text_list(const nlohmann::json& p, const char* key, bool required) {
  auto it = p.find(key);
  if (it == p.end()) {
    if (required) schema(std::string("missing \"") + key + "\"");
    return {};
  }
  std::vector<std::string> out;
  if (it->is_string()) {
    if (!text::trim(it->get<std::string>()).empty()) out.push_back(it->get<std::string>());
  } else if (it->is_array()) {
    for (const auto& x : *it) {
      if (!x.is_string()) schema(std::string("\"") + key + "\" must be a list of strings");
      if (!text::trim(x.get<std::string>()).empty()) out.push_back(x.get<std::string>());
    }
  } else {
    schema(std::string("\"") + key + "\" must be a list of strings");
  }
  if (required && out.empty()) schema(std::string("\"") + key + "\" must not be empty");
  return out;
}

}  // namespace

Review review_from_payload(const nlohmann::json& p) {
  if (!p.is_object()) schema("review must be a JSON object");
  Review r;
  auto s = p.find("Summary");
  if (s != p.end()) {
    if (!s->is_string()) schema("\"Summary\" must be a string");
    r.summary = s->get<std::string>();
  }
  r.strengths = text_list(p, "Strengths", true);
  r.weaknesses = text_list(p, "Weaknesses", true);
  r.questions = text_list(p, "Questions", false);
  r.soundness = score(p, "Soundness", 1, 4);
  r.presentation = score(p, "Presentation", 1, 4);
  r.contribution = score(p, "Contribution", 1, 4);
  r.overall = score(p, "Overall", 1, 10);
  r.confidence = score(p, "Confidence", 1, 5);
  auto d = p.find("Decision");
  if (d == p.end() || !d->is_string()) schema("\"Decision\" must be Accept or Reject");
  r.preliminary_decision = decision_from_string(d->get<std::string>());
  r.decision = r.preliminary_decision;
  return r;
}

nlohmann::ordered_json to_payload(const Review& r) {
  return {{"Summary", r.summary},
          {"Strengths", r.strengths},
          {"Weaknesses", r.weaknesses},
          {"Questions", r.questions},
          {"Soundness", r.soundness},
          {"Presentation", r.presentation},
          {"Contribution", r.contribution},
          {"Overall", r.overall},
          {"Confidence", r.confidence},
          {"Decision", to_string(r.preliminary_decision)}};
}

nlohmann::ordered_json to_record(const Review& r) {
  return {{"soundness", r.soundness},
          {"presentation", r.presentation},
          {"contribution", r.contribution},
          {"overall", r.overall},
          {"confidence", r.confidence},
          {"strengths", r.strengths},
          {"weaknesses", r.weaknesses},
          {"questions", r.questions},
          {"decision", to_string(r.decision)},
          {"preliminary_decision", to_string(r.preliminary_decision)},
          {"summary", r.summary}};
}

Review review_from_record(const nlohmann::json& j) {
  Review r;
  r.soundness = j.at("soundness").get<int>();
  r.presentation = j.at("presentation").get<int>();
  r.contribution = j.at("contribution").get<int>();
  r.overall = j.at("overall").get<int>();
  r.confidence = j.at("confidence").get<int>();
  r.strengths = j.at("strengths").get<std::vector<std::string>>();
  r.weaknesses = j.at("weaknesses").get<std::vector<std::string>>();
  r.questions = j.value("questions", std::vector<std::string>{});
  r.decision = decision_from_string(j.at("decision").get<std::string>());
  r.preliminary_decision = decision_from_string(j.value("preliminary_decision", j.at("decision").get<std::string>()));
  r.summary = j.value("summary", "");
  return r;
}

void validate(const ReviewerConfig& c) {
  if (c.ensemble_size < 1) throw ConfigError("ensemble_size must be at least 1");
  if (c.decision_threshold < 1 || c.decision_threshold > 10) throw ConfigError("decision_threshold must lie in [1, 10]");
  if (c.reflections < 0) throw ConfigError("reflections must not be negative");
  if (c.fewshot_examples < 0) throw ConfigError("fewshot_examples must not be negative");
  if (c.quorum < 0 || c.quorum > c.ensemble_size) throw ConfigError("quorum must lie in [0, ensemble_size]");
  if (c.temperature < 0 || c.temperature > 2) throw ConfigError("temperature must lie in [0, 2]");
}

ReviewerResources load_reviewer_resources(const fs::path& dir) {
  ReviewerResources res;
  res.guidelines = fsx::read_file(dir / "review_form.md");
  std::vector<fs::path> shots;
  for (const auto& e : fs::directory_iterator(dir)) {
    auto name = e.path().filename().string();
    if (text::starts_with(name, "fewshot_example") && e.path().extension() == ".json") shots.push_back(e.path());
  }
  std::sort(shots.begin(), shots.end());
  for (const auto& p : shots) {
    auto j = nlohmann::json::parse(fsx::read_file(p));
    res.fewshot.push_back("Paper:\n```\n" + j.at("paper").get<std::string>() + "\n```\n\nReview:\n```\n" +
                          j.at("review").dump(2) + "\n```\n");
  }
  return res;
}

std::string render_fewshot(const ReviewerResources& res, int count) {
  count = std::min<int>(count, static_cast<int>(res.fewshot.size()));
  if (count <= 0) return {};
  std::string out =
      "Below are some sample reviews, copied from previous machine learning conferences.\n"
      "Note that while each review is formatted differently according to each reviewer's style, "
      "the reviews are well-structured and therefore easy to navigate.\n\n";
  for (int i = 0; i < count; ++i) out += res.fewshot[i] + "\n";
  return out;
}

Decision calibrate_decision(const Review& review, int threshold) {
  return review.overall >= threshold ? Decision::accept : Decision::reject;
}

namespace {

llm::ModelSettings model_settings(const ReviewerConfig& c) {
  return {c.model_id, c.temperature, c.max_output_tokens};
}

void review_validator(const protocol::Envelope& env) { review_from_payload(env.payload); }

}  // namespace

Review review_once(llm::Gateway& gateway, const std::string& paper_text, const ReviewerConfig& config,
                   const ReviewerResources& resources, int sample_index, llm::TranscriptWriter* transcript,
                   ReviewStats* stats) {
  if (text::trim(paper_text).empty()) throw ReviewFailed("paper text is empty");
  llm::Conversation chat(gateway, model_settings(config), std::string(prompts::kReviewSystem), transcript);
  chat.set_sample_index(sample_index);
  protocol::AskFn ask = [&](const std::string& m) { return chat.ask(m); };

  auto prompt = text::fill(prompts::kReviewPrompt,
                           {{"neurips_reviewer_guidelines", resources.guidelines},
                            {"few_show_examples", render_fewshot(resources, config.fewshot_examples)},
                            {"paper", paper_text}});
  auto seed = ask(prompt);
  protocol::ReflectionPolicy policy{config.reflections + 1, std::string(protocol::kDefaultTerminationPhrase)};
  auto reprompt = [&](int round) {
    return text::fill(prompts::kReviewReflection,
                      {{"current_round", std::to_string(round)}, {"num_reflections", std::to_string(policy.max_rounds)}});
  };
  protocol::LoopResult result;
  try {
    result = protocol::run_reflection_loop(seed, policy, reprompt, ask, review_validator);
  } catch (const ProtocolError& e) {
    if (stats) stats->calls += chat.calls();
    throw ReviewFailed(std::string("review failed: ") + e.what());
  }
  if (stats) {
    stats->calls += chat.calls();
    stats->reflection_calls += result.calls;
  }
  auto review = review_from_payload(result.envelope.payload);
  review.decision = calibrate_decision(review, config.decision_threshold);
  return review;
}

void check_span(const Review& meta, const std::vector<Review>& members) {
  if (members.empty()) throw SpanViolation("no member reviews to compare against");
  auto check = [&](const char* name, auto field) {
    auto [lo, hi] = std::minmax_element(members.begin(), members.end(),
                                        [&](const Review& a, const Review& b) { return a.*field < b.*field; });
    int v = meta.*field;
    if (v < (*lo).*field || v > (*hi).*field) {
      throw SpanViolation(std::string("meta-review ") + name + " " + std::to_string(v) + " lies outside the members' span [" +
                          std::to_string((*lo).*field) + ", " + std::to_string((*hi).*field) + "]");
    }
  };
  check("soundness", &Review::soundness);
  check("presentation", &Review::presentation);
  check("contribution", &Review::contribution);
  check("overall", &Review::overall);
  check("confidence", &Review::confidence);
}

std::string render_meta_prompt(const std::vector<Review>& members, const ReviewerResources& resources) {
  std::string out;
  auto n = std::to_string(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    out += "Review " + std::to_string(i + 1) + "/" + n + ":\n```json\n" + to_payload(members[i]).dump(2) + "\n```\n\n";
  }
  out += resources.guidelines;
  return out;
}

Review review_ensemble(llm::Gateway& gateway, const std::string& paper_text, const ReviewerConfig& config,
                       const ReviewerResources& resources, llm::TranscriptWriter* transcript, ReviewStats* stats) {
  validate(config);
  const int n = config.ensemble_size;
  std::vector<std::optional<Review>> members(n);
  std::vector<ReviewStats> member_stats(n);
  std::vector<std::string> errors(n);
  auto member = [&](int i) {
    try {
      members[i] = review_once(gateway, paper_text, config, resources, i, transcript, &member_stats[i]);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  };
  if (config.concurrent && n > 1) {
    std::vector<std::future<void>> jobs;
    for (int i = 0; i < n; ++i) jobs.push_back(std::async(std::launch::async, member, i));
    for (auto& j : jobs) j.get();
  } else {
    for (int i = 0; i < n; ++i) member(i);
  }

  std::vector<Review> valid;
  std::string failures;
  for (int i = 0; i < n; ++i) {
    if (stats) {
      stats->calls += member_stats[i].calls;
      stats->reflection_calls += member_stats[i].reflection_calls;
    }
    if (members[i]) {
      valid.push_back(*members[i]);
    } else {
      failures += "\nreviewer " + std::to_string(i + 1) + ": " + errors[i];
    }
  }
  if (stats) stats->valid_members = static_cast<int>(valid.size());
  int quorum = config.quorum == 0 ? n : config.quorum;
  if (static_cast<int>(valid.size()) < quorum) {
    throw ReviewFailed("only " + std::to_string(valid.size()) + " of " + std::to_string(n) +
                       " reviews are valid, " + std::to_string(quorum) + " needed" + failures);
  }
  if (n == 1) return valid.front();

  auto system = text::fill(prompts::kMetaReviewSystem, {{"reviewer_count", std::to_string(valid.size())}});
  llm::Conversation chat(gateway, model_settings(config), system, transcript);
  auto reply = chat.ask(render_meta_prompt(valid, resources));
  if (stats) ++stats->calls;
  Review meta;
  try {
    meta = review_from_payload(protocol::parse_envelope(reply).payload);
  } catch (const ProtocolError& e) {
    throw ReviewFailed(std::string("meta-review failed: ") + e.what());
  }
  check_span(meta, valid);
  meta.decision = calibrate_decision(meta, config.decision_threshold);
  return meta;
}

}  // namespace scientist::review
