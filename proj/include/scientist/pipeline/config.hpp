#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "scientist/lab/experiment.hpp"
#include "scientist/llm/ledger.hpp"
#include "scientist/review/reviewer.hpp"
#include "scientist/writeup/writer.hpp"

namespace scientist::pipeline {

struct StageModels {
  std::string ideation = "gpt-4o-2024-05-13";
  std::string coder = "gpt-4o-2024-05-13";
  std::string writeup = "gpt-4o-2024-05-13";
  std::string review = "gpt-4o-2024-05-13";
};

struct BackendConfig {
  std::string kind = "http";  // http | replay
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key_env = "OPENAI_API_KEY";
  std::filesystem::path replay_path;
  int max_attempts = 5;
};

struct LiteratureConfig {
  std::string kind = "semantic_scholar";  // semantic_scholar | fixture
  std::string api_key_env = "S2_API_KEY";
  std::filesystem::path fixture_dir;
  std::filesystem::path record_dir;
  double requests_per_second = 1.0;
};

struct RunConfig {
  std::filesystem::path template_dir;
  std::filesystem::path output_dir;
  int idea_count = 50;
  int parallelism = 1;
  int max_processes = 4;

  StageModels models;
  double temperature = 0.75;
  int max_output_tokens = 4096;

  int idea_reflections = 3;
  int novelty_rounds = 10;

  lab::LabSettings lab;

  int citation_rounds = 20;
  writeup::CompileSettings compile;

  review::ReviewerConfig reviewer;

  std::filesystem::path data_dir;  // review form, few-shot examples, section tips
  BackendConfig backend;
  LiteratureConfig literature;
  llm::PriceTable prices;

  // Testing hook: stop the run right after this stage has been committed.
  std::string stop_after_stage;
};

// Defaults come from the constructor; every key is optional. Relative paths
// resolve against `base_dir`. Throws ConfigError.
RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json config_to_json(const RunConfig& config);

// YAML (or JSON, which is YAML) file.
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json yaml_to_json(const std::string& yaml_text);

void validate(const RunConfig& config);

std::filesystem::path default_data_dir();

}  // namespace scientist::pipeline
