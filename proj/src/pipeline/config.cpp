#include "scientist/pipeline/config.hpp"

#include <set>

#include <yaml-cpp/yaml.h>

#include "scientist/util/fs.hpp"

#ifndef SCIENTIST_DATA_DIR
#define SCIENTIST_DATA_DIR "data"
#endif

namespace scientist::pipeline {

namespace fs = std::filesystem;

fs::path default_data_dir() {
  if (const char* env = std::getenv("SCIENTIST_DATA_DIR"); env && *env) return env;
  return SCIENTIST_DATA_DIR;
}

namespace {

nlohmann::json node_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      auto arr = nlohmann::json::array();
      for (const auto& item : node) arr.push_back(node_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      auto obj = nlohmann::json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = node_to_json(kv.second);
      return obj;
    }
    case YAML::NodeType::Scalar:
      break;
  }
  const auto& s = node.Scalar();
  if (node.Tag() == "!") return s;  // quoted
  try {
    std::size_t used = 0;
    long long i = std::stoll(s, &used);
    if (used == s.size()) return i;
  } catch (...) {
  }
  try {
    std::size_t used = 0;
    double d = std::stod(s, &used);
    if (used == s.size()) return d;
  } catch (...) {
  }
  if (s == "true" || s == "True") return true;
  if (s == "false" || s == "False") return false;
  if (s == "~" || s == "null") return nullptr;
  return s;
}

// Reads keys out of one JSON object and rejects any it did not consume.
class Section {
public:
  Section(const nlohmann::json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_null() && !j_.is_object()) throw ConfigError(where_ + " must be a mapping");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0 || j_.is_null()) return;
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) throw ConfigError("unknown key " + where_ + k);
    }
  }

  template <typename T>
  void read(const char* key, T& out) {
    used_.insert(key);
    if (j_.is_null() || !j_.contains(key) || j_.at(key).is_null()) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(where_ + key + " has the wrong type");
    }
  }

  void read_path(const char* key, fs::path& out, const fs::path& base) {
    std::string s;
    read(key, s);
    if (!s.empty()) out = fs::path(s).is_absolute() || base.empty() ? fs::path(s) : base / s;
  }

  const nlohmann::json& child(const char* key) {
    used_.insert(key);
    static const nlohmann::json kNull;
    if (j_.is_null() || !j_.contains(key)) return kNull;
    return j_.at(key);
  }

  std::string where(const char* key) const { return where_ + key + "."; }

private:
  const nlohmann::json& j_;
  std::string where_;
  std::set<std::string> used_;
};

}  // namespace

nlohmann::json yaml_to_json(const std::string& yaml_text) {
  try {
    return node_to_json(YAML::Load(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
}

RunConfig config_from_json(const nlohmann::json& j, const fs::path& base) {
  RunConfig c;
  c.data_dir = default_data_dir();
  {
    Section top(j, "");
    top.read_path("template", c.template_dir, base);
    top.read_path("output_dir", c.output_dir, base);
    top.read("idea_count", c.idea_count);
    top.read("parallelism", c.parallelism);
    top.read("max_processes", c.max_processes);
    top.read("temperature", c.temperature);
    top.read("max_output_tokens", c.max_output_tokens);
    top.read_path("data_dir", c.data_dir, base);
    top.read("stop_after_stage", c.stop_after_stage);
    {
      Section m(top.child("models"), top.where("models"));
      m.read("ideation", c.models.ideation);
      m.read("coder", c.models.coder);
      m.read("writeup", c.models.writeup);
      m.read("review", c.models.review);
    }
    {
      Section s(top.child("ideation"), top.where("ideation"));
      s.read("reflections", c.idea_reflections);
      s.read("novelty_rounds", c.novelty_rounds);
    }
    {
      Section s(top.child("experiments"), top.where("experiments"));
      int timeout = static_cast<int>(c.lab.timeout.count());
      int plot_timeout = static_cast<int>(c.lab.plot_timeout.count());
      long grace = static_cast<long>(c.lab.grace.count());
      s.read("max_runs", c.lab.max_runs);
      s.read("max_attempts", c.lab.max_attempts);
      s.read("timeout_s", timeout);
      s.read("plot_timeout_s", plot_timeout);
      s.read("plot_attempts", c.lab.plot_attempts);
      s.read("grace_ms", grace);
      s.read("out_dir_quota_bytes", c.lab.out_dir_quota);
      s.read("isolate_network", c.lab.isolate_network);
      s.read("env_allowlist", c.lab.env_allowlist);
      c.lab.timeout = std::chrono::seconds(timeout);
      c.lab.plot_timeout = std::chrono::seconds(plot_timeout);
      c.lab.grace = std::chrono::milliseconds(grace);
    }
    {
      Section s(top.child("writeup"), top.where("writeup"));
      int timeout = static_cast<int>(c.compile.timeout.count());
      s.read("citation_rounds", c.citation_rounds);
      s.read("latex_repair_rounds", c.compile.repair_rounds);
      s.read("lint_command", c.compile.lint_command);
      s.read("compile_commands", c.compile.compile_commands);
      s.read("compile_timeout_s", timeout);
      s.read("excerpt_lines", c.compile.excerpt_lines);
      c.compile.timeout = std::chrono::seconds(timeout);
    }
    {
      Section s(top.child("reviewer"), top.where("reviewer"));
      s.read("reflections", c.reviewer.reflections);
      s.read("fewshot_examples", c.reviewer.fewshot_examples);
      s.read("ensemble_size", c.reviewer.ensemble_size);
      s.read("temperature", c.reviewer.temperature);
      s.read("decision_threshold", c.reviewer.decision_threshold);
      s.read("quorum", c.reviewer.quorum);
      s.read("concurrent", c.reviewer.concurrent);
    }
    {
      Section s(top.child("backend"), top.where("backend"));
      s.read("kind", c.backend.kind);
      s.read("base_url", c.backend.base_url);
      s.read("api_key_env", c.backend.api_key_env);
      s.read_path("replay_path", c.backend.replay_path, base);
      s.read("max_attempts", c.backend.max_attempts);
    }
    {
      Section s(top.child("literature"), top.where("literature"));
      s.read("kind", c.literature.kind);
      s.read("api_key_env", c.literature.api_key_env);
      s.read_path("fixture_dir", c.literature.fixture_dir, base);
      s.read_path("record_dir", c.literature.record_dir, base);
      s.read("requests_per_second", c.literature.requests_per_second);
    }
    const auto& prices = top.child("prices");
    if (!prices.is_null()) {
      if (!prices.is_object()) throw ConfigError("prices must be a mapping");
      for (const auto& [model, p] : prices.items()) {
        llm::ModelPrice price;
        Section s(p, "prices." + model + ".");
        s.read("input_per_million", price.input_per_million);
        s.read("output_per_million", price.output_per_million);
        c.prices.set(model, price);
      }
    }
  }
  c.reviewer.model_id = c.models.review;
  c.reviewer.max_output_tokens = c.max_output_tokens;
  return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json prices = nlohmann::json::object();
  for (const auto& [model, p] : c.prices.entries()) {
    prices[model] = {{"input_per_million", p.input_per_million}, {"output_per_million", p.output_per_million}};
  }
  return {
      {"template", c.template_dir.string()},
      {"idea_count", c.idea_count},
      {"parallelism", c.parallelism},
      {"max_processes", c.max_processes},
      {"temperature", c.temperature},
      {"max_output_tokens", c.max_output_tokens},
      {"data_dir", c.data_dir.string()},
      {"models", {{"ideation", c.models.ideation}, {"coder", c.models.coder}, {"writeup", c.models.writeup}, {"review", c.models.review}}},
      {"ideation", {{"reflections", c.idea_reflections}, {"novelty_rounds", c.novelty_rounds}}},
      {"experiments",
       {{"max_runs", c.lab.max_runs},
        {"max_attempts", c.lab.max_attempts},
        {"timeout_s", c.lab.timeout.count()},
        {"plot_timeout_s", c.lab.plot_timeout.count()},
        {"plot_attempts", c.lab.plot_attempts},
        {"grace_ms", c.lab.grace.count()},
        {"out_dir_quota_bytes", c.lab.out_dir_quota},
        {"isolate_network", c.lab.isolate_network},
        {"env_allowlist", c.lab.env_allowlist}}},
      {"writeup",
       {{"citation_rounds", c.citation_rounds},
        {"latex_repair_rounds", c.compile.repair_rounds},
        {"lint_command", c.compile.lint_command},
        {"compile_commands", c.compile.compile_commands},
        {"compile_timeout_s", c.compile.timeout.count()},
        {"excerpt_lines", c.compile.excerpt_lines}}},
      {"reviewer",
       {{"reflections", c.reviewer.reflections},
        {"fewshot_examples", c.reviewer.fewshot_examples},
        {"ensemble_size", c.reviewer.ensemble_size},
        {"temperature", c.reviewer.temperature},
        {"decision_threshold", c.reviewer.decision_threshold},
        {"quorum", c.reviewer.quorum},
        {"concurrent", c.reviewer.concurrent}}},
      {"backend",
       {{"kind", c.backend.kind},
        {"base_url", c.backend.base_url},
        {"api_key_env", c.backend.api_key_env},
        {"replay_path", c.backend.replay_path.string()},
        {"max_attempts", c.backend.max_attempts}}},
      {"literature",
       {{"kind", c.literature.kind},
        {"api_key_env", c.literature.api_key_env},
        {"fixture_dir", c.literature.fixture_dir.string()},
        {"record_dir", c.literature.record_dir.string()},
        {"requests_per_second", c.literature.requests_per_second}}},
      {"prices", prices},
  };
}

RunConfig load_config(const fs::path& path) {
  std::string text;
  try {
    text = fsx::read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  auto config = config_from_json(yaml_to_json(text), fs::absolute(path).parent_path());
  validate(config);
  return config;
}

void validate(const RunConfig& c) {
  if (c.idea_count < 1) throw ConfigError("idea_count must be at least 1");
  if (c.parallelism < 1) throw ConfigError("parallelism must be at least 1");
  if (c.max_processes < 1) throw ConfigError("max_processes must be at least 1");
  if (c.template_dir.empty()) throw ConfigError("template is required");
  if (c.idea_reflections < 1) throw ConfigError("ideation.reflections must be at least 1");
  if (c.novelty_rounds < 1) throw ConfigError("ideation.novelty_rounds must be at least 1");
  if (c.lab.max_runs < 1 || c.lab.max_attempts < 1) throw ConfigError("experiments need at least one run and attempt");
  if (c.lab.plot_attempts < 1) throw ConfigError("experiments.plot_attempts must be at least 1");
  if (c.citation_rounds < 0) throw ConfigError("writeup.citation_rounds must not be negative");
  if (c.compile.repair_rounds < 0) throw ConfigError("writeup.latex_repair_rounds must not be negative");
  if (c.compile.compile_commands.empty()) throw ConfigError("writeup.compile_commands must not be empty");
  if (c.temperature < 0 || c.temperature > 2) throw ConfigError("temperature must lie in [0, 2]");
  review::validate(c.reviewer);
  if (c.backend.kind != "http" && c.backend.kind != "replay") throw ConfigError("backend.kind must be http or replay");
  if (c.backend.kind == "replay" && c.backend.replay_path.empty()) throw ConfigError("backend.replay_path is required for replay");
  if (c.literature.kind != "semantic_scholar" && c.literature.kind != "fixture") {
    throw ConfigError("literature.kind must be semantic_scholar or fixture");
  }
  if (c.literature.kind == "fixture" && c.literature.fixture_dir.empty()) {
    throw ConfigError("literature.fixture_dir is required for fixture search");
  }
  static const std::set<std::string> kStages = {"", "ideation", "novelty", "experiments", "plotting", "writeup", "review"};
  if (!kStages.count(c.stop_after_stage)) throw ConfigError("unknown stop_after_stage " + c.stop_after_stage);
}

}  // namespace scientist::pipeline
