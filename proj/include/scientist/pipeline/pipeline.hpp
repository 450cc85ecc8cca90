#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scientist/literature/search.hpp"
#include "scientist/llm/backend.hpp"
#include "scientist/pipeline/config.hpp"

namespace scientist::pipeline {

inline constexpr std::string_view kManifestFile = "run_manifest.json";
inline constexpr std::string_view kIdeasFile = "ideas.json";
inline constexpr std::string_view kStateFile = "state.json";
inline constexpr std::string_view kSummaryFile = "summary.json";

// Per-idea stages, in order. "done" and "failed" are terminal.
const std::vector<std::string>& idea_stages();

struct IdeaState {
  int index = 0;
  std::string name;
  std::string stage = "experiments";  // next stage to run, or done/failed
  std::string failed_stage;
  std::string failure;
  bool experiments_passed = false;
  bool compiled = false;
  std::optional<int> score;  // overall score of the paper's review

  bool terminal() const { return stage == "done" || stage == "failed"; }
  bool completed() const { return stage == "done" && compiled; }
};

nlohmann::json to_json(const IdeaState& s);
IdeaState idea_state_from_json(const nlohmann::json& j);

struct RunSummary {
  int total_ideas = 0;
  int novel_ideas = 0;
  int experiments_passed = 0;
  int completed_papers = 0;
  std::optional<double> mean_score;
  std::optional<double> max_score;
  double total_cost = 0.0;

  bool operator==(const RunSummary&) const = default;
};

nlohmann::json to_json(const RunSummary& s);
RunSummary summary_from_json(const nlohmann::json& j);

enum class SummaryFormat { text, csv };
inline constexpr std::string_view kEmptySentinel = "-";
// Columns: Total Ideas, Novel Ideas, Experiments Passed, Completed Papers,
// Mean Score, Max Score, Total Cost.
std::string emit_summary(const RunSummary& summary, SummaryFormat format);

// Recounts the summary from ideas.json and the per-idea state files.
RunSummary summarize_tree(const std::filesystem::path& output_dir);

// Backends are injectable; missing ones are built from the config.
struct Dependencies {
  std::shared_ptr<llm::Backend> backend;
  std::shared_ptr<literature::LiteratureClient> literature;
  // Overrides the gateway's sleep between retries.
  std::function<void(std::chrono::milliseconds)> sleep;
};

Dependencies make_dependencies(const RunConfig& config);

class RunAborted : public Error {
public:
  using Error::Error;
};

struct RunOutcome {
  RunSummary summary;
  bool interrupted = false;  // stop_after_stage fired
};

// Fresh run into config.output_dir, which must be empty or absent.
RunOutcome run_pipeline(const RunConfig& config, Dependencies deps = {});

// Continues a run from its manifest: finished ideas are left alone, others
// restart at their recorded stage. A run that is already complete is a no-op.
// Settings come from the manifest; `deps` and the stop hook are taken from the caller.
RunOutcome resume_run(const std::filesystem::path& output_dir, Dependencies deps = {},
                      const std::string& stop_after_stage = {});

// Per-idea directory name: <index>_<name>.
std::string idea_dir_name(int index, const std::string& name);

}  // namespace scientist::pipeline
