#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scientist/edit/session.hpp"
#include "scientist/ideation/idea.hpp"
#include "scientist/lab/process.hpp"
#include "scientist/lab/template.hpp"

namespace scientist::lab {

inline constexpr std::string_view kResultsFile = "final_info.json";

struct ExperimentRun {
  int run_index = 1;
  int attempt = 1;
  std::vector<std::string> command;
  int exit_status = -1;
  bool timed_out = false;
  double duration_s = 0.0;
  std::string stdout_tail;
  std::string stderr_tail;
  nlohmann::json metrics;  // null unless the run succeeded
  std::string failure;     // empty on success

  bool succeeded() const { return failure.empty(); }
};

nlohmann::json to_json(const ExperimentRun& run);
ExperimentRun run_from_json(const nlohmann::json& j);

// Experimental journal: one entry per successful run, plus what each figure
// shows once plotting is done.
struct LabJournal {
  std::vector<std::pair<int, std::string>> entries;
  std::vector<std::string> figures;
  std::map<std::string, std::string> plot_descriptions;

  // Notes text handed to the write-up stage.
  std::string render() const;
};

nlohmann::json to_json(const LabJournal& journal);
LabJournal journal_from_json(const nlohmann::json& j);

struct LabSettings {
  int max_runs = 5;
  int max_attempts = 4;
  std::chrono::seconds timeout{7200};
  std::chrono::seconds plot_timeout{600};
  std::chrono::milliseconds grace{5000};
  int plot_attempts = 4;
  // Bytes a run directory may hold; 0 disables the check.
  std::uintmax_t out_dir_quota = 2ull << 30;
  bool isolate_network = true;
  std::vector<std::string> env_allowlist = default_env_allowlist();
  std::string completion_phrase = "ALL_COMPLETED";
};

class PreconditionError : public Error {
public:
  using Error::Error;
};

struct ExperimentReport {
  std::vector<ExperimentRun> runs;  // every execution, failed attempts included
  LabJournal journal;
  bool passed = false;
  std::string failure;
  int model_calls = 0;
  int executions = 0;
  std::map<int, int> calls_per_run;
  std::map<int, int> executions_per_run;

  std::vector<ExperimentRun> successful_runs() const;
};

// Plan, edit, execute `command --out_dir=run_i`, feed back errors and results.
// A run that fails max_attempts times ends the loop and fails the idea.
// The session must be bound to the idea's workspace.
ExperimentReport run_experiment_loop(const ideation::Idea& idea, edit::EditSession& session,
                                     const TemplateManifest& manifest,
                                     const std::string& baseline_results,
                                     const LabSettings& settings);

struct PlotReport {
  std::vector<std::string> figures;
  bool degraded = false;
  std::string failure;
  int model_calls = 0;
  int executions = 0;
};

// Has the agent edit the plot script, runs it, and records per-figure notes
// in the journal. Throws PreconditionError without a successful run.
PlotReport run_plotting(edit::EditSession& session, const TemplateManifest& manifest,
                        LabJournal& journal, const std::vector<ExperimentRun>& runs,
                        const LabSettings& settings);

// Image files at the top of the workspace, sorted.
std::vector<std::string> list_figures(const std::filesystem::path& workspace);

// Paragraph of `notes` naming each figure file.
std::map<std::string, std::string> extract_plot_descriptions(const std::string& notes,
                                                             const std::vector<std::string>& figures);

}  // namespace scientist::lab
