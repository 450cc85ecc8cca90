#include "scientist/lab/experiment.hpp"

#include <algorithm>
#include <set>

#include "scientist/prompts.hpp"
#include "scientist/util/fs.hpp"
#include "scientist/util/text.hpp"

namespace scientist::lab {

namespace fs = std::filesystem;

nlohmann::json to_json(const ExperimentRun& run) {
  return {{"run_index", run.run_index}, {"attempt", run.attempt},     {"command", run.command},
          {"exit_status", run.exit_status}, {"timed_out", run.timed_out}, {"duration_s", run.duration_s},
          {"stdout_tail", run.stdout_tail}, {"stderr_tail", run.stderr_tail},
          {"metrics", run.metrics},     {"failure", run.failure}};
}

ExperimentRun run_from_json(const nlohmann::json& j) {
  ExperimentRun r;
  r.run_index = j.at("run_index").get<int>();
  r.attempt = j.at("attempt").get<int>();
  r.command = j.at("command").get<std::vector<std::string>>();
  r.exit_status = j.at("exit_status").get<int>();
  r.timed_out = j.at("timed_out").get<bool>();
  r.duration_s = j.at("duration_s").get<double>();
  r.stdout_tail = j.value("stdout_tail", "");
  r.stderr_tail = j.value("stderr_tail", "");
  r.metrics = j.value("metrics", nlohmann::json());
  r.failure = j.value("failure", "");
  return r;
}

std::string LabJournal::render() const {
  std::string out;
  for (const auto& [run, note] : entries) out += "Run " + std::to_string(run) + ": " + note + "\n\n";
  for (const auto& fig : figures) {
    auto it = plot_descriptions.find(fig);
    out += "Figure " + fig + ": " + (it == plot_descriptions.end() ? std::string("(no description)") : it->second) +
           "\n\n";
  }
  return out;
}

nlohmann::json to_json(const LabJournal& journal) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [run, note] : journal.entries) entries.push_back({{"run", run}, {"note", note}});
  return {{"entries", entries}, {"figures", journal.figures}, {"plot_descriptions", journal.plot_descriptions}};
}

LabJournal journal_from_json(const nlohmann::json& j) {
  LabJournal journal;
  for (const auto& e : j.at("entries")) journal.entries.emplace_back(e.at("run").get<int>(), e.at("note").get<std::string>());
  journal.figures = j.value("figures", std::vector<std::string>{});
  journal.plot_descriptions = j.value("plot_descriptions", std::map<std::string, std::string>{});
  return journal;
}

std::vector<ExperimentRun> ExperimentReport::successful_runs() const {
  std::vector<ExperimentRun> out;
  std::copy_if(runs.begin(), runs.end(), std::back_inserter(out), [](const auto& r) { return r.succeeded(); });
  return out;
}

namespace {

std::string describe_failure(const ProcessResult& res, std::chrono::seconds timeout) {
  if (res.timed_out) {
    return "Run timed out after " + std::to_string(timeout.count()) + " seconds and was terminated.";
  }
  std::string out = "Run failed with exit status " + std::to_string(res.exit_code) + ".";
  if (!res.stderr_tail.empty()) out += "\nThe error output was:\n" + text::tail(res.stderr_tail, 4000);
  return out;
}

ExperimentRun execute_run(const fs::path& workspace, const TemplateManifest& manifest, int run_index,
                          int attempt, const LabSettings& settings) {
  const std::string out_dir = "run_" + std::to_string(run_index);
  auto run_dir = workspace / out_dir;
  std::error_code ec;
  fs::remove_all(run_dir, ec);
  fs::create_directories(run_dir);

  ProcessSpec spec;
  spec.argv = expand_command(manifest.command, out_dir);
  spec.cwd = workspace;
  spec.timeout = settings.timeout;
  spec.grace = settings.grace;
  spec.stdout_path = run_dir / "stdout.log";
  spec.stderr_path = run_dir / "stderr.log";
  spec.env_allowlist = settings.env_allowlist;
  spec.file_size_limit = settings.out_dir_quota;
  spec.isolate_network = settings.isolate_network;
  auto res = run_process(spec);

  ExperimentRun run;
  run.run_index = run_index;
  run.attempt = attempt;
  run.command = spec.argv;
  run.exit_status = res.exit_code;
  run.timed_out = res.timed_out;
  run.duration_s = res.duration_s;
  run.stdout_tail = res.stdout_tail;
  run.stderr_tail = res.stderr_tail;

  if (!res.ok()) {
    run.failure = describe_failure(res, settings.timeout);
  } else if (settings.out_dir_quota > 0 && fsx::directory_size(run_dir) > settings.out_dir_quota) {
    run.failure = "Run wrote more than the " + std::to_string(settings.out_dir_quota) +
                  "-byte storage quota into " + out_dir + ".";
  } else if (auto results = run_dir / std::string(kResultsFile); !fs::exists(results)) {
    run.failure = "Run finished but did not write " + out_dir + "/" + std::string(kResultsFile) + ".";
  } else {
    auto parsed = nlohmann::json::parse(fsx::read_file(results), nullptr, false);
    if (parsed.is_discarded()) {
      run.failure = out_dir + "/" + std::string(kResultsFile) + " is not valid JSON.";
    } else {
      run.metrics = std::move(parsed);
    }
  }
  if (run.succeeded()) {
    // Keep the code that produced these results next to them.
    fs::copy_file(workspace / manifest.experiment_file, run_dir / fs::path(manifest.experiment_file).filename(),
                  fs::copy_options::overwrite_existing, ec);
  }
  fsx::write_file_atomic(run_dir / "run.json", to_json(run).dump(2) + "\n");
  return run;
}

}  // namespace

ExperimentReport run_experiment_loop(const ideation::Idea& idea, edit::EditSession& session,
                                     const TemplateManifest& manifest, const std::string& baseline_results,
                                     const LabSettings& settings) {
  const auto& workspace = session.workspace().root();
  if (!fs::is_regular_file(workspace / manifest.experiment_file)) {
    throw PreconditionError("workspace lacks " + manifest.experiment_file);
  }
  session.set_chat_files({manifest.experiment_file, manifest.notes_file});

  ExperimentReport report;
  std::string prompt = text::fill(prompts::kExperimentPlan, {{"title", idea.title},
                                                             {"idea", idea.experiment},
                                                             {"max_runs", std::to_string(settings.max_runs)},
                                                             {"baseline_results", baseline_results}});
  for (int run = 1; run <= settings.max_runs; ++run) {
    bool run_ok = false;
    for (int attempt = 1; attempt <= settings.max_attempts; ++attempt) {
      ++report.model_calls;
      ++report.calls_per_run[run];
      std::string failure;
      try {
        session.request_edit(prompt, 0);
      } catch (const edit::EditExhausted& e) {
        failure = std::string("Your edits could not be applied, so nothing was run.\n") + e.what();
      }
      if (failure.empty() && attempt == 1 &&
          session.last_response().find(settings.completion_phrase) != std::string::npos) {
        report.passed = !report.successful_runs().empty();
        if (!report.passed) report.failure = "agent declared completion before any successful run";
        return report;
      }
      if (failure.empty()) {
        ++report.executions;
        ++report.executions_per_run[run];
        auto result = execute_run(workspace, manifest, run, attempt, settings);
        report.runs.push_back(result);
        if (result.succeeded()) {
          auto results_text = result.metrics.dump(2);
          report.journal.entries.emplace_back(run, "Results: " + result.metrics.dump());
          fsx::append_file(workspace / manifest.notes_file,
                           "\n## Run " + std::to_string(run) + "\nResults: " + result.metrics.dump() + "\n");
          prompt = text::fill(prompts::kRunSucceeded, {{"run", std::to_string(run)},
                                                       {"results", results_text},
                                                       {"next_run", std::to_string(run + 1)}});
          run_ok = true;
          break;
        }
        failure = result.failure;
      }
      prompt = text::fill(prompts::kRunFailed, {{"run", std::to_string(run)},
                                                {"attempt", std::to_string(attempt)},
                                                {"max_attempts", std::to_string(settings.max_attempts)},
                                                {"reason", failure}});
      report.failure = failure;
    }
    if (!run_ok) {
      report.passed = false;
      report.failure = "run " + std::to_string(run) + " failed " + std::to_string(settings.max_attempts) +
                       " attempts: " + report.failure;
      return report;
    }
    report.failure.clear();
  }
  report.passed = !report.successful_runs().empty();
  return report;
}

std::vector<std::string> list_figures(const fs::path& workspace) {
  static const std::set<std::string> kExt = {".png", ".pdf", ".jpg", ".jpeg", ".svg"};
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(workspace)) {
    if (!e.is_regular_file()) continue;
    if (kExt.count(text::to_lower(e.path().extension().string()))) out.push_back(e.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::map<std::string, std::string> extract_plot_descriptions(const std::string& notes,
                                                             const std::vector<std::string>& figures) {
  std::map<std::string, std::string> out;
  auto lines = text::split_lines(notes);
  for (const auto& fig : figures) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].find(fig) == std::string::npos) continue;
      std::vector<std::string> para{lines[i]};
      for (std::size_t j = i + 1; j < lines.size() && !text::trim(lines[j]).empty(); ++j) para.push_back(lines[j]);
      out[fig] = text::trim(text::join(para, "\n"));
      break;
    }
  }
  return out;
}

PlotReport run_plotting(edit::EditSession& session, const TemplateManifest& manifest, LabJournal& journal,
                        const std::vector<ExperimentRun>& runs, const LabSettings& settings) {
  if (std::none_of(runs.begin(), runs.end(), [](const auto& r) { return r.succeeded(); })) {
    throw PreconditionError("plotting needs at least one successful run");
  }
  const auto& workspace = session.workspace().root();
  session.set_chat_files({manifest.plot_file, manifest.notes_file});

  PlotReport report;
  std::string prompt(prompts::kPlotting);
  bool plotted = false;
  for (int attempt = 1; attempt <= settings.plot_attempts && !plotted; ++attempt) {
    ++report.model_calls;
    std::string failure;
    try {
      session.request_edit(prompt, 0);
    } catch (const edit::EditExhausted& e) {
      failure = std::string("Your edits could not be applied.\n") + e.what();
    }
    if (failure.empty()) {
      ++report.executions;
      ProcessSpec spec;
      spec.argv = expand_command(manifest.plot_command);
      spec.cwd = workspace;
      spec.timeout = settings.plot_timeout;
      spec.grace = settings.grace;
      spec.env_allowlist = settings.env_allowlist;
      spec.file_size_limit = settings.out_dir_quota;
      spec.isolate_network = settings.isolate_network;
      auto res = run_process(spec);
      if (res.ok()) {
        plotted = true;
        break;
      }
      failure = describe_failure(res, settings.plot_timeout);
    }
    report.failure = failure;
    prompt = text::fill(prompts::kPlotFailed, {{"reason", failure}});
  }

  if (!plotted) {
    report.degraded = true;
    return report;
  }
  report.failure.clear();
  report.figures = list_figures(workspace);
  journal.figures = report.figures;

  std::string figure_list;
  for (const auto& f : report.figures) figure_list += "- " + f + "\n";
  ++report.model_calls;
  try {
    session.request_edit(text::fill(prompts::kPlotNotes, {{"figures", figure_list}}), 1);
  } catch (const edit::EditExhausted&) {
    // Descriptions stay whatever notes.txt already says.
  }
  journal.plot_descriptions =
      extract_plot_descriptions(fsx::read_file(workspace / manifest.notes_file), report.figures);
  return report;
}

}  // namespace scientist::lab
