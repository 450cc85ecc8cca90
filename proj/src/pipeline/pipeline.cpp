#include "scientist/pipeline/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "scientist/edit/session.hpp"
#include "scientist/ideation/ideation.hpp"
#include "scientist/lab/experiment.hpp"
#include "scientist/lab/process.hpp"
#include "scientist/prompts.hpp"
#include "scientist/review/pdf_text.hpp"
#include "scientist/review/reviewer.hpp"
#include "scientist/util/fs.hpp"
#include "scientist/util/text.hpp"
#include "scientist/writeup/writer.hpp"

namespace scientist::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& idea_stages() {
  static const std::vector<std::string> kStages = {"experiments", "plotting", "writeup", "review"};
  return kStages;
}

std::string idea_dir_name(int index, const std::string& name) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", index);
  return std::string(buf) + "_" + name;
}

json to_json(const IdeaState& s) {
  return {{"index", s.index},
          {"name", s.name},
          {"stage", s.stage},
          {"failed_stage", s.failed_stage},
          {"failure", s.failure},
          {"experiments_passed", s.experiments_passed},
          {"compiled", s.compiled},
          {"score", s.score ? json(*s.score) : json(nullptr)}};
}

IdeaState idea_state_from_json(const json& j) {
  IdeaState s;
  s.index = j.at("index").get<int>();
  s.name = j.at("name").get<std::string>();
  s.stage = j.at("stage").get<std::string>();
  s.failed_stage = j.value("failed_stage", "");
  s.failure = j.value("failure", "");
  s.experiments_passed = j.value("experiments_passed", false);
  s.compiled = j.value("compiled", false);
  if (j.contains("score") && !j.at("score").is_null()) s.score = j.at("score").get<int>();
  return s;
}

json to_json(const RunSummary& s) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"total_ideas", s.total_ideas},
          {"novel_ideas", s.novel_ideas},
          {"experiments_passed", s.experiments_passed},
          {"completed_papers", s.completed_papers},
          {"mean_score", opt(s.mean_score)},
          {"max_score", opt(s.max_score)},
          {"total_cost", s.total_cost}};
}

RunSummary summary_from_json(const json& j) {
  RunSummary s;
  s.total_ideas = j.at("total_ideas").get<int>();
  s.novel_ideas = j.at("novel_ideas").get<int>();
  s.experiments_passed = j.at("experiments_passed").get<int>();
  s.completed_papers = j.at("completed_papers").get<int>();
  if (!j.at("mean_score").is_null()) s.mean_score = j.at("mean_score").get<double>();
  if (!j.at("max_score").is_null()) s.max_score = j.at("max_score").get<double>();
  s.total_cost = j.at("total_cost").get<double>();
  return s;
}

std::string emit_summary(const RunSummary& s, SummaryFormat format) {
  auto num = [&](const std::optional<double>& v, int digits) {
    if (!v) return std::string(kEmptySentinel);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, *v);
    return std::string(buf);
  };
  std::vector<std::string> header = {"Total Ideas", "Novel Ideas", "Experiments Passed", "Completed Papers",
                                     "Mean Score",  "Max Score",   "Total Cost"};
  std::vector<std::string> values = {std::to_string(s.total_ideas),
                                     std::to_string(s.novel_ideas),
                                     std::to_string(s.experiments_passed),
                                     std::to_string(s.completed_papers),
                                     num(s.mean_score, 2),
                                     num(s.max_score, 2),
                                     format == SummaryFormat::csv ? num(s.total_cost, 4) : "$" + num(s.total_cost, 2)};
  if (format == SummaryFormat::csv) return text::join(header, ",") + "\n" + text::join(values, ",") + "\n";
  std::string top, bottom;
  for (std::size_t i = 0; i < header.size(); ++i) {
    auto w = std::max(header[i].size(), values[i].size());
    if (i) {
      top += " | ";
      bottom += " | ";
    }
    top += header[i] + std::string(w - header[i].size(), ' ');
    bottom += values[i] + std::string(w - values[i].size(), ' ');
  }
  return text::trim(top) + "\n" + text::trim(bottom) + "\n";
}

namespace {

json read_json(const fs::path& p) {
  auto j = json::parse(fsx::read_file(p), nullptr, false);
  if (j.is_discarded()) throw Error("corrupt JSON file: " + p.string());
  return j;
}

void write_json(const fs::path& p, const json& j) { fsx::write_file_atomic(p, j.dump(2) + "\n"); }

json usage_json(const llm::Usage& u) {
  return {{"prompt_tokens", u.prompt_tokens}, {"completion_tokens", u.completion_tokens}, {"cost", u.cost}, {"calls", u.calls}};
}

llm::Usage usage_from_json(const json& j) {
  llm::Usage u;
  if (j.is_null()) return u;
  u.prompt_tokens = j.value("prompt_tokens", std::uint64_t{0});
  u.completion_tokens = j.value("completion_tokens", std::uint64_t{0});
  u.cost = j.value("cost", 0.0);
  u.calls = j.value("calls", std::uint64_t{0});
  return u;
}

}  // namespace

RunSummary summarize_tree(const fs::path& out) {
  RunSummary s;
  auto archive = ideation::load_archive(out / kIdeasFile);
  s.total_ideas = static_cast<int>(archive.ideas.size());
  for (const auto& idea : archive.ideas) s.novel_ideas += idea.novel == ideation::Novelty::novel;
  std::vector<int> scores;
  if (fs::is_directory(out / "ideas")) {
    for (const auto& e : fs::directory_iterator(out / "ideas")) {
      auto state_file = e.path() / kStateFile;
      if (!fs::is_regular_file(state_file)) continue;
      auto st = idea_state_from_json(read_json(state_file));
      s.experiments_passed += st.experiments_passed;
      if (st.completed()) {
        ++s.completed_papers;
        if (st.score) scores.push_back(*st.score);
      }
    }
  }
  if (!scores.empty()) {
    double sum = 0;
    for (int v : scores) sum += v;
    s.mean_score = sum / static_cast<double>(scores.size());
    s.max_score = *std::max_element(scores.begin(), scores.end());
  }
  if (fs::is_regular_file(out / kManifestFile)) {
    s.total_cost = usage_from_json(read_json(out / kManifestFile).value("usage", json())).cost;
  }
  return s;
}

namespace {

std::shared_ptr<llm::Backend> make_backend(const RunConfig& c) {
  if (c.backend.kind == "replay") {
    auto replay = std::make_shared<llm::ReplayBackend>();
    replay->load(c.backend.replay_path);
    return replay;
  }
  llm::HttpBackendOptions opts;
  opts.base_url = c.backend.base_url;
  if (const char* key = std::getenv(c.backend.api_key_env.c_str())) opts.api_key = key;
  return std::make_shared<llm::HttpChatBackend>(opts);
}

std::shared_ptr<literature::LiteratureClient> make_literature(const RunConfig& c) {
  if (c.literature.kind == "fixture") return std::make_shared<literature::FixtureLiteratureClient>(c.literature.fixture_dir);
  literature::SemanticScholarOptions opts;
  if (const char* key = std::getenv(c.literature.api_key_env.c_str())) opts.api_key = key;
  opts.record_dir = c.literature.record_dir;
  opts.requests_per_second = c.literature.requests_per_second;
  return std::make_shared<literature::SemanticScholarClient>(opts);
}

}  // namespace

Dependencies make_dependencies(const RunConfig& c) {
  Dependencies deps;
  deps.backend = make_backend(c);
  deps.literature = make_literature(c);
  return deps;
}

namespace {

class StopRequested : public Error {
public:
  using Error::Error;
};

std::string checkpoint_name(const std::string& stage) { return ".checkpoint-" + stage; }

std::vector<std::string> checkpoint_dirs(const fs::path& ws) {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(ws)) {
    auto name = e.path().filename().string();
    if (text::starts_with(name, ".checkpoint-")) out.push_back(name);
  }
  return out;
}

// Restores the workspace to how it looked when `stage` last started, or
// records that state if the stage is starting for the first time.
void begin_stage(const fs::path& ws, const std::string& stage) {
  auto mine = checkpoint_name(stage);
  for (const auto& name : checkpoint_dirs(ws)) {
    if (name != mine) fs::remove_all(ws / name);
  }
  auto cp = ws / mine;
  if (fs::is_directory(cp)) {
    for (const auto& e : fs::directory_iterator(ws)) {
      if (e.path().filename() != mine) fs::remove_all(e.path());
    }
    fsx::copy_tree(cp, ws);
  } else {
    auto tmp = ws / (mine + ".tmp");
    fs::remove_all(tmp);
    fsx::copy_tree(ws, tmp, {mine + ".tmp"});
    fs::rename(tmp, cp);
  }
}

void end_stage(const fs::path& ws, const std::string& stage) { fs::remove_all(ws / checkpoint_name(stage)); }

class Runner {
public:
  Runner(RunConfig config, fs::path out, Dependencies deps, json manifest)
      : cfg_(std::move(config)), out_(std::move(out)), deps_(std::move(deps)), manifest_(std::move(manifest)) {
    if (!deps_.backend) deps_.backend = make_backend(cfg_);
    if (!deps_.literature) deps_.literature = make_literature(cfg_);
    llm::RetryPolicy retry;
    retry.max_attempts = cfg_.backend.max_attempts;
    if (deps_.sleep) retry.sleep = deps_.sleep;
    gateway_ = std::make_unique<llm::Gateway>(deps_.backend, cfg_.prices, retry);
    usage_base_ = usage_from_json(manifest_.value("usage", json()));
    template_ = lab::load_template(cfg_.template_dir);
    if (template_.experiment_timeout_s) cfg_.lab.timeout = std::chrono::seconds(*template_.experiment_timeout_s);
    if (template_.plot_timeout_s) cfg_.lab.plot_timeout = std::chrono::seconds(*template_.plot_timeout_s);
    lab::ProcessSlots::global().set_capacity(cfg_.max_processes);
  }

  RunOutcome run() {
    RunOutcome outcome;
    try {
      auto phase = manifest_.value("phase", std::string("ideation"));
      if (phase == "ideation") {
        ideation_phase();
        set_phase("novelty");
        stop_point("ideation");
        phase = "novelty";
      }
      if (phase == "novelty") {
        novelty_phase();
        set_phase("ideas");
        stop_point("novelty");
      }
      ideas_phase();
    } catch (const StopRequested&) {
      outcome.interrupted = true;
    }
    rethrow_fatal();
    write_manifest();
    outcome.summary = summarize_tree(out_);
    write_json(out_ / kSummaryFile, to_json(outcome.summary));
    fsx::write_file_atomic(out_ / "summary.txt", emit_summary(outcome.summary, SummaryFormat::text));
    return outcome;
  }

private:
  llm::ModelSettings model(const std::string& id) const { return {id, cfg_.temperature, cfg_.max_output_tokens}; }

  void write_manifest() {
    std::lock_guard lock(manifest_mu_);
    auto usage = usage_base_;
    usage += gateway_->ledger().snapshot();
    manifest_["usage"] = usage_json(usage);
    write_json(out_ / kManifestFile, manifest_);
  }

  void set_phase(const std::string& phase) {
    {
      std::lock_guard lock(manifest_mu_);
      manifest_["phase"] = phase;
    }
    write_manifest();
  }

  void stop_point(const std::string& stage) {
    if (cfg_.stop_after_stage == stage) {
      stop_.store(true);
      throw StopRequested("stopped after " + stage);
    }
  }

  void record_fatal(const std::exception& e) {
    std::lock_guard lock(fatal_mu_);
    if (fatal_.empty()) fatal_ = e.what();
    stop_.store(true);
  }

  void rethrow_fatal() {
    std::lock_guard lock(fatal_mu_);
    if (fatal_.empty()) return;
    write_manifest();
    try {
      auto partial = summarize_tree(out_);
      write_json(out_ / kSummaryFile, to_json(partial));
    } catch (const std::exception&) {
    }
    throw RunAborted("run aborted: " + fatal_);
  }

  std::string code() const { return fsx::read_file(template_.path_of(template_.experiment_file)); }

  void ideation_phase() {
    auto ideas_path = out_ / kIdeasFile;
    ideation::IdeaArchive archive = fs::exists(ideas_path)
                                        ? ideation::load_archive(ideas_path)
                                        : ideation::load_seed_ideas(template_.path_of(template_.seed_ideas_file));
    ideation::save_archive(archive, ideas_path);
    auto transcript_path = out_ / "transcripts" / "ideation.jsonl";
    fs::create_directories(transcript_path.parent_path());
    auto kept = manifest_.value("ideation_transcript_bytes", std::uintmax_t{0});
    if (fs::exists(transcript_path)) fs::resize_file(transcript_path, std::min(kept, fs::file_size(transcript_path)));
    llm::TranscriptWriter transcript(transcript_path);
    ideation::IdeationContext ctx{*gateway_, model(cfg_.models.ideation), template_.task_description, code(), &transcript};

    int attempts = manifest_.value("ideation_attempts", 0);
    while (attempts < cfg_.idea_count) {
      try {
        archive.append(ideation::generate_idea(archive, ctx, cfg_.idea_reflections));
      } catch (const ideation::IdeaGenerationFailed&) {
      }
      ++attempts;
      ideation::save_archive(archive, ideas_path);
      {
        std::lock_guard lock(manifest_mu_);
        manifest_["ideation_attempts"] = attempts;
        manifest_["ideation_transcript_bytes"] = fs::exists(transcript_path) ? fs::file_size(transcript_path) : 0;
      }
      write_manifest();
    }
  }

  template <typename F>
  void pool(std::size_t count, F&& work) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      while (!stop_.load()) {
        auto i = next.fetch_add(1);
        if (i >= count) return;
        try {
          work(i);
        } catch (const StopRequested&) {
          stop_.store(true);
        } catch (const std::exception& e) {
          record_fatal(e);
        }
      }
    };
    int width = std::max(1, std::min<int>(cfg_.parallelism, static_cast<int>(count)));
    if (width == 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (int t = 0; t < width; ++t) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
    }
  }

  void novelty_phase() {
    auto ideas_path = out_ / kIdeasFile;
    auto archive = ideation::load_archive(ideas_path);
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < archive.ideas.size(); ++i) {
      if (archive.ideas[i].novel == ideation::Novelty::undetermined) pending.push_back(i);
    }
    std::mutex archive_mu;
    auto task = code();
    pool(pending.size(), [&](std::size_t k) {
      auto i = pending[k];
      auto idea = archive.ideas[i];
      auto path = out_ / "transcripts" / "novelty" / (idea_dir_name(static_cast<int>(i), idea.name) + ".jsonl");
      fs::create_directories(path.parent_path());
      fs::remove(path);
      llm::TranscriptWriter transcript(path);
      ideation::IdeationContext ctx{*gateway_, model(cfg_.models.ideation), template_.task_description, task, &transcript};
      auto checked = ideation::check_novelty(idea, ctx, *deps_.literature, cfg_.novelty_rounds);
      std::lock_guard lock(archive_mu);
      archive.ideas[i] = checked;
      ideation::save_archive(archive, ideas_path);
    });
    if (stop_.load()) rethrow_fatal();
  }

  void ideas_phase() {
    auto archive = ideation::load_archive(out_ / kIdeasFile);
    std::vector<int> novel;
    for (std::size_t i = 0; i < archive.ideas.size(); ++i) {
      if (archive.ideas[i].novel == ideation::Novelty::novel) novel.push_back(static_cast<int>(i));
    }
    pool(novel.size(), [&](std::size_t k) { run_idea(novel[k], archive.ideas[novel[k]]); });
    if (stop_.load() && !cfg_.stop_after_stage.empty()) {
      rethrow_fatal();
      throw StopRequested("stopped");
    }
  }

  fs::path setup_workspace(int index, const ideation::Idea& idea) {
    auto ws = out_ / "ideas" / idea_dir_name(index, idea.name);
    if (fs::is_regular_file(ws / kStateFile)) return ws;
    fs::remove_all(ws);
    fs::create_directories(ws.parent_path());
    auto tmp = ws;
    tmp += ".tmp";
    fs::remove_all(tmp);
    fsx::copy_tree(template_.root, tmp, {".snapshots", "template.json"});
    auto baseline = fsx::read_file(template_.path_of(template_.baseline_results_file));
    fsx::write_file_atomic(tmp / template_.notes_file,
                           "# Title: " + idea.title + "\n# Experiment description: " + idea.experiment +
                               "\n## Run 0: Baseline\nResults: " + text::trim(baseline) +
                               "\nDescription: Baseline results.\n");
    write_json(tmp / "idea.json", ideation::to_json(idea));
    IdeaState st;
    st.index = index;
    st.name = idea.name;
    st.stage = idea_stages().front();
    write_json(tmp / kStateFile, to_json(st));
    fs::rename(tmp, ws);
    return ws;
  }

  void run_idea(int index, const ideation::Idea& idea) {
    auto ws = setup_workspace(index, idea);
    auto st = idea_state_from_json(read_json(ws / kStateFile));
    while (!st.terminal()) {
      if (stop_.load()) return;
      auto stage = st.stage;
      begin_stage(ws, stage);
      llm::TranscriptWriter transcript(ws / "transcript.jsonl");
      if (stage == "experiments") {
        experiments(ws, idea, st, transcript);
      } else if (stage == "plotting") {
        plotting(ws, st, transcript);
      } else if (stage == "writeup") {
        writeup(ws, st, transcript);
      } else if (stage == "review") {
        review(ws, st, transcript);
      } else {
        throw Error("unknown stage " + stage + " in " + (ws / kStateFile).string());
      }
      write_json(ws / kStateFile, to_json(st));
      end_stage(ws, stage);
      write_manifest();
      stop_point(stage);
    }
  }

  void fail(IdeaState& st, const std::string& stage, const std::string& why) {
    st.stage = "failed";
    st.failed_stage = stage;
    st.failure = why;
  }

  lab::TemplateManifest workspace_manifest(const fs::path& ws) const {
    auto m = template_;
    m.root = ws;
    return m;
  }

  std::unique_ptr<edit::EditSession> session(const fs::path& ws, const std::string& model_id,
                                             std::vector<std::string> files, llm::TranscriptWriter& transcript,
                                             std::string system = {}) {
    return std::make_unique<edit::EditSession>(*gateway_, model(model_id), edit::Workspace(ws), std::move(files),
                                               &transcript, edit::EditSessionOptions{}, std::move(system));
  }

  void experiments(const fs::path& ws, const ideation::Idea& idea, IdeaState& st, llm::TranscriptWriter& tw) {
    auto m = workspace_manifest(ws);
    auto coder = session(ws, cfg_.models.coder, {m.experiment_file, m.notes_file}, tw);
    auto baseline = fsx::read_file(template_.path_of(template_.baseline_results_file));
    auto report = lab::run_experiment_loop(idea, *coder, m, baseline, cfg_.lab);
    json runs = json::array();
    for (const auto& r : report.runs) runs.push_back(lab::to_json(r));
    write_json(ws / "experiment_report.json", {{"passed", report.passed},
                                               {"failure", report.failure},
                                               {"model_calls", report.model_calls},
                                               {"executions", report.executions},
                                               {"runs", runs}});
    write_json(ws / "journal.json", lab::to_json(report.journal));
    st.experiments_passed = report.passed;
    if (report.passed) {
      st.stage = "plotting";
    } else {
      fail(st, "experiments", report.failure);
    }
  }

  void plotting(const fs::path& ws, IdeaState& st, llm::TranscriptWriter& tw) {
    auto m = workspace_manifest(ws);
    auto journal = lab::journal_from_json(read_json(ws / "journal.json"));
    std::vector<lab::ExperimentRun> runs;
    auto report_json = read_json(ws / "experiment_report.json");
    for (const auto& r : report_json.at("runs")) runs.push_back(lab::run_from_json(r));
    auto coder = session(ws, cfg_.models.coder, {m.plot_file, m.notes_file}, tw);
    try {
      auto report = lab::run_plotting(*coder, m, journal, runs, cfg_.lab);
      write_json(ws / "plot_report.json",
                 {{"figures", report.figures}, {"degraded", report.degraded}, {"failure", report.failure}});
      write_json(ws / "journal.json", lab::to_json(journal));
      st.stage = "writeup";
    } catch (const lab::PreconditionError& e) {
      fail(st, "plotting", e.what());
    }
  }

  void writeup(const fs::path& ws, IdeaState& st, llm::TranscriptWriter& tw) {
    auto m = workspace_manifest(ws);
    auto journal = lab::journal_from_json(read_json(ws / "journal.json"));
    auto tips = writeup::load_section_tips(cfg_.data_dir / "writeup" / "section_tips.json");
    auto tex = m.latex_dir + "/template.tex";
    auto writer = session(ws, cfg_.models.writeup, {tex}, tw, std::string(prompts::kWriteupSystem));
    writeup::WriteupContext ctx{*writer, *gateway_, model(cfg_.models.writeup), &tw, tex, m.latex_dir + "/references.bib", {}, 2};
    auto state = writeup::begin_manuscript(ctx, journal);
    auto save = [&] { write_json(ws / "manuscript.json", writeup::to_json(state)); };
    try {
      for (const auto& section : writeup::writing_order()) writeup::write_section(state, section, journal, tips, ctx);
    } catch (const writeup::SectionFailed& e) {
      save();
      fail(st, "writeup", e.what());
      return;
    }
    auto citations = writeup::gather_citations(state, ctx, *deps_.literature, cfg_.citation_rounds);
    auto refine = writeup::refine_manuscript(state, ctx);
    auto compiled = writeup::compile_manuscript(state, ctx, cfg_.compile);
    save();
    write_json(ws / "writeup_report.json", {{"citation_rounds", citations.rounds},
                                            {"added_citations", citations.added_keys},
                                            {"search_failures", citations.search_failures},
                                            {"empty_related_work", state.empty_related_work},
                                            {"refined", refine.refined},
                                            {"refine_failed", refine.failed},
                                            {"compiled", compiled.success},
                                            {"repair_rounds", compiled.repair_rounds},
                                            {"toolchain_missing", compiled.toolchain_missing},
                                            {"compile_excerpt", compiled.excerpt}});
    st.compiled = compiled.success;
    if (compiled.success || compiled.toolchain_missing) {
      st.stage = "review";
    } else {
      fail(st, "writeup", "LaTeX errors remain after " + std::to_string(compiled.repair_rounds) + " repair rounds");
    }
  }

  void review(const fs::path& ws, IdeaState& st, llm::TranscriptWriter& tw) {
    auto m = workspace_manifest(ws);
    std::string paper = st.compiled ? review::extract_pdf_text(ws / cfg_.compile.output_pdf)
                                    : fsx::read_file(ws / m.latex_dir / "template.tex");
    auto resources = review::load_reviewer_resources(cfg_.data_dir / "reviewer");
    try {
      auto r = review::review_ensemble(*gateway_, paper, cfg_.reviewer, resources, &tw);
      write_json(ws / "review.json", review::to_record(r));
      st.score = r.overall;
    } catch (const review::ReviewFailed& e) {
      st.failure = e.what();
    }
    st.stage = "done";
  }

  RunConfig cfg_;
  fs::path out_;
  Dependencies deps_;
  json manifest_;
  std::mutex manifest_mu_;
  std::unique_ptr<llm::Gateway> gateway_;
  llm::Usage usage_base_;
  lab::TemplateManifest template_;
  std::atomic<bool> stop_{false};
  std::mutex fatal_mu_;
  std::string fatal_;
};

}  // namespace

RunOutcome run_pipeline(const RunConfig& config, Dependencies deps) {
  validate(config);
  if (config.output_dir.empty()) throw ConfigError("output_dir is required");
  lab::validate_template(lab::load_template(config.template_dir));
  auto out = fs::absolute(config.output_dir);
  if (fs::exists(out) && !fs::is_empty(out)) throw ConfigError("output directory is not empty: " + out.string());
  fs::create_directories(out);
  json manifest = {{"version", 1}, {"config", config_to_json(config)}, {"phase", "ideation"}, {"ideation_attempts", 0}};
  write_json(out / kManifestFile, manifest);
  return Runner(config, out, std::move(deps), std::move(manifest)).run();
}

RunOutcome resume_run(const fs::path& output_dir, Dependencies deps, const std::string& stop_after_stage) {
  auto path = output_dir / kManifestFile;
  if (!fs::is_regular_file(path)) throw Error("no run manifest in " + output_dir.string());
  json manifest;
  RunConfig config;
  try {
    manifest = read_json(path);
    if (manifest.value("version", 0) != 1) throw Error("unsupported manifest version");
    config = config_from_json(manifest.at("config"));
  } catch (const std::exception& e) {
    throw Error("corrupt run manifest " + path.string() + ": " + e.what());
  }
  config.output_dir = fs::absolute(output_dir);
  config.stop_after_stage = stop_after_stage;
  validate(config);
  return Runner(config, config.output_dir, std::move(deps), std::move(manifest)).run();
}

}  // namespace scientist::pipeline
