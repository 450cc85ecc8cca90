#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scientist/eval/dataset.hpp"
#include "scientist/pipeline/config.hpp"
#include "scientist/pipeline/pipeline.hpp"
#include "scientist/review/pdf_text.hpp"
#include "scientist/review/reviewer.hpp"
#include "scientist/util/fs.hpp"

namespace fs = std::filesystem;
using namespace scientist;

namespace {

pipeline::RunConfig reviewer_config(const std::string& config_path, const std::string& replay) {
  pipeline::RunConfig cfg = config_path.empty() ? pipeline::config_from_json(nlohmann::json::object())
                                                : pipeline::config_from_json(
                                                      pipeline::yaml_to_json(fsx::read_file(config_path)),
                                                      fs::absolute(config_path).parent_path());
  if (!replay.empty()) {
    cfg.backend.kind = "replay";
    cfg.backend.replay_path = replay;
  }
  return cfg;
}

std::unique_ptr<llm::Gateway> make_gateway(const pipeline::RunConfig& cfg) {
  auto backend_cfg = cfg;
  backend_cfg.literature.kind = "fixture";  // reviewing never searches
  backend_cfg.literature.fixture_dir = ".";
  llm::RetryPolicy retry;
  retry.max_attempts = cfg.backend.max_attempts;
  return std::make_unique<llm::Gateway>(pipeline::make_dependencies(backend_cfg).backend, cfg.prices, retry);
}

std::map<std::string, int> load_reviews(const fs::path& path) {
  std::map<std::string, int> out;
  auto add = [&](const std::string& id, const nlohmann::json& rec) {
    if (rec.is_number_integer()) {
      out[id] = rec.get<int>();
    } else {
      out[id] = rec.at("overall").get<int>();
    }
  };
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.path().extension() != ".json") continue;
      add(e.path().stem().string(), nlohmann::json::parse(fsx::read_file(e.path())));
    }
  } else {
    auto records = nlohmann::json::parse(fsx::read_file(path));
    for (const auto& [id, rec] : records.items()) add(id, rec);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Autonomous research pipeline: ideas, experiments, papers and reviews"};
  app.require_subcommand(1);

  std::string config_path, format = "text";
  auto* run = app.add_subcommand("run", "Run the full pipeline from a config file");
  run->add_option("--config", config_path, "YAML run configuration")->required()->check(CLI::ExistingFile);
  run->add_option("--format", format, "Summary format")->check(CLI::IsMember({"text", "csv"}));

  std::string resume_dir;
  auto* resume = app.add_subcommand("resume", "Continue an interrupted run");
  resume->add_option("dir", resume_dir, "Run output directory")->required();
  resume->add_option("--format", format, "Summary format")->check(CLI::IsMember({"text", "csv"}));

  std::string pdf, review_out, replay;
  int threshold = 6;
  auto* review_cmd = app.add_subcommand("review", "Review a paper PDF and print the review record");
  review_cmd->add_option("pdf", pdf, "Paper PDF")->required();
  review_cmd->add_option("--config", config_path, "YAML config for models, backend and reviewer settings");
  review_cmd->add_option("--replay", replay, "Replay transcripts instead of calling the API");
  review_cmd->add_option("--threshold", threshold, "Accept when overall >= threshold")->check(CLI::Range(1, 10));
  review_cmd->add_option("--out", review_out, "Also write the record to this file");

  std::string dataset, reviews, scores_csv;
  int resamples = 10000;
  std::uint64_t seed = 0;
  auto* eval_cmd = app.add_subcommand("eval-reviewer", "Score reviewer decisions against labeled papers");
  eval_cmd->add_option("--dataset", dataset, "Directory of labeled paper records")->required();
  eval_cmd->add_option("--threshold", threshold, "Accept when overall >= threshold")->check(CLI::Range(1, 10));
  eval_cmd->add_option("--reviews", reviews, "Precomputed reviews: JSON map or directory of review records");
  eval_cmd->add_option("--config", config_path, "YAML config used when reviews are generated");
  eval_cmd->add_option("--replay", replay, "Replay transcripts instead of calling the API");
  eval_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "csv"}));
  eval_cmd->add_option("--scores-csv", scores_csv, "Write per-paper scores for plotting");
  eval_cmd->add_option("--resamples", resamples, "Bootstrap resamples")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", seed, "Seed for bootstrap and baselines");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed() || resume->parsed()) {
      auto outcome = run->parsed() ? pipeline::run_pipeline(pipeline::load_config(config_path))
                                   : pipeline::resume_run(resume_dir);
      std::cout << pipeline::emit_summary(outcome.summary, format == "csv" ? pipeline::SummaryFormat::csv
                                                                            : pipeline::SummaryFormat::text);
      if (outcome.interrupted) std::cerr << "run stopped early; continue it with `resume`\n";
      return outcome.summary.completed_papers >= 1 ? 0 : 1;
    }

    if (review_cmd->parsed()) {
      auto cfg = reviewer_config(config_path, replay);
      cfg.reviewer.decision_threshold = threshold;
      review::validate(cfg.reviewer);
      auto gateway = make_gateway(cfg);
      auto text = review::extract_pdf_text(pdf);
      auto resources = review::load_reviewer_resources(cfg.data_dir / "reviewer");
      auto r = review::review_ensemble(*gateway, text, cfg.reviewer, resources);
      auto record = review::to_record(r).dump(2) + "\n";
      if (!review_out.empty()) fsx::write_file_atomic(review_out, record);
      std::cout << record;
      return 0;
    }

    if (eval_cmd->parsed()) {
      auto papers = eval::load_dataset(dataset);
      std::map<std::string, int> overall;
      std::string name = "Reviewer";
      if (!reviews.empty()) {
        overall = load_reviews(reviews);
      } else {
        auto cfg = reviewer_config(config_path, replay);
        review::validate(cfg.reviewer);
        auto gateway = make_gateway(cfg);
        auto resources = review::load_reviewer_resources(cfg.data_dir / "reviewer");
        name = cfg.reviewer.model_id;
        for (const auto& p : papers) {
          try {
            overall[p.paper_id] = review::review_ensemble(*gateway, eval::paper_text(p), cfg.reviewer, resources).overall;
          } catch (const review::ReviewFailed& e) {
            std::cerr << p.paper_id << ": " << e.what() << "; scored as overall 1\n";
            overall[p.paper_id] = 1;
          }
        }
      }
      eval::EvalOptions opts;
      opts.threshold = threshold;
      opts.baselines.seed = seed;
      opts.baselines.bootstrap.seed = seed;
      opts.baselines.bootstrap.resamples = resamples;
      opts.baselines.bootstrap.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
      auto report = eval::evaluate_reviewer(papers, overall, name, opts);
      std::cout << eval::render_report(report, format == "csv" ? eval::ReportFormat::csv : eval::ReportFormat::text);
      if (!scores_csv.empty()) fsx::write_file_atomic(scores_csv, eval::render_scores_csv(papers, overall));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
