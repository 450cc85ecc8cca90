#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scientist/eval/metrics.hpp"

namespace scientist::eval {

// One labeled submission. Records live one per JSON file:
//   {"paper_id": "...", "decision": "Accept"|"Reject", "human_scores": [6, 3],
//    "pdf": "relative/path.pdf"}            or  "text": "inline manuscript text"
struct LabeledPaper {
  std::string paper_id;
  std::filesystem::path pdf;
  std::string text;
  bool accept = false;
  std::vector<int> human_scores;
};

LabeledPaper paper_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
// Every *.json record under `dir`, sorted by paper_id. Throws EvalError.
std::vector<LabeledPaper> load_dataset(const std::filesystem::path& dir);

// Manuscript text, read from `text` or extracted from the PDF.
std::string paper_text(const LabeledPaper& paper);

struct ReviewerRow {
  std::string name;
  MetricsReport metrics;
};

struct EvalReport {
  std::vector<ReviewerRow> rows;
  std::optional<Correlations> correlations;
  int threshold = 6;
  int n = 0;
};

struct EvalOptions {
  int threshold = 6;
  BaselineOptions baselines;
  int correlation_trials = 100;
};

// Rows for both baselines and the reviewer whose overall scores are given per
// paper_id; the reviewer's decision is overall >= threshold.
EvalReport evaluate_reviewer(const std::vector<LabeledPaper>& papers, const std::map<std::string, int>& overall,
                             const std::string& reviewer_name, const EvalOptions& options);

enum class ReportFormat { text, csv };
std::string render_report(const EvalReport& report, ReportFormat format);

// paper_id,label,llm_overall,human_mean,human_scores
std::string render_scores_csv(const std::vector<LabeledPaper>& papers, const std::map<std::string, int>& overall);

}  // namespace scientist::eval
