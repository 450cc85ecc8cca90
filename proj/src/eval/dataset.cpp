#include "scientist/eval/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

#include "scientist/review/pdf_text.hpp"
#include "scientist/util/fs.hpp"
#include "scientist/util/text.hpp"

namespace scientist::eval {

namespace fs = std::filesystem;

LabeledPaper paper_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  LabeledPaper p;
  try {
    p.paper_id = j.at("paper_id").get<std::string>();
    auto decision = text::to_lower(j.at("decision").get<std::string>());
    if (decision != "accept" && decision != "reject") throw EvalError("decision must be Accept or Reject");
    p.accept = decision == "accept";
    p.human_scores = j.value("human_scores", std::vector<int>{});
    if (j.contains("pdf")) p.pdf = base_dir / j.at("pdf").get<std::string>();
    p.text = j.value("text", "");
  } catch (const nlohmann::json::exception& e) {
    throw EvalError(std::string("bad paper record: ") + e.what());
  }
  if (p.paper_id.empty()) throw EvalError("paper_id must not be empty");
  for (int s : p.human_scores) {
    if (s < 1 || s > 10) throw EvalError(p.paper_id + ": human scores must lie in [1, 10]");
  }
  return p;
}

std::vector<LabeledPaper> load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw EvalError("dataset directory not found: " + dir.string());
  std::vector<LabeledPaper> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".json") continue;
    auto j = nlohmann::json::parse(fsx::read_file(e.path()), nullptr, false);
    if (j.is_discarded()) throw EvalError("not valid JSON: " + e.path().string());
    out.push_back(paper_from_json(j, dir));
  }
  if (out.empty()) throw EvalError("dataset has no paper records: " + dir.string());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.paper_id < b.paper_id; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].paper_id == out[i - 1].paper_id) throw EvalError("duplicate paper_id " + out[i].paper_id);
  }
  return out;
}

std::string paper_text(const LabeledPaper& paper) {
  if (!paper.text.empty()) return paper.text;
  if (paper.pdf.empty()) throw EvalError(paper.paper_id + " has neither text nor a PDF");
  return review::extract_pdf_text(paper.pdf);
}

EvalReport evaluate_reviewer(const std::vector<LabeledPaper>& papers, const std::map<std::string, int>& overall,
                             const std::string& reviewer_name, const EvalOptions& options) {
  if (papers.empty()) throw EvalError("no papers to evaluate");
  std::vector<bool> labels, predictions;
  std::vector<double> scores;
  std::vector<std::vector<int>> humans;
  bool all_humans = true;
  for (const auto& p : papers) {
    auto it = overall.find(p.paper_id);
    if (it == overall.end()) throw EvalError("no review score for " + p.paper_id);
    labels.push_back(p.accept);
    scores.push_back(it->second);
    predictions.push_back(it->second >= options.threshold);
    humans.push_back(p.human_scores);
    all_humans = all_humans && p.human_scores.size() >= 2;
  }
  EvalReport report;
  report.threshold = options.threshold;
  report.n = static_cast<int>(papers.size());
  auto baselines = run_baselines(labels, options.baselines);
  report.rows.push_back({"Random Decision", baselines.random});
  report.rows.push_back({"Always Reject", baselines.always_reject});
  report.rows.push_back({reviewer_name, evaluate(predictions, scores, labels, options.baselines.bootstrap)});
  if (all_humans) {
    report.correlations = score_correlations(humans, scores, options.baselines.seed, options.correlation_trials);
  }
  return report;
}

namespace {

std::string fmt(std::optional<double> v, int digits = 2) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, *v);
  return buf;
}

}  // namespace

std::string render_report(const EvalReport& report, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::csv) {
    out = "reviewer,n,threshold";
    for (auto m : kMetrics) {
      auto name = metric_name(m);
      out += "," + name + "," + name + " CI low," + name + " CI high";
    }
    out += "\n";
    for (const auto& row : report.rows) {
      out += row.name + "," + std::to_string(row.metrics.n) + "," + std::to_string(report.threshold);
      for (auto m : kMetrics) {
        const auto& ci = row.metrics.ci[static_cast<int>(m)];
        out += "," + fmt(row.metrics.point[m], 4) + "," + fmt(ci ? std::optional(ci->low) : std::nullopt, 4) + "," +
               fmt(ci ? std::optional(ci->high) : std::nullopt, 4);
      }
      out += "\n";
    }
    return out;
  }
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"Reviewer"};
  for (auto m : kMetrics) header.push_back(metric_name(m));
  table.push_back(header);
  for (const auto& row : report.rows) {
    std::vector<std::string> cells{row.name};
    for (auto m : kMetrics) {
      const auto& ci = row.metrics.ci[static_cast<int>(m)];
      auto cell = fmt(row.metrics.point[m]);
      if (ci) cell += " [" + fmt(ci->low) + ", " + fmt(ci->high) + "]";
      cells.push_back(cell);
    }
    table.push_back(cells);
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& r : table) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (const auto& r : table) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += " | ";
      line += r[i] + std::string(width[i] - r[i].size(), ' ');
    }
    out += text::trim(line) + "\n";
  }
  out += "n = " + std::to_string(report.n) + ", decision threshold " + std::to_string(report.threshold) +
         ", intervals are 95% bootstrap percentiles\n";
  if (report.correlations) {
    out += "Human pairwise score correlation: " + fmt(report.correlations->human_pairwise) + "\n";
    out += "Model vs mean human score correlation: " + fmt(report.correlations->llm_vs_mean) + "\n";
  }
  return out;
}

std::string render_scores_csv(const std::vector<LabeledPaper>& papers, const std::map<std::string, int>& overall) {
  std::string out = "paper_id,label,llm_overall,human_mean,human_scores\n";
  for (const auto& p : papers) {
    auto it = overall.find(p.paper_id);
    std::optional<double> mean;
    if (!p.human_scores.empty()) {
      mean = std::accumulate(p.human_scores.begin(), p.human_scores.end(), 0.0) / p.human_scores.size();
    }
    std::vector<std::string> hs;
    for (int s : p.human_scores) hs.push_back(std::to_string(s));
    out += p.paper_id + "," + (p.accept ? "Accept" : "Reject") + "," +
           (it == overall.end() ? std::string() : std::to_string(it->second)) + "," + (mean ? fmt(mean, 3) : "") + "," +
           text::join(hs, ";") + "\n";
  }
  return out;
}

}  // namespace scientist::eval
