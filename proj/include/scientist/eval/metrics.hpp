#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scientist/util/error.hpp"

namespace scientist::eval {

class EvalError : public Error {
public:
  using Error::Error;
};

// Accept is the positive class throughout.
struct Confusion {
  int tp = 0, fp = 0, tn = 0, fn = 0;
  int n() const { return tp + fp + tn + fn; }
};

Confusion confusion(const std::vector<bool>& predictions, const std::vector<bool>& labels);

enum class Metric { balanced_accuracy, accuracy, f1, auc, fpr, fnr };
inline constexpr std::array<Metric, 6> kMetrics = {Metric::balanced_accuracy, Metric::accuracy, Metric::f1,
                                                   Metric::auc, Metric::fpr, Metric::fnr};
std::string metric_name(Metric m);  // column header, e.g. "Balanced Acc."

// nullopt marks a metric that is undefined on the input (a class is absent,
// or F1 with nothing positive anywhere).
struct PointMetrics {
  std::array<std::optional<double>, 6> values;
  Confusion counts;
  std::optional<double> operator[](Metric m) const { return values[static_cast<int>(m)]; }
};

// Probability that a random accepted paper outscores a random rejected one,
// ties counting one half.
std::optional<double> roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels);

PointMetrics compute_metrics(const std::vector<bool>& predictions, const std::vector<double>& scores,
                             const std::vector<bool>& labels);

struct Interval {
  double low = 0;
  double high = 0;
  bool operator==(const Interval&) const = default;
};

struct BootstrapOptions {
  int resamples = 10000;
  double level = 0.95;
  std::uint64_t seed = 0;
  // Draws allowed per resample before it is given up as undefined.
  int redraw_budget = 100;
  int threads = 1;
};

// Evaluates a metric on the rows named by `indices` (a resample of 0..n-1).
using Evaluator = std::function<std::optional<double>(const std::vector<std::size_t>& indices)>;

// Percentile interval over resamples drawn with replacement. Every resample
// has its own seed derived from options.seed, so the result does not depend
// on the thread count.
Interval bootstrap_ci(const Evaluator& evaluator, std::size_t n, const BootstrapOptions& options);

// Linear-interpolated quantile of an ascending-sorted sample.
double quantile(const std::vector<double>& sorted, double q);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct MetricsReport {
  PointMetrics point;
  // Contains the point estimate whenever both are defined.
  std::array<std::optional<Interval>, 6> ci;
  int n = 0;
};

MetricsReport evaluate(const std::vector<bool>& predictions, const std::vector<double>& scores,
                       const std::vector<bool>& labels, const BootstrapOptions& options);

// Pearson correlation; nullopt for fewer than two points or zero variance.
std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);

struct Correlations {
  std::optional<double> human_pairwise;
  std::optional<double> llm_vs_mean;
};

// human_pairwise: one randomly chosen pair of reviewers per paper, averaged
// over `trials` seeded draws. Throws EvalError when a paper has fewer than two
// human scores.
Correlations score_correlations(const std::vector<std::vector<int>>& human_scores,
                                const std::vector<double>& llm_scores, std::uint64_t seed, int trials = 1);

struct BaselineOptions {
  int random_trials = 10000;
  std::uint64_t seed = 0;
  BootstrapOptions bootstrap;
};

struct BaselineReports {
  MetricsReport random;         // means over trials; interval = trial percentiles
  MetricsReport always_reject;  // constant score, bootstrap intervals
};

BaselineReports run_baselines(const std::vector<bool>& labels, const BaselineOptions& options);

}  // namespace scientist::eval
