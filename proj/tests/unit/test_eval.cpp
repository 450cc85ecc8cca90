#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "fake_scientist.hpp"
#include "scientist/eval/dataset.hpp"
#include "scientist/eval/metrics.hpp"

using namespace scientist;
using namespace scientist::eval;

namespace {

struct Oracle {
  double tp = 0, fp = 0, tn = 0, fn = 0;
  double auc_wins = 0;
};

Oracle brute(const std::vector<bool>& pred, const std::vector<double>& score, const std::vector<bool>& label) {
  Oracle o;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] && pred[i]) o.tp += 1;
    if (label[i] && !pred[i]) o.fn += 1;
    if (!label[i] && pred[i]) o.fp += 1;
    if (!label[i] && !pred[i]) o.tn += 1;
    for (std::size_t j = 0; j < label.size(); ++j) {
      if (!label[i] || label[j]) continue;
      o.auc_wins += score[i] > score[j] ? 1.0 : score[i] == score[j] ? 0.5 : 0.0;
    }
  }
  return o;
}

std::vector<bool> split(int rejects, int accepts) {
  std::vector<bool> labels(rejects, false);
  labels.insert(labels.end(), accepts, true);
  return labels;
}

}  // namespace

TEST(Metrics, BalancedExample) {
  std::vector<bool> labels{true, true, false, false};
  std::vector<bool> pred{true, false, true, false};
  auto m = compute_metrics(pred, {1, 0, 1, 0}, labels);
  for (auto k : kMetrics) {
    ASSERT_TRUE(m[k].has_value()) << metric_name(k);
    EXPECT_DOUBLE_EQ(*m[k], 0.5) << metric_name(k);
  }
}

TEST(Metrics, AucCountsTiesAsHalf) {
  // Accepted scored {6,3}, rejected {4,5}: wins over both, loses to both.
  EXPECT_DOUBLE_EQ(*roc_auc({6, 3, 4, 5}, {true, true, false, false}), 0.5);
  EXPECT_DOUBLE_EQ(*roc_auc({5, 5, 5, 5}, {true, false, true, false}), 0.5);
  EXPECT_DOUBLE_EQ(*roc_auc({9, 8, 1, 2}, {true, true, false, false}), 1.0);
  EXPECT_DOUBLE_EQ(*roc_auc({5, 4, 4, 1}, {true, true, false, false}), 0.875);
  EXPECT_FALSE(roc_auc({1, 2}, {true, true}).has_value());
}

TEST(Metrics, UndefinedValuesAreMarked) {
  auto m = compute_metrics({false, false}, {0, 0}, {false, false});
  EXPECT_FALSE(m[Metric::fnr].has_value());
  EXPECT_FALSE(m[Metric::balanced_accuracy].has_value());
  EXPECT_FALSE(m[Metric::f1].has_value());
  EXPECT_FALSE(m[Metric::auc].has_value());
  EXPECT_DOUBLE_EQ(*m[Metric::accuracy], 1.0);
  EXPECT_DOUBLE_EQ(*m[Metric::fpr], 0.0);
  EXPECT_THROW(compute_metrics({}, {}, {}), EvalError);
  EXPECT_THROW(compute_metrics({true}, {1, 2}, {true}), EvalError);
}

TEST(Metrics, MatchesBruteForceOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + static_cast<int>(rng() % 19);
    std::vector<bool> label(n), pred(n);
    std::vector<double> score(n);
    for (int i = 0; i < n; ++i) {
      label[i] = rng() % 2;
      score[i] = static_cast<double>(1 + rng() % 10);
      pred[i] = score[i] >= 6;
    }
    label[0] = true;
    label[1] = false;
    auto m = compute_metrics(pred, score, label);
    auto o = brute(pred, score, label);
    double pos = o.tp + o.fn, neg = o.fp + o.tn;
    EXPECT_EQ(*m[Metric::accuracy], (o.tp + o.tn) / n);
    EXPECT_EQ(*m[Metric::fpr], o.fp / neg);
    EXPECT_EQ(*m[Metric::fnr], o.fn / pos);
    EXPECT_EQ(*m[Metric::balanced_accuracy], (o.tp / pos + o.tn / neg) / 2);
    EXPECT_EQ(*m[Metric::auc], o.auc_wins / (pos * neg));
    if (o.tp + o.fp + o.fn > 0) {
      EXPECT_EQ(*m[Metric::f1], 2 * o.tp / (2 * o.tp + o.fp + o.fn));
    }
  }
}

TEST(Metrics, AlwaysRejectForcedRow) {
  auto labels = split(295, 205);
  BaselineOptions opts;
  opts.random_trials = 200;
  opts.bootstrap.resamples = 200;
  auto r = run_baselines(labels, opts).always_reject;
  EXPECT_DOUBLE_EQ(*r.point[Metric::accuracy], 0.59);
  EXPECT_DOUBLE_EQ(*r.point[Metric::f1], 0.0);
  EXPECT_DOUBLE_EQ(*r.point[Metric::fpr], 0.0);
  EXPECT_DOUBLE_EQ(*r.point[Metric::fnr], 1.0);
  EXPECT_DOUBLE_EQ(*r.point[Metric::balanced_accuracy], 0.5);
  EXPECT_DOUBLE_EQ(*r.point[Metric::auc], 0.5);
}

TEST(Metrics, RandomBaselineCentersOnChance) {
  auto labels = split(295, 205);
  BaselineOptions opts;
  opts.random_trials = 2000;
  opts.seed = 3;
  opts.bootstrap.resamples = 100;
  auto r = run_baselines(labels, opts).random;
  EXPECT_NEAR(*r.point[Metric::balanced_accuracy], 0.5, 0.02);
  EXPECT_NEAR(*r.point[Metric::accuracy], 0.5, 0.02);
  EXPECT_NEAR(*r.point[Metric::fpr], 0.5, 0.02);
  EXPECT_NEAR(*r.point[Metric::fnr], 0.5, 0.02);
  // F1 of a fair coin: 2p/(2p+1) with p = 205/500 positives.
  EXPECT_NEAR(*r.point[Metric::f1], 2 * 0.41 / (2 * 0.41 + 1), 0.02);
  auto ci = *r.ci[static_cast<int>(Metric::balanced_accuracy)];
  EXPECT_LT(ci.low, 0.5);
  EXPECT_GT(ci.high, 0.5);
}

TEST(Bootstrap, QuantileInterpolates) {
  std::vector<double> s{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(quantile(s, 0.0), 1);
  EXPECT_DOUBLE_EQ(quantile(s, 1.0), 5);
  EXPECT_DOUBLE_EQ(quantile(s, 0.5), 3);
  EXPECT_DOUBLE_EQ(quantile(s, 0.125), 1.5);
  EXPECT_THROW(quantile({}, 0.5), EvalError);
}

TEST(Bootstrap, DeterministicAcrossThreadCounts) {
  std::vector<bool> labels, pred;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    labels.push_back(rng() % 2);
    pred.push_back(rng() % 3 != 0 ? labels.back() : !labels.back());
  }
  Evaluator acc = [&](const std::vector<std::size_t>& idx) -> std::optional<double> {
    double hit = 0;
    for (auto i : idx) hit += pred[i] == labels[i];
    return hit / idx.size();
  };
  BootstrapOptions o;
  o.resamples = 2000;
  o.seed = 42;
  auto a = bootstrap_ci(acc, labels.size(), o);
  auto b = bootstrap_ci(acc, labels.size(), o);
  o.threads = 4;
  auto c = bootstrap_ci(acc, labels.size(), o);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  o.seed = 43;
  EXPECT_NE(bootstrap_ci(acc, labels.size(), o), a);
  EXPECT_LT(a.low, a.high);
}

TEST(Bootstrap, GoldenInterval) {
  std::vector<bool> labels{true, true, true, false, false, false, true, false, true, false};
  std::vector<bool> pred{true, false, true, false, true, false, true, false, false, false};
  BootstrapOptions o;
  o.resamples = 1000;
  o.seed = 2024;
  auto report = evaluate(pred, std::vector<double>(pred.begin(), pred.end()), labels, o);
  auto ci = *report.ci[static_cast<int>(Metric::accuracy)];
  EXPECT_DOUBLE_EQ(*report.point[Metric::accuracy], 0.7);
  EXPECT_DOUBLE_EQ(ci.low, 0.4);
  EXPECT_DOUBLE_EQ(ci.high, 1.0);
}

TEST(Bootstrap, IntervalContainsPointAndRejectsTinyBudgets) {
  std::vector<bool> labels{true, false, true, false, true, false};
  std::vector<bool> pred{true, false, false, false, true, true};
  BootstrapOptions o;
  o.resamples = 500;
  auto r = evaluate(pred, {1, 0, 0, 0, 1, 1}, labels, o);
  for (auto k : kMetrics) {
    auto ci = r.ci[static_cast<int>(k)];
    ASSERT_TRUE(ci.has_value()) << metric_name(k);
    EXPECT_LE(ci->low, *r.point[k]);
    EXPECT_GE(ci->high, *r.point[k]);
  }
  o.resamples = 99;
  EXPECT_THROW(bootstrap_ci([](const auto&) { return std::optional<double>(1.0); }, 5, o), EvalError);
}

TEST(Bootstrap, UndefinedEverywhereThrows) {
  BootstrapOptions o;
  o.resamples = 100;
  o.redraw_budget = 3;
  EXPECT_THROW(bootstrap_ci([](const auto&) { return std::optional<double>(); }, 5, o), EvalError);
}

TEST(Correlation, PearsonOracle) {
  EXPECT_NEAR(*pearson({1, 2, 3, 4, 5}, {2, 4, 5, 4, 5}), 6 / std::sqrt(60.0), 1e-12);
  EXPECT_NEAR(*pearson({1, 2, 3}, {3, 2, 1}), -1.0, 1e-12);
  EXPECT_FALSE(pearson({1, 1, 1}, {1, 2, 3}).has_value());
  EXPECT_FALSE(pearson({1}, {1}).has_value());
}

TEST(Correlation, HumanPairsMatchExhaustiveOrderings) {
  // With two scores per paper a draw only picks each paper's order, so every
  // trial lands on one of 2^4 orderings and the average converges to their mean.
  std::vector<std::vector<int>> humans{{3, 4}, {6, 7}, {5, 5}, {8, 6}};
  std::vector<double> llm{3, 7, 5, 7};
  std::vector<double> outcomes;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<double> a, b;
    for (int p = 0; p < 4; ++p) {
      bool swap = mask >> p & 1;
      a.push_back(humans[p][swap]);
      b.push_back(humans[p][!swap]);
    }
    outcomes.push_back(*pearson(a, b));
  }
  double exhaustive = std::accumulate(outcomes.begin(), outcomes.end(), 0.0) / outcomes.size();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    double one = *score_correlations(humans, llm, seed, 1).human_pairwise;
    EXPECT_TRUE(std::any_of(outcomes.begin(), outcomes.end(), [&](double v) { return std::abs(v - one) < 1e-12; }));
  }
  auto c = score_correlations(humans, llm, 1, 20000);
  EXPECT_NEAR(*c.human_pairwise, exhaustive, 0.02);
  std::vector<double> mean{3.5, 6.5, 5, 7};
  EXPECT_NEAR(*c.llm_vs_mean, *pearson(llm, mean), 1e-12);
  EXPECT_THROW(score_correlations({{3}}, {1}, 0, 1), EvalError);
}

TEST(Dataset, LoadEvaluateAndRender) {
  auto dir = testkit::make_temp_dir("dataset");
  struct Row {
    const char* id;
    const char* decision;
    std::vector<int> humans;
  } rows[] = {{"p1", "Accept", {7, 6}}, {"p2", "Reject", {3, 4}}, {"p3", "Accept", {6, 8}},
              {"p4", "Reject", {4, 2}}, {"p5", "Reject", {5, 6}}};
  for (const auto& r : rows) {
    nlohmann::json j{{"paper_id", r.id}, {"decision", r.decision}, {"human_scores", r.humans},
                     {"text", std::string("Paper ") + r.id}};
    std::ofstream(dir / (std::string(r.id) + ".json")) << j.dump();
  }
  auto papers = load_dataset(dir);
  ASSERT_EQ(papers.size(), 5u);
  EXPECT_EQ(papers[0].paper_id, "p1");
  EXPECT_TRUE(papers[0].accept);
  EXPECT_EQ(paper_text(papers[1]), "Paper p2");

  std::map<std::string, int> overall{{"p1", 7}, {"p2", 3}, {"p3", 5}, {"p4", 4}, {"p5", 6}};
  EvalOptions opts;
  opts.baselines.random_trials = 500;
  opts.baselines.bootstrap.resamples = 200;
  auto report = evaluate_reviewer(papers, overall, "Stub Reviewer", opts);
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_EQ(report.rows[2].name, "Stub Reviewer");
  // p1 accepted correctly, p5 wrongly; p3 missed.
  EXPECT_DOUBLE_EQ(*report.rows[2].metrics.point[Metric::accuracy], 0.6);
  ASSERT_TRUE(report.correlations.has_value());

  auto text = render_report(report, ReportFormat::text);
  for (auto m : kMetrics) EXPECT_NE(text.find(metric_name(m)), std::string::npos);
  EXPECT_NE(text.find("Always Reject"), std::string::npos);
  auto csv = render_report(report, ReportFormat::csv);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  // Balanced accuracy leads: (1/2 + 2/3) / 2.
  EXPECT_NE(csv.find("Stub Reviewer,5,6,0.5833,"), std::string::npos) << csv;

  auto scores = render_scores_csv(papers, overall);
  EXPECT_NE(scores.find("p1,Accept,7,6.500,7;6"), std::string::npos);

  overall.erase("p3");
  EXPECT_THROW(evaluate_reviewer(papers, overall, "x", opts), EvalError);
}

TEST(Dataset, RejectsDuplicatesAndBadDecisions) {
  auto dir = testkit::make_temp_dir("dataset-bad");
  std::ofstream(dir / "a.json") << R"({"paper_id": "x", "decision": "Accept", "text": "t"})";
  std::ofstream(dir / "b.json") << R"({"paper_id": "x", "decision": "Reject", "text": "t"})";
  EXPECT_THROW(load_dataset(dir), EvalError);
  auto dir2 = testkit::make_temp_dir("dataset-bad2");
  std::ofstream(dir2 / "a.json") << R"({"paper_id": "y", "decision": "Maybe", "text": "t"})";
  EXPECT_THROW(load_dataset(dir2), Error);
}
