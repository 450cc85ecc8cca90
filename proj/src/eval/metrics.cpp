#include "scientist/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace scientist::eval {

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::balanced_accuracy: return "Balanced Acc.";
    case Metric::accuracy: return "Accuracy";
    case Metric::f1: return "F1 Score";
    case Metric::auc: return "AUC";
    case Metric::fpr: return "FPR";
    case Metric::fnr: return "FNR";
  }
  return "?";
}

Confusion confusion(const std::vector<bool>& predictions, const std::vector<bool>& labels) {
  if (predictions.size() != labels.size()) throw EvalError("predictions and labels differ in length");
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) {
      predictions[i] ? ++c.tp : ++c.fn;
    } else {
      predictions[i] ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

std::optional<double> roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) throw EvalError("scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  // Mid-ranks for ties, then the Mann-Whitney U of the positive class.
  double pos_rank_sum = 0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        pos_rank_sum += mid;
        ++pos;
      }
    }
    i = j;
  }
  std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) return std::nullopt;
  double u = pos_rank_sum - static_cast<double>(pos) * (pos + 1) / 2.0;
  return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

namespace {

std::optional<double> from_counts(Metric k, const Confusion& c) {
  const double pos = c.tp + c.fn, neg = c.fp + c.tn;
  switch (k) {
    case Metric::accuracy: return static_cast<double>(c.tp + c.tn) / c.n();
    case Metric::fnr: return pos > 0 ? std::optional<double>(c.fn / pos) : std::nullopt;
    case Metric::fpr: return neg > 0 ? std::optional<double>(c.fp / neg) : std::nullopt;
    case Metric::balanced_accuracy:
      return pos > 0 && neg > 0 ? std::optional<double>((c.tp / pos + c.tn / neg) / 2.0) : std::nullopt;
    case Metric::f1:
      return 2 * c.tp + c.fp + c.fn > 0 ? std::optional<double>(2.0 * c.tp / (2.0 * c.tp + c.fp + c.fn))
                                        : std::nullopt;
    case Metric::auc: break;
  }
  return std::nullopt;
}

}  // namespace

PointMetrics compute_metrics(const std::vector<bool>& predictions, const std::vector<double>& scores,
                             const std::vector<bool>& labels) {
  if (labels.empty()) throw EvalError("no samples");
  if (scores.size() != labels.size()) throw EvalError("scores and labels differ in length");
  PointMetrics m;
  m.counts = confusion(predictions, labels);
  for (auto k : kMetrics) m.values[static_cast<int>(k)] = k == Metric::auc ? roc_auc(scores, labels) : from_counts(k, m.counts);
  return m;
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw EvalError("quantile of an empty sample");
  double h = q * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(h));
  auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over the combined input.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Interval bootstrap_ci(const Evaluator& evaluator, std::size_t n, const BootstrapOptions& options) {
  if (options.resamples < 100) throw EvalError("bootstrap needs at least 100 resamples");
  if (!(options.level > 0 && options.level < 1)) throw EvalError("confidence level must lie in (0, 1)");
  if (n == 0) throw EvalError("bootstrap over an empty dataset");
  std::vector<std::optional<double>> values(options.resamples);
  auto work = [&](int begin, int end) {
    std::vector<std::size_t> idx(n);
    for (int r = begin; r < end; ++r) {
      std::mt19937_64 rng(derive_seed(options.seed, static_cast<std::uint64_t>(r)));
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (int draw = 0; draw < std::max(1, options.redraw_budget); ++draw) {
        for (auto& i : idx) i = pick(rng);
        if (auto v = evaluator(idx)) {
          values[r] = v;
          break;
        }
      }
    }
  };
  int threads = std::clamp(options.threads, 1, options.resamples);
  if (threads == 1) {
    work(0, options.resamples);
  } else {
    std::vector<std::thread> pool;
    int chunk = (options.resamples + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back(work, t * chunk, std::min(options.resamples, (t + 1) * chunk));
    }
    for (auto& th : pool) th.join();
  }
  std::vector<double> defined;
  for (const auto& v : values) {
    if (v) defined.push_back(*v);
  }
  if (defined.empty()) throw EvalError("metric undefined on every resample");
  std::sort(defined.begin(), defined.end());
  double alpha = (1.0 - options.level) / 2.0;
  return {quantile(defined, alpha), quantile(defined, 1.0 - alpha)};
}

namespace {

template <typename T>
std::vector<T> take(const std::vector<T>& v, const std::vector<std::size_t>& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

Interval contain(Interval ci, std::optional<double> point) {
  if (point) {
    ci.low = std::min(ci.low, *point);
    ci.high = std::max(ci.high, *point);
  }
  return ci;
}

}  // namespace

MetricsReport evaluate(const std::vector<bool>& predictions, const std::vector<double>& scores,
                       const std::vector<bool>& labels, const BootstrapOptions& options) {
  MetricsReport report;
  report.point = compute_metrics(predictions, scores, labels);
  report.n = static_cast<int>(labels.size());
  for (auto m : kMetrics) {
    Evaluator ev = [&](const std::vector<std::size_t>& idx) -> std::optional<double> {
      if (m == Metric::auc) return roc_auc(take(scores, idx), take(labels, idx));
      Confusion c;
      for (auto i : idx) {
        if (labels[i]) {
          predictions[i] ? ++c.tp : ++c.fn;
        } else {
          predictions[i] ? ++c.fp : ++c.tn;
        }
      }
      return from_counts(m, c);
    };
    try {
      report.ci[static_cast<int>(m)] = contain(bootstrap_ci(ev, labels.size(), options), report.point[m]);
    } catch (const EvalError&) {
      report.ci[static_cast<int>(m)] = std::nullopt;
    }
  }
  return report;
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw EvalError("correlation inputs differ in length");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

Correlations score_correlations(const std::vector<std::vector<int>>& human_scores,
                                const std::vector<double>& llm_scores, std::uint64_t seed, int trials) {
  if (human_scores.size() != llm_scores.size()) throw EvalError("human and model scores differ in length");
  if (trials < 1) throw EvalError("trials must be positive");
  Correlations out;
  std::vector<double> means;
  for (const auto& s : human_scores) {
    if (s.size() < 2) throw EvalError("every paper needs at least two human scores");
    means.push_back(std::accumulate(s.begin(), s.end(), 0.0) / s.size());
  }
  out.llm_vs_mean = pearson(llm_scores, means);

  double sum = 0;
  int defined = 0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<double> a, b;
    for (const auto& s : human_scores) {
      std::uniform_int_distribution<std::size_t> first(0, s.size() - 1), second(0, s.size() - 2);
      auto i = first(rng);
      auto j = second(rng);
      if (j >= i) ++j;
      a.push_back(s[i]);
      b.push_back(s[j]);
    }
    if (auto r = pearson(a, b)) {
      sum += *r;
      ++defined;
    }
  }
  if (defined > 0) out.human_pairwise = sum / defined;
  return out;
}

BaselineReports run_baselines(const std::vector<bool>& labels, const BaselineOptions& options) {
  if (labels.empty()) throw EvalError("no samples");
  if (options.random_trials < 1) throw EvalError("random baseline needs at least one trial");
  BaselineReports out;
  std::vector<bool> reject(labels.size(), false);
  std::vector<double> constant(labels.size(), 0.0);
  out.always_reject = evaluate(reject, constant, labels, options.bootstrap);

  std::array<std::vector<double>, 6> samples;
  std::vector<bool> coin(labels.size());
  std::vector<double> coin_scores(labels.size());
  for (int t = 0; t < options.random_trials; ++t) {
    std::mt19937_64 rng(derive_seed(options.seed, static_cast<std::uint64_t>(t)));
    std::bernoulli_distribution flip(0.5);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      coin[i] = flip(rng);
      coin_scores[i] = coin[i] ? 1.0 : 0.0;
    }
    auto m = compute_metrics(coin, coin_scores, labels);
    for (auto k : kMetrics) {
      if (auto v = m[k]) samples[static_cast<int>(k)].push_back(*v);
    }
  }
  out.random.n = static_cast<int>(labels.size());
  double alpha = (1.0 - options.bootstrap.level) / 2.0;
  for (auto k : kMetrics) {
    auto& s = samples[static_cast<int>(k)];
    if (s.empty()) continue;
    double mean = std::accumulate(s.begin(), s.end(), 0.0) / s.size();
    std::sort(s.begin(), s.end());
    out.random.point.values[static_cast<int>(k)] = mean;
    out.random.ci[static_cast<int>(k)] = contain({quantile(s, alpha), quantile(s, 1 - alpha)}, mean);
  }
  return out;
}

}  // namespace scientist::eval
