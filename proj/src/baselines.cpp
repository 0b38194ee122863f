#include "pandora/baselines.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pandora/errors.hpp"

namespace pandora {

double log_loss(const LabeledForecast& lf) { return -std::log(lf.forecast.clamped(lf.true_class)); }

std::vector<double> parallel_decision_risks(const LabeledForecast& lf) {
  std::vector<double> risks(lf.size());
  for (std::size_t k = 0; k < lf.size(); ++k) risks[k] = lf.forecast[k];
  const double pi = lf.forecast.clamped(lf.true_class);
  // int_0^p c (1/c) dc + int_p^1 (1/c) dc
  risks[lf.true_class] = pi - std::log(pi);
  return risks;
}

double parallel_decision_cost(const LabeledForecast& lf) {
  double total = 0.0;
  for (double r : parallel_decision_risks(lf)) total += r;
  return total;
}

void HaldaneParams::validate() const {
  if (!(a >= 0.0) || !(b >= 0.0) || !(a + b > 0.0)) {
    throw DomainError("threshold weights need a, b >= 0 and a + b > 0");
  }
}

double fixed_order_regret(const LabeledForecast& lf, std::span<const std::size_t> order, const HaldaneParams& params) {
  params.validate();
  const std::size_t k = lf.size();
  if (order.size() != k) throw DomainError("search order must list every class exactly once");
  std::vector<bool> seen(k, false);
  for (std::size_t c : order) {
    if (c >= k || seen[c]) throw DomainError("search order must be a permutation of the classes");
    seen[c] = true;
  }

  // Tail masses S_{t-1}, summed from the back so the last one is exact.
  std::vector<double> remaining(k + 1, 0.0);
  for (std::size_t t = k; t-- > 0;) remaining[t] = remaining[t + 1] + lf.forecast.clamped(order[t]);

  const double a = params.a;
  const double b = params.b;
  double total = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    const double h = lf.forecast.clamped(order[t]) / remaining[t];
    // 1 - h as a ratio of tail masses, exact where h is close to 1.
    const double miss = remaining[t + 1] / remaining[t];
    if (order[t] == lf.true_class) {
      return total + a * (-std::log(h) - miss) + b * miss;
    }
    if (miss == 0.0) {
      if (b > 0.0) return std::numeric_limits<double>::infinity();
      total += a;
      continue;
    }
    total += (a - b) * h - b * std::log(miss);
  }
  return total;  // unreachable: the true class is in the permutation
}

double top1_loss(const LabeledForecast& lf) { return lf.forecast.argmax() == lf.true_class ? 0.0 : 1.0; }

double accuracy(std::span<const LabeledForecast> dataset) {
  if (dataset.empty()) throw DomainError("accuracy needs a nonempty dataset");
  std::size_t hits = 0;
  for (const auto& lf : dataset) hits += lf.forecast.argmax() == lf.true_class ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(dataset.size());
}

ConfusionCounts ConfusionCounts::from_dataset(std::span<const LabeledForecast> dataset) {
  if (dataset.empty()) throw DomainError("confusion counts need a nonempty dataset");
  ConfusionCounts counts(dataset.front().size());
  for (const auto& lf : dataset) {
    if (lf.size() != counts.size()) throw ConfigError("all forecasts in a dataset must share K");
    counts.add(lf.true_class, lf.forecast.argmax());
  }
  return counts;
}

void ConfusionCounts::add(std::size_t truth, std::size_t predicted) {
  if (truth == predicted) {
    ++tp[truth];
  } else {
    ++fp[predicted];
    ++fn[truth];
  }
}

double ConfusionCounts::f1(std::size_t k) const {
  const long d = denominator(k);
  return d == 0 ? 0.0 : 2.0 * static_cast<double>(tp[k]) / static_cast<double>(d);
}

double ConfusionCounts::macro_f1() const {
  double total = 0.0;
  for (std::size_t k = 0; k < size(); ++k) total += f1(k);
  return total / static_cast<double>(size());
}

double macro_f1(std::span<const LabeledForecast> dataset) {
  if (dataset.empty()) throw DomainError("macro_f1 needs a nonempty dataset");
  return ConfusionCounts::from_dataset(dataset).macro_f1();
}

F1Marginals f1_marginals(const ConfusionCounts& counts, std::size_t k) {
  if (k >= counts.size()) throw DomainError("class index out of range");
  const long d = counts.denominator(k);
  if (d == 0) throw DomainError("F1 marginals undefined for class " + std::to_string(k) + " with no counts");
  const double dd = static_cast<double>(d);
  return {2.0 * static_cast<double>(counts.fp[k] + counts.fn[k]) / (dd * (dd + 2.0)),
          2.0 * static_cast<double>(counts.tp[k]) / (dd * (dd + 1.0))};
}

double f1_greedy_objective(const Forecast& f, const ConfusionCounts& counts, std::size_t k) {
  const F1Marginals m = f1_marginals(counts, k);
  return f[k] * (m.delta_tp + 2.0 * m.delta_fp_abs) - m.delta_fp_abs;
}

std::size_t f1_greedy_decision(const Forecast& f, const ConfusionCounts& counts) {
  if (f.size() != counts.size()) throw ConfigError("forecast and confusion counts disagree on K");
  std::size_t best = 0;
  double best_value = f1_greedy_objective(f, counts, 0);
  for (std::size_t k = 1; k < f.size(); ++k) {
    const double v = f1_greedy_objective(f, counts, k);
    if (v > best_value) {
      best = k;
      best_value = v;
    }
  }
  return best;
}

double f1_asymptotic_objective(const Forecast& f, const ConfusionCounts& counts, std::size_t k) {
  const long d = counts.denominator(k);
  if (d == 0) throw DomainError("asymptotic F1 objective undefined with no counts");
  return (f[k] - counts.f1(k) / 2.0) / static_cast<double>(d);
}

}  // namespace pandora
