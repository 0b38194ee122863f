#pragma once

// Standard multiclass metrics and the decision models behind them: log loss
// read as parallel or fixed-order threshold decisions, accuracy, and macro-F1
// with its greedy marginal-gain rule.

#include <cstddef>
#include <span>
#include <vector>

#include "pandora/forecast.hpp"

namespace pandora {

// -ln p_i (clamped).
double log_loss(const LabeledForecast& lf);

// Per-class integrated risks of K independent threshold decisions under the
// dc/c measure: R_i = p_i - ln p_i for the true class, R_k = p_k otherwise.
std::vector<double> parallel_decision_risks(const LabeledForecast& lf);

// Sum of parallel_decision_risks; equals 1 - ln p_i on the simplex.
double parallel_decision_cost(const LabeledForecast& lf);

// Threshold weight w(c) = a / c + b / (1 - c). a = b = 1 is the Haldane measure.
struct HaldaneParams {
  double a = 1.0;
  double b = 1.0;

  void validate() const;
};

// Integrated stepwise regret of a fixed search order under weight w:
//   false step t:  (a - b) h_t - b ln(1 - h_t)
//   true step m:   a (-ln h_m - (1 - h_m)) + b (1 - h_m)
// with h_t = p_sigma(t) / (remaining mass). Returns +infinity when a false
// step has h_t == 1 and b > 0 (the integral diverges). Throws DomainError if
// `order` is not a permutation of [0, K).
double fixed_order_regret(const LabeledForecast& lf, std::span<const std::size_t> order, const HaldaneParams& params);

// 1 - 1(argmax p == i): accuracy as a per-instance loss.
double top1_loss(const LabeledForecast& lf);

// Fraction of instances whose argmax (lowest index on ties) is the label.
double accuracy(std::span<const LabeledForecast> dataset);

struct ConfusionCounts {
  std::vector<long> tp, fp, fn;

  explicit ConfusionCounts(std::size_t k = 0) : tp(k, 0), fp(k, 0), fn(k, 0) {}
  static ConfusionCounts from_dataset(std::span<const LabeledForecast> dataset);

  std::size_t size() const { return tp.size(); }
  void add(std::size_t truth, std::size_t predicted);
  long denominator(std::size_t k) const { return 2 * tp[k] + fp[k] + fn[k]; }
  // 2TP / D, or 0 when D == 0.
  double f1(std::size_t k) const;
  double macro_f1() const;
};

double macro_f1(std::span<const LabeledForecast> dataset);

struct F1Marginals {
  double delta_tp;      // F1_k gain from one more true positive
  double delta_fp_abs;  // |F1_k change| from one more false positive (== false negative)
};

// Exact discrete marginals. Throws DomainError when D_k == 0; counts are
// never smoothed implicitly.
F1Marginals f1_marginals(const ConfusionCounts& counts, std::size_t k);

// p_k (dTP_k + 2|dFP_k|) - |dFP_k|, the per-class objective of the greedy rule.
double f1_greedy_objective(const Forecast& f, const ConfusionCounts& counts, std::size_t k);

// argmax_k of f1_greedy_objective, lowest index on ties.
std::size_t f1_greedy_decision(const Forecast& f, const ConfusionCounts& counts);

// Large-D_k form (p_k - F1_k / 2) / D_k of the same objective, up to a
// common positive factor. For limit checks only.
double f1_asymptotic_objective(const Forecast& f, const ConfusionCounts& counts, std::size_t k);

}  // namespace pandora
