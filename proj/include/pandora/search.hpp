#pragma once

// Ratio-rule sequential search: classes are tested in descending order of
// p_k / c_k until the true class is reached. Ties in the ratio are broken by
// ascending class index, so every trace is reproducible.

#include <cstddef>
#include <span>
#include <vector>

#include "pandora/forecast.hpp"

namespace pandora {

// One realized cost vector c_k > 0.
class RealizedCosts {
 public:
  explicit RealizedCosts(std::vector<double> costs);

  std::size_t size() const { return costs_.size(); }
  double operator[](std::size_t k) const { return costs_[k]; }
  std::span<const double> values() const { return costs_; }

  friend bool operator==(const RealizedCosts&, const RealizedCosts&) = default;

 private:
  std::vector<double> costs_;
};

struct SearchTrace {
  std::vector<std::size_t> order;   // classes tested, ending with the true class
  std::vector<double> step_costs;   // cumulative cost after each test
  std::size_t stop_step = 0;        // order[stop_step] is the true class
  double total_cost = 0.0;
};

// Imperfect-test model: sensitivity s_k in (0, 1], false-positive rate
// f_k in [0, 1), confirmatory workup cost C_k >= 0.
struct TestCharacteristics {
  std::vector<double> sensitivity;
  std::vector<double> false_positive_rate;
  std::vector<double> confirm_cost;

  static TestCharacteristics perfect(std::size_t k);
  std::size_t size() const { return sensitivity.size(); }
  // Throws DomainError on a zero sensitivity, ConfigError on ragged vectors.
  void validate() const;
};

struct TreatmentPayoffs {
  std::vector<double> benefit;         // B_j
  std::vector<double> harm;            // r_j
  std::vector<double> untreated_cost;  // D_j
};

// True when class a is tested before class b under the ratio rule.
// Compares p_a c_b against p_b c_a to avoid forming the ratios.
bool tested_before(const Forecast& f, std::span<const double> costs, std::size_t a, std::size_t b);

std::vector<std::size_t> search_order(const Forecast& f, const RealizedCosts& costs);

SearchTrace simulate_search(const LabeledForecast& lf, const RealizedCosts& costs);

// simulate_search(lf, costs).total_cost without building the trace. Used by
// the Monte Carlo engines; costs.size() must equal K (checked by callers).
double search_cost(const LabeledForecast& lf, std::span<const double> costs);

// Mean total cost over a dataset sharing one cost vector. Accumulates left to
// right. Throws DomainError on an empty dataset.
double aggregate_cost(std::span<const LabeledForecast> dataset, const RealizedCosts& costs);

// (c_k + f_k C_k) / s_k. Ordering by p_k over the result equals ordering by
// the index s_k p_k / (c_k + f_k C_k).
RealizedCosts effective_costs(const RealizedCosts& base, const TestCharacteristics& tc);

// s_j (B_j - r_j) - (1 - s_j) D_j. Depends on the true class only, so it
// shifts every ordering by the same amount and is never added to traces.
double treatment_payoff(const TestCharacteristics& tc, const TreatmentPayoffs& tp, std::size_t class_index);

}  // namespace pandora
