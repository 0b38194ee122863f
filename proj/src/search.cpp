#include "pandora/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pandora/errors.hpp"

namespace pandora {
namespace {

void check_dims(std::size_t k, std::size_t n_costs) {
  if (k != n_costs) {
    throw ConfigError("cost vector has " + std::to_string(n_costs) + " entries, forecast has " + std::to_string(k));
  }
}

void sort_by_ratio(const Forecast& f, std::span<const double> costs, std::vector<std::size_t>& idx) {
  idx.resize(f.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return tested_before(f, costs, a, b); });
}

}  // namespace

RealizedCosts::RealizedCosts(std::vector<double> costs) : costs_(std::move(costs)) {
  for (double c : costs_) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("realized costs must be finite and > 0");
  }
}

TestCharacteristics TestCharacteristics::perfect(std::size_t k) {
  return {std::vector<double>(k, 1.0), std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
}

void TestCharacteristics::validate() const {
  const std::size_t k = sensitivity.size();
  if (false_positive_rate.size() != k || confirm_cost.size() != k) {
    throw ConfigError("test characteristic vectors must all have the same length");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!(sensitivity[i] > 0.0)) throw DomainError("sensitivity must be > 0 (class " + std::to_string(i) + ")");
    if (sensitivity[i] > 1.0) throw DomainError("sensitivity must be <= 1 (class " + std::to_string(i) + ")");
    if (false_positive_rate[i] < 0.0 || false_positive_rate[i] >= 1.0) {
      throw DomainError("false-positive rate must lie in [0, 1) (class " + std::to_string(i) + ")");
    }
    if (confirm_cost[i] < 0.0) throw DomainError("confirmatory cost must be >= 0 (class " + std::to_string(i) + ")");
  }
}

bool tested_before(const Forecast& f, std::span<const double> costs, std::size_t a, std::size_t b) {
  const double lhs = f.clamped(a) * costs[b];
  const double rhs = f.clamped(b) * costs[a];
  if (lhs != rhs) return lhs > rhs;
  return a < b;
}

std::vector<std::size_t> search_order(const Forecast& f, const RealizedCosts& costs) {
  check_dims(f.size(), costs.size());
  std::vector<std::size_t> idx;
  sort_by_ratio(f, costs.values(), idx);
  return idx;
}

SearchTrace simulate_search(const LabeledForecast& lf, const RealizedCosts& costs) {
  const std::vector<std::size_t> full = search_order(lf.forecast, costs);
  SearchTrace trace;
  double running = 0.0;
  for (std::size_t step = 0; step < full.size(); ++step) {
    const std::size_t k = full[step];
    running += costs[k];
    trace.order.push_back(k);
    trace.step_costs.push_back(running);
    if (k == lf.true_class) {
      trace.stop_step = step;
      break;
    }
  }
  trace.total_cost = running;
  return trace;
}

double search_cost(const LabeledForecast& lf, std::span<const double> costs) {
  thread_local std::vector<std::size_t> idx;
  sort_by_ratio(lf.forecast, costs, idx);
  double running = 0.0;
  for (std::size_t k : idx) {
    running += costs[k];
    if (k == lf.true_class) break;
  }
  return running;
}

double aggregate_cost(std::span<const LabeledForecast> dataset, const RealizedCosts& costs) {
  if (dataset.empty()) throw DomainError("aggregate_cost needs a nonempty dataset");
  double total = 0.0;
  for (const auto& lf : dataset) {
    check_dims(lf.size(), costs.size());
    total += search_cost(lf, costs.values());
  }
  return total / static_cast<double>(dataset.size());
}

RealizedCosts effective_costs(const RealizedCosts& base, const TestCharacteristics& tc) {
  tc.validate();
  check_dims(base.size(), tc.size());
  std::vector<double> out(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) {
    out[k] = (base[k] + tc.false_positive_rate[k] * tc.confirm_cost[k]) / tc.sensitivity[k];
  }
  return RealizedCosts(std::move(out));
}

double treatment_payoff(const TestCharacteristics& tc, const TreatmentPayoffs& tp, std::size_t class_index) {
  const std::size_t k = tc.sensitivity.size();
  if (tp.benefit.size() != k || tp.harm.size() != k || tp.untreated_cost.size() != k) {
    throw ConfigError("treatment payoff vectors must match the test characteristics");
  }
  if (class_index >= k) throw DomainError("class index " + std::to_string(class_index) + " out of range");
  const double s = tc.sensitivity[class_index];
  return s * (tp.benefit[class_index] - tp.harm[class_index]) - (1.0 - s) * tp.untreated_cost[class_index];
}

}  // namespace pandora
