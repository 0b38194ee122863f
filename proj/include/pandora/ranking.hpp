#pragma once

// Meta-evaluation of metrics: rank a zoo of models by each metric and by
// simulated search cost, and measure agreement with Kendall's tau-b plus
// instance-bootstrap confidence intervals.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pandora/forecast.hpp"
#include "pandora/scoring.hpp"
#include "pandora/search.hpp"

namespace pandora {

// Tau-b over all pairs, O(n^2). Returns 0 when either list is constant
// (the coefficient is undefined there). Throws DomainError on a length
// mismatch or n < 2.
double kendall_tau(std::span<const double> a, std::span<const double> b);

struct ModelZooSpec {
  std::size_t n_models = 20;
  std::size_t num_classes = 7;
  std::size_t n_instances = 2000;
  // Ground-truth class distributions are Dirichlet(concentration * 1).
  double dirichlet_concentration = 1.0;
  // Model m has severity s = m / (n_models - 1); its logits get Gaussian
  // noise with sd s * max_noise_scale and its temperature is
  // exp(+-s * max_log_temperature), the sign alternating between models.
  double max_noise_scale = 1.5;
  double max_log_temperature = 1.0;
  std::uint64_t seed = 42;

  void validate() const;
};

struct ModelPredictions {
  std::string name;
  double severity = 0.0;
  double noise_scale = 0.0;
  double temperature = 1.0;
  std::vector<Forecast> forecasts;
};

struct ModelZoo {
  std::vector<Forecast> truth;  // empty when the zoo was loaded from files
  std::vector<std::size_t> labels;
  std::vector<ModelPredictions> models;
};

ModelZoo generate_zoo(const ModelZooSpec& spec);

// softmax(log p / T); T == 1 returns the forecast unchanged.
Forecast temperature_scale(const Forecast& f, double temperature);

// Holds p_label fixed and redistributes 1 - p_label over the other classes in
// proportion to p_j^(1/T). T = +infinity spreads it uniformly.
Forecast distractor_temperature(const Forecast& f, std::size_t label, double temperature);

struct Condition {
  enum class Kind { kClinical, kWellSpecified, kRandomTemperature, kDistractorTemperature };

  Kind kind = Kind::kWellSpecified;
  // Required for kClinical. For the temperature conditions, when present it
  // replaces the Unif[0,1] cost draws.
  std::optional<BaseCosts> clinical_costs;
  // sigma of the per-model LogNormal(0, sigma) temperature.
  double log_sigma = 0.5;
  // Number of shared Unif[0,1]^K cost vectors (one per repetition).
  std::size_t cost_draws = 10;
  std::uint64_t seed = 42;

  static Kind parse_kind(const std::string& name);
  std::string describe() const;
  void validate(std::size_t k) const;
};

std::string to_string(Condition::Kind kind);

struct ConditionedZoo {
  std::vector<std::vector<Forecast>> forecasts;  // [model][instance]
  std::vector<double> temperatures;              // per model; 1 when unperturbed
  std::vector<RealizedCosts> cost_vectors;       // shared by every model
};

ConditionedZoo apply_condition(std::span<const ModelPredictions> models, std::span<const std::size_t> labels,
                               const Condition& condition);

enum class Metric { kPandora, kLogLoss, kAccuracy, kMacroF1, kSimulatedCost };

std::string to_string(Metric m);
Metric parse_metric(const std::string& name);
inline const std::vector<Metric>& default_rank_metrics() {
  static const std::vector<Metric> all = {Metric::kPandora, Metric::kLogLoss, Metric::kAccuracy, Metric::kMacroF1,
                                          Metric::kSimulatedCost};
  return all;
}

struct MetricRow {
  Metric metric;
  double tau = 0.0;      // mean signed tau over cost draws
  double abs_tau = 0.0;  // mean |tau| over cost draws
  double ci_low = 0.0;
  double ci_high = 0.0;
  double gap = 0.0;  // abs_tau - abs_tau(Pandora)
  double gap_ci_low = 0.0;
  double gap_ci_high = 0.0;
  std::vector<double> abs_tau_per_draw;
};

struct RankingReport {
  std::string condition;
  std::uint64_t seed = 0;
  std::size_t n_models = 0;
  std::size_t n_instances = 0;
  std::size_t bootstrap_reps = 0;
  double ci_level = 0.95;
  std::vector<RealizedCosts> cost_vectors;
  std::vector<std::string> model_names;
  std::vector<double> model_temperatures;
  std::vector<MetricRow> rows;
  // [metric row][model] point values, plus the pooled simulated cost.
  std::vector<std::vector<double>> metric_values;
  std::vector<double> simulated_cost;
};

inline constexpr std::size_t kMinBootstrapReps = 200;
inline constexpr const char* kBootstrapUnit = "instances, with replacement";

// Percentile intervals; each is widened if needed to contain its point
// estimate.
std::vector<RankingReport> run_meta_eval(const ModelZoo& zoo, std::span<const Condition> conditions,
                                         std::span<const Metric> metrics, std::size_t bootstrap_reps,
                                         double ci_level = 0.95);

}  // namespace pandora
