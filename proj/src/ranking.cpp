#include "pandora/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "pandora/baselines.hpp"
#include "pandora/errors.hpp"
#include "pandora/rng.hpp"

namespace pandora {
namespace {

// Substream ids, so that each consumer of a seed sees independent draws.
enum Stream : std::uint64_t {
  kTruthStream = 1,
  kModelStreamBase = 1000,
  kTemperatureStream = 2,
  kCostStream = 3,
  kBootstrapStream = 4,
};

int sign(double x) { return (x > 0.0) - (x < 0.0); }

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Per-instance quantities for every (model, instance), computed once.
struct InstanceTable {
  std::size_t n_models = 0;
  std::size_t n_instances = 0;
  std::size_t k = 0;
  std::vector<std::vector<double>> pandora, log_loss, hit;
  std::vector<std::vector<std::size_t>> predicted;
  std::vector<std::vector<std::vector<double>>> cost;  // [draw][model][instance]
};

InstanceTable tabulate(const ConditionedZoo& cz, std::span<const std::size_t> labels) {
  InstanceTable t;
  t.n_models = cz.forecasts.size();
  t.n_instances = labels.size();
  t.k = cz.forecasts.front().front().size();
  auto grid = [&] { return std::vector<std::vector<double>>(t.n_models, std::vector<double>(t.n_instances)); };
  t.pandora = grid();
  t.log_loss = grid();
  t.hit = grid();
  t.predicted.assign(t.n_models, std::vector<std::size_t>(t.n_instances));
  t.cost.assign(cz.cost_vectors.size(), grid());
  for (std::size_t m = 0; m < t.n_models; ++m) {
    for (std::size_t n = 0; n < t.n_instances; ++n) {
      const LabeledForecast lf(cz.forecasts[m][n], labels[n]);
      t.pandora[m][n] = pandora_regret(lf);
      t.log_loss[m][n] = log_loss(lf);
      t.predicted[m][n] = lf.forecast.argmax();
      t.hit[m][n] = t.predicted[m][n] == labels[n] ? 1.0 : 0.0;
      for (std::size_t r = 0; r < cz.cost_vectors.size(); ++r) {
        t.cost[r][m][n] = search_cost(lf, cz.cost_vectors[r].values());
      }
    }
  }
  return t;
}

double mean_over(const std::vector<double>& row, std::span<const std::size_t> idx) {
  double total = 0.0;
  for (std::size_t n : idx) total += row[n];
  return total / static_cast<double>(idx.size());
}

struct Evaluation {
  // [row][draw] signed tau
  std::vector<std::vector<double>> tau;
  std::vector<std::vector<double>> metric_values;  // [row][model]
  std::vector<double> pooled_cost;                 // [model]
};

// Rows are `rows`; the Pandora reference is expected at rows[0].
Evaluation evaluate(const InstanceTable& t, std::span<const Metric> rows, std::span<const std::size_t> labels,
                    std::span<const std::size_t> idx) {
  const std::size_t draws = t.cost.size();
  std::vector<std::vector<double>> sim(draws, std::vector<double>(t.n_models));
  Evaluation ev;
  ev.pooled_cost.assign(t.n_models, 0.0);
  for (std::size_t r = 0; r < draws; ++r) {
    for (std::size_t m = 0; m < t.n_models; ++m) {
      sim[r][m] = mean_over(t.cost[r][m], idx);
      ev.pooled_cost[m] += sim[r][m] / static_cast<double>(draws);
    }
  }
  for (Metric metric : rows) {
    std::vector<double> values(t.n_models);
    for (std::size_t m = 0; m < t.n_models; ++m) {
      switch (metric) {
        case Metric::kPandora:
          values[m] = mean_over(t.pandora[m], idx);
          break;
        case Metric::kLogLoss:
          values[m] = mean_over(t.log_loss[m], idx);
          break;
        case Metric::kAccuracy:
          values[m] = mean_over(t.hit[m], idx);
          break;
        case Metric::kMacroF1: {
          ConfusionCounts counts(t.k);
          for (std::size_t n : idx) counts.add(labels[n], t.predicted[m][n]);
          values[m] = counts.macro_f1();
          break;
        }
        case Metric::kSimulatedCost:
          values[m] = ev.pooled_cost[m];
          break;
      }
    }
    std::vector<double> taus(draws);
    for (std::size_t r = 0; r < draws; ++r) {
      taus[r] = kendall_tau(metric == Metric::kSimulatedCost ? sim[r] : values, sim[r]);
    }
    ev.tau.push_back(std::move(taus));
    ev.metric_values.push_back(std::move(values));
  }
  return ev;
}

double mean_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s / static_cast<double>(v.size());
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

}  // namespace

double kendall_tau(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("kendall_tau: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) throw DomainError("kendall_tau needs at least 2 observations");
  long long concordant_minus_discordant = 0;
  long long ties_a = 0;
  long long ties_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int sa = sign(a[i] - a[j]);
      const int sb = sign(b[i] - b[j]);
      if (sa == 0) ++ties_a;
      if (sb == 0) ++ties_b;
      concordant_minus_discordant += sa * sb;
    }
  }
  const auto pairs = static_cast<long long>(n * (n - 1) / 2);
  const double denom = std::sqrt(static_cast<double>(pairs - ties_a) * static_cast<double>(pairs - ties_b));
  if (denom == 0.0) return 0.0;
  return static_cast<double>(concordant_minus_discordant) / denom;
}

void ModelZooSpec::validate() const {
  if (n_models < 10) throw ConfigError("model zoo needs at least 10 models");
  if (n_instances < 100) throw ConfigError("model zoo needs at least 100 instances");
  if (num_classes < 2) throw ConfigError("model zoo needs at least 2 classes");
  if (!(dirichlet_concentration > 0.0)) throw ConfigError("Dirichlet concentration must be > 0");
  if (!(max_noise_scale >= 0.0)) throw ConfigError("max_noise_scale must be >= 0");
  if (!(max_log_temperature >= 0.0)) throw ConfigError("max_log_temperature must be >= 0");
}

ModelZoo generate_zoo(const ModelZooSpec& spec) {
  spec.validate();
  ModelZoo zoo;
  Rng truth_rng(spec.seed, kTruthStream);
  zoo.truth.reserve(spec.n_instances);
  zoo.labels.reserve(spec.n_instances);
  for (std::size_t n = 0; n < spec.n_instances; ++n) {
    Forecast truth = Forecast::from_weights(truth_rng.dirichlet(spec.num_classes, spec.dirichlet_concentration));
    // Label ~ truth by inversion.
    const double u = truth_rng.uniform();
    std::size_t label = spec.num_classes - 1;
    double cum = 0.0;
    for (std::size_t k = 0; k < spec.num_classes; ++k) {
      cum += truth[k];
      if (u < cum) {
        label = k;
        break;
      }
    }
    zoo.truth.push_back(std::move(truth));
    zoo.labels.push_back(label);
  }

  for (std::size_t m = 0; m < spec.n_models; ++m) {
    ModelPredictions model;
    model.name = fmt::format("model_{:03d}", m);
    model.severity = static_cast<double>(m) / static_cast<double>(spec.n_models - 1);
    model.noise_scale = model.severity * spec.max_noise_scale;
    const double log_t = model.severity * spec.max_log_temperature * (m % 2 == 0 ? 1.0 : -1.0);
    model.temperature = std::exp(log_t);
    Rng rng(spec.seed, kModelStreamBase + m);
    model.forecasts.reserve(spec.n_instances);
    for (const Forecast& truth : zoo.truth) {
      if (model.severity == 0.0) {
        model.forecasts.push_back(truth);
        continue;
      }
      std::vector<double> logits(spec.num_classes);
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < spec.num_classes; ++k) {
        logits[k] = (std::log(truth.clamped(k)) + model.noise_scale * rng.normal()) / model.temperature;
        top = std::max(top, logits[k]);
      }
      for (double& z : logits) z = std::exp(z - top);
      model.forecasts.push_back(Forecast::from_weights(std::move(logits)));
    }
    zoo.models.push_back(std::move(model));
  }
  return zoo;
}

Forecast temperature_scale(const Forecast& f, double temperature) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be > 0");
  if (temperature == 1.0) return f;
  std::vector<double> z(f.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < f.size(); ++k) {
    z[k] = std::log(f.clamped(k)) / temperature;
    top = std::max(top, z[k]);
  }
  for (double& x : z) x = std::exp(x - top);
  return Forecast::from_weights(std::move(z));
}

Forecast distractor_temperature(const Forecast& f, std::size_t label, double temperature) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be > 0");
  if (label >= f.size()) throw DomainError("label out of range");
  const double keep = f[label];
  const double exponent = 1.0 / temperature;  // 0 for T = inf
  // Work in log space relative to the largest distractor to avoid underflow.
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (k != label) top = std::max(top, std::log(f.clamped(k)));
  }
  std::vector<double> out(f.size());
  double total = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (k == label) continue;
    out[k] = exponent == 0.0 ? 1.0 : std::exp(exponent * (std::log(f.clamped(k)) - top));
    total += out[k];
  }
  const double mass = 1.0 - keep;
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = k == label ? keep : out[k] / total * mass;
  return Forecast(std::move(out));
}

Condition::Kind Condition::parse_kind(const std::string& name) {
  if (name == "clinical") return Kind::kClinical;
  if (name == "well_specified") return Kind::kWellSpecified;
  if (name == "random_temperature") return Kind::kRandomTemperature;
  if (name == "distractor_temperature") return Kind::kDistractorTemperature;
  throw ConfigError("unknown condition '" + name + "'");
}

std::string to_string(Condition::Kind kind) {
  switch (kind) {
    case Condition::Kind::kClinical:
      return "clinical";
    case Condition::Kind::kWellSpecified:
      return "well_specified";
    case Condition::Kind::kRandomTemperature:
      return "random_temperature";
    case Condition::Kind::kDistractorTemperature:
      return "distractor_temperature";
  }
  return "?";
}

std::string Condition::describe() const {
  const std::string costs = clinical_costs && kind != Kind::kWellSpecified
                                ? fmt::format("clinical[{}]", fmt::join(clinical_costs->values(), ","))
                                : fmt::format("unif01x{}", cost_draws);
  if (kind == Kind::kRandomTemperature || kind == Kind::kDistractorTemperature) {
    return fmt::format("{} log_sigma={} costs={} seed={}", to_string(kind), log_sigma, costs, seed);
  }
  return fmt::format("{} costs={} seed={}", to_string(kind), costs, seed);
}

void Condition::validate(std::size_t k) const {
  if (kind == Kind::kClinical && !clinical_costs) throw ConfigError("clinical condition needs base costs");
  if (clinical_costs && clinical_costs->size() != k) {
    throw ConfigError(fmt::format("clinical costs have {} entries, zoo has {} classes", clinical_costs->size(), k));
  }
  if ((kind == Kind::kRandomTemperature || kind == Kind::kDistractorTemperature) &&
      (!(log_sigma > 0.0) || !std::isfinite(log_sigma))) {
    throw ConfigError("log_sigma must be > 0");
  }
  if (cost_draws == 0) throw ConfigError("cost_draws must be >= 1");
}

ConditionedZoo apply_condition(std::span<const ModelPredictions> models, std::span<const std::size_t> labels,
                               const Condition& condition) {
  if (models.empty()) throw ConfigError("no models to evaluate");
  const std::size_t k = models.front().forecasts.front().size();
  condition.validate(k);

  ConditionedZoo out;
  Rng temp_rng(condition.seed, kTemperatureStream);
  for (const auto& model : models) {
    if (model.forecasts.size() != labels.size()) throw ConfigError("model '" + model.name + "' has wrong instance count");
    double t = 1.0;
    if (condition.kind == Condition::Kind::kRandomTemperature ||
        condition.kind == Condition::Kind::kDistractorTemperature) {
      t = temp_rng.lognormal(0.0, condition.log_sigma);
    }
    std::vector<Forecast> forecasts;
    forecasts.reserve(labels.size());
    for (std::size_t n = 0; n < labels.size(); ++n) {
      switch (condition.kind) {
        case Condition::Kind::kRandomTemperature:
          forecasts.push_back(temperature_scale(model.forecasts[n], t));
          break;
        case Condition::Kind::kDistractorTemperature:
          forecasts.push_back(distractor_temperature(model.forecasts[n], labels[n], t));
          break;
        default:
          forecasts.push_back(model.forecasts[n]);
      }
    }
    out.forecasts.push_back(std::move(forecasts));
    out.temperatures.push_back(t);
  }

  const bool unif = condition.kind == Condition::Kind::kWellSpecified || !condition.clinical_costs;
  if (!unif) {
    out.cost_vectors.emplace_back(std::vector<double>(condition.clinical_costs->values().begin(),
                                                      condition.clinical_costs->values().end()));
  } else {
    Rng cost_rng(condition.seed, kCostStream);
    for (std::size_t r = 0; r < condition.cost_draws; ++r) {
      std::vector<double> c(k);
      for (double& x : c) x = cost_rng.uniform();
      out.cost_vectors.emplace_back(std::move(c));
    }
  }
  return out;
}

std::string to_string(Metric m) {
  switch (m) {
    case Metric::kPandora:
      return "pandora";
    case Metric::kLogLoss:
      return "log_loss";
    case Metric::kAccuracy:
      return "accuracy";
    case Metric::kMacroF1:
      return "macro_f1";
    case Metric::kSimulatedCost:
      return "simulated_cost";
  }
  return "?";
}

Metric parse_metric(const std::string& name) {
  for (Metric m : default_rank_metrics()) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown metric '" + name + "'");
}

std::vector<RankingReport> run_meta_eval(const ModelZoo& zoo, std::span<const Condition> conditions,
                                         std::span<const Metric> metrics, std::size_t bootstrap_reps,
                                         double ci_level) {
  if (metrics.empty()) throw ConfigError("no metrics selected");
  if (zoo.models.empty()) throw ConfigError("empty model zoo");
  if (zoo.models.size() < 2) throw ConfigError("ranking needs at least 2 models");
  if (bootstrap_reps < kMinBootstrapReps) {
    throw ConfigError(fmt::format("need at least {} bootstrap replicates", kMinBootstrapReps));
  }
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw ConfigError("ci_level must lie in (0, 1)");

  // Pandora is always evaluated first as the reference for the gaps.
  std::vector<Metric> rows = {Metric::kPandora};
  for (Metric m : metrics) {
    if (m != Metric::kPandora) rows.push_back(m);
  }
  const bool report_pandora = std::find(metrics.begin(), metrics.end(), Metric::kPandora) != metrics.end();

  std::vector<RankingReport> reports;
  for (const Condition& condition : conditions) {
    const ConditionedZoo cz = apply_condition(zoo.models, zoo.labels, condition);
    const InstanceTable table = tabulate(cz, zoo.labels);
    const std::size_t n = zoo.labels.size();

    std::vector<std::size_t> identity(n);
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    const Evaluation point = evaluate(table, rows, zoo.labels, identity);

    // boot[row][rep] of mean |tau| and of the gap to Pandora.
    std::vector<std::vector<double>> boot_abs(rows.size()), boot_gap(rows.size());
    Rng boot_rng(condition.seed, kBootstrapStream);
    std::vector<std::size_t> idx(n);
    for (std::size_t b = 0; b < bootstrap_reps; ++b) {
      for (auto& x : idx) x = boot_rng.below(n);
      const Evaluation ev = evaluate(table, rows, zoo.labels, idx);
      const double ref = mean_abs(ev.tau[0]);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const double a = mean_abs(ev.tau[r]);
        boot_abs[r].push_back(a);
        boot_gap[r].push_back(a - ref);
      }
    }

    RankingReport report;
    report.condition = condition.describe();
    report.seed = condition.seed;
    report.n_models = zoo.models.size();
    report.n_instances = n;
    report.bootstrap_reps = bootstrap_reps;
    report.ci_level = ci_level;
    report.cost_vectors = cz.cost_vectors;
    report.model_temperatures = cz.temperatures;
    for (const auto& m : zoo.models) report.model_names.push_back(m.name);
    report.simulated_cost = point.pooled_cost;

    const double lo_q = (1.0 - ci_level) / 2.0;
    const double hi_q = 1.0 - lo_q;
    const double ref_abs = mean_abs(point.tau[0]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == 0 && !report_pandora) continue;
      MetricRow row;
      row.metric = rows[r];
      row.tau = mean(point.tau[r]);
      row.abs_tau = mean_abs(point.tau[r]);
      for (double t : point.tau[r]) row.abs_tau_per_draw.push_back(std::abs(t));
      row.gap = row.abs_tau - ref_abs;
      row.ci_low = std::min(quantile(boot_abs[r], lo_q), row.abs_tau);
      row.ci_high = std::max(quantile(boot_abs[r], hi_q), row.abs_tau);
      row.gap_ci_low = std::min(quantile(boot_gap[r], lo_q), row.gap);
      row.gap_ci_high = std::max(quantile(boot_gap[r], hi_q), row.gap);
      report.rows.push_back(std::move(row));
      report.metric_values.push_back(point.metric_values[r]);
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace pandora
