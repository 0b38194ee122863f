#include "pandora/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "pandora/baselines.hpp"
#include "pandora/errors.hpp"
#include "pandora/io.hpp"
#include "pandora/propriety.hpp"
#include "pandora/ranking.hpp"
#include "pandora/rng.hpp"
#include "pandora/scoring.hpp"
#include "pandora/search.hpp"

namespace pandora {
namespace {

using nlohmann::json;

std::string g6(double v) { return fmt::format("{:.6g}", v); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------- score

const std::vector<std::string> kScoreMetrics = {"pandora_regret", "beta_score", "raw_expected_cost",
                                                "log_loss",       "accuracy",   "macro_f1"};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct ScoreArgs {
  std::string predictions;
  std::string costs;
  std::string alpha = "1";
  std::string metrics;
  std::string format = "text";
};

std::optional<CostConfig> maybe_costs(const std::string& path, std::size_t k) {
  if (path.empty()) return std::nullopt;
  CostConfig cfg = load_cost_config(path);
  if (cfg.size() != k) {
    throw ConfigError(fmt::format("{}: config has K={} but predictions have K={}", path, cfg.size(), k));
  }
  return cfg;
}

int cmd_score(const ScoreArgs& args, std::ostream& out) {
  const OutputFormat format = parse_output_format(args.format);
  std::vector<std::string> metrics = args.metrics.empty() ? kScoreMetrics : split_list(args.metrics);
  for (const auto& m : metrics) {
    if (std::find(kScoreMetrics.begin(), kScoreMetrics.end(), m) == kScoreMetrics.end()) {
      throw ConfigError("unknown score metric '" + m + "'");
    }
  }
  const AlphaParam alpha = AlphaParam::parse(args.alpha);
  const auto records = read_predictions_file(args.predictions);
  if (records.empty()) throw ConfigError(args.predictions + ": no records");
  const auto dataset = to_dataset(records, args.predictions);
  const std::size_t k = dataset.front().size();
  const auto cfg = maybe_costs(args.costs, k);
  const BaseCosts costs = cfg ? cfg->base_costs : BaseCosts::unit(k);

  // values[m][n]; NaN marks a dataset-level metric with no per-instance value.
  const std::size_t n = dataset.size();
  std::vector<std::vector<double>> values(metrics.size(), std::vector<double>(n));
  std::vector<double> means(metrics.size());
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    const std::string& name = metrics[m];
    for (std::size_t i = 0; i < n; ++i) {
      const auto& lf = dataset[i];
      double v = std::numeric_limits<double>::quiet_NaN();
      if (name == "pandora_regret") v = pandora_regret(lf);
      if (name == "beta_score") v = beta_score(lf, alpha, costs);
      if (name == "raw_expected_cost") v = raw_expected_cost(lf, alpha, costs);
      if (name == "log_loss") v = log_loss(lf);
      if (name == "accuracy") v = 1.0 - top1_loss(lf);
      values[m][i] = v;
    }
    if (name == "macro_f1") {
      means[m] = macro_f1(dataset);
    } else if (name == "accuracy") {
      means[m] = accuracy(dataset);
    } else {
      means[m] = std::accumulate(values[m].begin(), values[m].end(), 0.0) / static_cast<double>(n);
    }
  }

  auto id_of = [&](std::size_t i) { return records[i].id.value_or(std::to_string(i)); };
  switch (format) {
    case OutputFormat::kText: {
      out << fmt::format("# predictions={} K={} alpha={} costs={}\n", args.predictions, k, alpha.to_string(),
                         cfg ? cfg->name : std::string("unit"));
      out << fmt::format("{:<12} {:>5}", "id", "label");
      for (const auto& name : metrics) out << fmt::format(" {:>18}", name);
      out << "\n";
      for (std::size_t i = 0; i < n; ++i) {
        out << fmt::format("{:<12} {:>5}", id_of(i), dataset[i].true_class);
        for (std::size_t m = 0; m < metrics.size(); ++m) {
          out << fmt::format(" {:>18}", std::isnan(values[m][i]) ? "-" : g6(values[m][i]));
        }
        out << "\n";
      }
      out << fmt::format("{:<12} {:>5}", "mean", "");
      for (double v : means) out << fmt::format(" {:>18}", g6(v));
      out << "\n";
      break;
    }
    case OutputFormat::kJsonLines: {
      for (std::size_t i = 0; i < n; ++i) {
        json row = {{"id", id_of(i)}, {"label", dataset[i].true_class}};
        for (std::size_t m = 0; m < metrics.size(); ++m) row[metrics[m]] = number_or_null(values[m][i]);
        out << row.dump() << "\n";
      }
      json summary = {{"summary", "mean"}, {"n", n}, {"alpha", alpha.to_string()}};
      for (std::size_t m = 0; m < metrics.size(); ++m) summary[metrics[m]] = number_or_null(means[m]);
      out << summary.dump() << "\n";
      break;
    }
    case OutputFormat::kCsv: {
      out << "id,label";
      for (const auto& name : metrics) out << "," << name;
      out << "\n";
      for (std::size_t i = 0; i < n; ++i) {
        out << id_of(i) << "," << dataset[i].true_class;
        for (std::size_t m = 0; m < metrics.size(); ++m) {
          out << "," << (std::isnan(values[m][i]) ? "" : fmt::format("{:.17g}", values[m][i]));
        }
        out << "\n";
      }
      out << "mean,";
      for (double v : means) out << "," << fmt::format("{:.17g}", v);
      out << "\n";
      break;
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string predictions;
  std::string costs;
  std::string mode = "base";
  std::string format = "text";
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  const OutputFormat format = parse_output_format(args.format);
  if (args.mode != "base" && args.mode != "effective") throw ConfigError("--mode must be base or effective");
  const auto records = read_predictions_file(args.predictions);
  if (records.empty()) throw ConfigError(args.predictions + ": no records");
  const auto dataset = to_dataset(records, args.predictions);
  const CostConfig cfg = *maybe_costs(args.costs, dataset.front().size());

  RealizedCosts realized(std::vector<double>(cfg.base_costs.values().begin(), cfg.base_costs.values().end()));
  if (args.mode == "effective") {
    if (!cfg.test_characteristics) throw ConfigError(args.costs + ": effective mode needs test characteristics");
    realized = effective_costs(realized, *cfg.test_characteristics);
  }

  std::vector<SearchTrace> traces;
  for (const auto& lf : dataset) traces.push_back(simulate_search(lf, realized));
  const double j_sim = aggregate_cost(dataset, realized);

  auto id_of = [&](std::size_t i) { return records[i].id.value_or(std::to_string(i)); };
  auto order_names = [&](const SearchTrace& t) {
    std::vector<std::string> names;
    for (std::size_t k : t.order) names.push_back(cfg.class_names[k]);
    return names;
  };
  switch (format) {
    case OutputFormat::kText:
      out << fmt::format("# config={} mode={} currency={}\n", cfg.name, args.mode, cfg.currency);
      for (std::size_t i = 0; i < traces.size(); ++i) {
        out << fmt::format("{:<12} label={:<3} tests={:<3} cost={:<12} order={}\n", id_of(i),
                           dataset[i].true_class, traces[i].stop_step + 1, g6(traces[i].total_cost),
                           fmt::join(order_names(traces[i]), " > "));
      }
      out << fmt::format("J_sim {} over {} instances\n", g6(j_sim), traces.size());
      break;
    case OutputFormat::kJsonLines:
      for (std::size_t i = 0; i < traces.size(); ++i) {
        out << json{{"id", id_of(i)},
                    {"label", dataset[i].true_class},
                    {"order", traces[i].order},
                    {"step_costs", traces[i].step_costs},
                    {"stop_step", traces[i].stop_step},
                    {"total_cost", traces[i].total_cost}}
                   .dump()
            << "\n";
      }
      out << json{{"summary", "J_sim"}, {"n", traces.size()}, {"mode", args.mode}, {"J_sim", j_sim}}.dump() << "\n";
      break;
    case OutputFormat::kCsv:
      out << "id,label,tests,total_cost,order\n";
      for (std::size_t i = 0; i < traces.size(); ++i) {
        out << fmt::format("{},{},{},{:.17g},{}\n", id_of(i), dataset[i].true_class, traces[i].stop_step + 1,
                           traces[i].total_cost, fmt::join(traces[i].order, " "));
      }
      out << fmt::format("J_sim,,,{:.17g},\n", j_sim);
      break;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- rank

struct RankArgs {
  std::string zoo;
  std::string predictions_dir;
  std::string costs;
  std::vector<std::string> conditions;
  std::string metrics;
  std::uint64_t seed = 0;
  std::size_t bootstrap = kMinBootstrapReps;
  double log_sigma = 0.5;
  std::size_t cost_draws = 10;
  std::string format = "text";
  std::string export_csv;
};

void write_rank_text(const RankingReport& r, std::ostream& out) {
  out << fmt::format("condition {}\n", r.condition);
  out << fmt::format("models {}  instances {}  bootstrap {} ({})  ci {}%\n", r.n_models, r.n_instances,
                     r.bootstrap_reps, kBootstrapUnit, g6(100.0 * r.ci_level));
  out << fmt::format("{:<16} {:>10} {:>10} {:>22} {:>10} {:>22}\n", "metric", "tau", "|tau|", "|tau| CI", "gap",
                     "gap CI");
  for (const auto& row : r.rows) {
    out << fmt::format("{:<16} {:>10} {:>10} {:>22} {:>10} {:>22}\n", to_string(row.metric), g6(row.tau),
                       g6(row.abs_tau), fmt::format("[{}, {}]", g6(row.ci_low), g6(row.ci_high)), g6(row.gap),
                       fmt::format("[{}, {}]", g6(row.gap_ci_low), g6(row.gap_ci_high)));
  }
}

json rank_json(const RankingReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"metric", to_string(row.metric)},
                    {"tau", row.tau},
                    {"abs_tau", row.abs_tau},
                    {"ci", {row.ci_low, row.ci_high}},
                    {"gap", row.gap},
                    {"gap_ci", {row.gap_ci_low, row.gap_ci_high}},
                    {"abs_tau_per_draw", row.abs_tau_per_draw}});
  }
  return {{"condition", r.condition},
          {"seed", r.seed},
          {"n_models", r.n_models},
          {"n_instances", r.n_instances},
          {"bootstrap_reps", r.bootstrap_reps},
          {"bootstrap_unit", kBootstrapUnit},
          {"ci_level", r.ci_level},
          {"rows", rows}};
}

void export_matrix(const std::vector<RankingReport>& reports, const std::string& path) {
  std::ofstream csv(path);
  if (!csv) throw ConfigError("cannot write " + path);
  csv << "condition,model,temperature";
  const auto& first = reports.front();
  for (const auto& row : first.rows) csv << "," << to_string(row.metric);
  csv << ",pooled_simulated_cost\n";
  for (const auto& r : reports) {
    for (std::size_t m = 0; m < r.n_models; ++m) {
      csv << fmt::format("\"{}\",{},{:.17g}", r.condition, r.model_names[m], r.model_temperatures[m]);
      for (const auto& values : r.metric_values) csv << fmt::format(",{:.17g}", values[m]);
      csv << fmt::format(",{:.17g}\n", r.simulated_cost[m]);
    }
  }
}

int cmd_rank(const RankArgs& args, std::ostream& out) {
  const OutputFormat format = parse_output_format(args.format);
  if (format == OutputFormat::kCsv) throw ConfigError("rank supports --format text or json-lines; use --export-csv");
  if (!args.zoo.empty() && !args.predictions_dir.empty()) {
    throw ConfigError("--zoo and --predictions-dir are mutually exclusive");
  }
  const ModelZoo zoo = !args.predictions_dir.empty() ? load_zoo_from_directory(args.predictions_dir)
                       : !args.zoo.empty()           ? generate_zoo(load_zoo_spec(args.zoo))
                                                     : generate_zoo(ModelZooSpec{});
  const std::size_t k = zoo.models.front().forecasts.front().size();

  std::vector<Metric> metrics;
  if (args.metrics.empty()) {
    metrics = default_rank_metrics();
  } else {
    for (const auto& name : split_list(args.metrics)) metrics.push_back(parse_metric(name));
  }

  std::optional<BaseCosts> clinical;
  if (!args.costs.empty()) clinical = maybe_costs(args.costs, k)->base_costs;
  std::vector<std::string> names = args.conditions.empty() ? std::vector<std::string>{"well_specified"} : args.conditions;
  if (names.size() == 1 && names.front() == "all") {
    names = {"clinical", "well_specified", "random_temperature", "distractor_temperature"};
    if (!clinical) names.erase(names.begin());
  }
  std::vector<Condition> conditions;
  for (const auto& name : names) {
    Condition c;
    c.kind = Condition::parse_kind(name);
    c.clinical_costs = clinical;
    c.log_sigma = args.log_sigma;
    c.cost_draws = args.cost_draws;
    c.seed = args.seed;
    c.validate(k);
    conditions.push_back(std::move(c));
  }

  const auto reports = run_meta_eval(zoo, conditions, metrics, args.bootstrap);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (format == OutputFormat::kText) {
      if (i > 0) out << "\n";
      write_rank_text(reports[i], out);
    } else {
      out << rank_json(reports[i]).dump() << "\n";
    }
  }
  if (!args.export_csv.empty()) export_matrix(reports, args.export_csv);
  return kExitOk;
}

// ---------------------------------------------------------------- verify

// Forecast with weights in [0.1, 1); keeps every ratio moderate.
Forecast interior_forecast(Rng& rng, std::size_t k) {
  std::vector<double> w(k);
  for (auto& x : w) x = rng.uniform(0.1, 1.0);
  return Forecast::from_weights(std::move(w));
}

std::vector<double> alpha_set(const std::string& text, std::vector<double> defaults) {
  if (text.empty()) return defaults;
  const AlphaParam a = AlphaParam::parse(text);
  if (!a.is_finite()) throw ConfigError("this suite needs a finite alpha");
  return {a.value()};
}

void suite_oracle(const VerifyOptions& o, std::vector<CheckResult>& res) {
  const std::size_t n = o.samples;
  auto mc_check = [&](const std::string& name, const LabeledForecast& lf, const CostPrior& prior, double target) {
    const McEstimate est = mc_expected_cost(lf, prior, n);
    const double z = est.std_error > 0 ? (est.mean - target) / est.std_error : 0.0;
    res.push_back({"oracle", name, within_standard_errors(est, target),
                   fmt::format("mc={} closed_form={} se={} z={}", g6(est.mean), g6(target), g6(est.std_error), g6(z))});
  };

  const LabeledForecast half(Forecast({0.5, 0.5}), 0);
  mc_check("uniform K=2 p=(0.5,0.5)", half, CostPrior::uniform01(o.seed), 2.0 / 3.0);

  Rng rng(o.seed, 101);
  for (std::size_t k : {2, 3, 5}) {
    const LabeledForecast lf(interior_forecast(rng, k), rng.below(k));
    const double target = (1.0 + static_cast<double>(k - 1) * pandora_regret(lf)) / 2.0;
    mc_check(fmt::format("uniform K={}", k), lf, CostPrior::uniform01(o.seed + k), target);
  }
  for (double a : alpha_set(o.alpha, {0.5, 2.0, 5.0})) {
    const std::size_t k = 3;
    std::vector<double> base(k);
    for (auto& c : base) c = rng.uniform(0.5, 2.0);
    const BaseCosts costs(base);
    const LabeledForecast lf(interior_forecast(rng, k), rng.below(k));
    const double target = raw_expected_cost(lf, AlphaParam(a), costs);
    mc_check(fmt::format("scaled_beta alpha={} K=3", g6(a)), lf, CostPrior::scaled_beta(a, costs, o.seed + 7), target);
  }
}

void suite_propriety(const VerifyOptions& o, std::vector<CheckResult>& res) {
  constexpr double kResolution = 0.01;
  Rng rng(o.seed, 102);
  for (std::size_t k : {2, 3}) {
    const Forecast pi = interior_forecast(rng, k);
    const BaseCosts unit = BaseCosts::unit(k);
    auto scan = [&](const std::string& name, const Scorer& scorer, ProprietyVerdict expected) {
      const BayesRiskGrid g = propriety_scan(pi, scorer, kResolution);
      res.push_back({"propriety", fmt::format("{} K={}", name, k), g.verdict == expected,
                     fmt::format("verdict={} expected={} margin={} plateau={}", to_string(g.verdict),
                                 to_string(expected), g6(g.margin), g.plateau_points)});
    };
    scan("pandora_regret", [](const LabeledForecast& lf) { return pandora_regret(lf); }, ProprietyVerdict::kStrict);
    for (double a : alpha_set(o.alpha, {0.5, 1.0, 2.0})) {
      const AlphaParam alpha(a);
      scan(fmt::format("beta_score alpha={}", g6(a)),
           [&](const LabeledForecast& lf) { return beta_score(lf, alpha, unit); }, ProprietyVerdict::kStrict);
    }
    scan("beta_score alpha=inf",
         [&](const LabeledForecast& lf) { return beta_score(lf, AlphaParam::infinity_limit(), unit); },
         ProprietyVerdict::kNonStrict);
    scan("accuracy", [](const LabeledForecast& lf) { return top1_loss(lf); }, ProprietyVerdict::kNonStrict);
  }
}

void suite_gradient(const VerifyOptions& o, std::vector<CheckResult>& res) {
  constexpr double kMaxRelError = 1e-5;
  for (double a : alpha_set(o.alpha, {0.5, 1.0, 3.0})) {
    const GradientCheckReport r = gradient_check(a, 200, o.seed);
    res.push_back({"gradient", fmt::format("alpha={}", g6(a)), r.max_rel_error < kMaxRelError,
                   fmt::format("points={} excluded={} max_rel_err={}", r.n_points, r.excluded_near_kink,
                               g6(r.max_rel_error))});
  }
}

void suite_amnesia(const VerifyOptions& o, std::vector<CheckResult>& res) {
  Rng rng(o.seed, 103);
  double worst = 0.0;
  std::size_t orders = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t k = 2 + rng.below(3);
    const LabeledForecast lf(Forecast(rng.dirichlet(k, 1.0)), rng.below(k));
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      worst = std::max(worst, std::abs(fixed_order_regret(lf, perm, {}) - log_loss(lf)));
      ++orders;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  res.push_back({"amnesia", "fixed_order a=b=1", worst <= 1e-10,
                 fmt::format("orders={} max_abs_diff={}", orders, g6(worst))});

  double spread = 0.0;
  for (int t = 0; t < 50; ++t) {
    const LabeledForecast lf(interior_forecast(rng, 3), rng.below(3));
    std::vector<std::size_t> perm = {0, 1, 2};
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    do {
      const double v = fixed_order_regret(lf, perm, {2.0, 1.0});
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    } while (std::next_permutation(perm.begin(), perm.end()));
    spread = std::max(spread, hi - lo);
  }
  res.push_back({"amnesia", "knife_edge a=2 b=1", spread > 1e-3, fmt::format("max_order_spread={}", g6(spread))});

  double parallel = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t k = 2 + rng.below(6);
    const LabeledForecast lf(Forecast(rng.dirichlet(k, 1.0)), rng.below(k));
    parallel = std::max(parallel, std::abs(parallel_decision_cost(lf) - log_loss(lf) - 1.0));
  }
  res.push_back({"amnesia", "parallel", parallel <= 1e-12, fmt::format("max_abs_diff={}", g6(parallel))});
}

void suite_decomposition(const VerifyOptions& o, std::vector<CheckResult>& res) {
  const std::size_t n = std::clamp<std::size_t>(o.samples, kMinMcSamples, 100000);
  Rng rng(o.seed, 104);
  for (std::size_t k : {2, 3, 5}) {
    const LabeledForecast lf(interior_forecast(rng, k), rng.below(k));
    const DecompositionReport r = pairwise_decomposition_check(lf, CostPrior::uniform01(o.seed + k), n);
    res.push_back({"decomposition", fmt::format("uniform K={}", k),
                   r.indicator_mismatches == 0 && r.max_abs_diff == 0.0,
                   fmt::format("draws={} ties={} mismatches={} max_abs_diff={}", r.n_samples, r.tie_draws,
                               r.indicator_mismatches, g6(r.max_abs_diff))});
  }
}

struct VerifyArgs {
  std::vector<std::string> suites;
  std::uint64_t seed = 0;
  std::size_t samples = 200000;
  std::string alpha;
  std::string format = "text";
};

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  const OutputFormat format = parse_output_format(args.format);
  VerifyOptions opts{args.suites.empty() ? std::vector<std::string>{"all"} : args.suites, args.seed, args.samples,
                     args.alpha};
  const auto results = run_verify(opts);
  bool ok = true;
  if (format == OutputFormat::kCsv) out << "status,suite,check,detail\n";
  for (const auto& r : results) {
    ok = ok && r.passed;
    const char* status = r.passed ? "PASS" : "FAIL";
    switch (format) {
      case OutputFormat::kText:
        out << fmt::format("{} {}/{}: {}\n", status, r.suite, r.name, r.detail);
        break;
      case OutputFormat::kJsonLines:
        out << json{{"status", status}, {"suite", r.suite}, {"check", r.name}, {"detail", r.detail}}.dump() << "\n";
        break;
      case OutputFormat::kCsv:
        out << fmt::format("{},{},\"{}\",\"{}\"\n", status, r.suite, r.name, r.detail);
        break;
    }
    if (!r.passed) err << fmt::format("verification failed: {}/{}\n", r.suite, r.name);
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

OutputFormat parse_output_format(const std::string& name) {
  if (name == "text") return OutputFormat::kText;
  if (name == "json-lines") return OutputFormat::kJsonLines;
  if (name == "csv") return OutputFormat::kCsv;
  throw ConfigError("unknown --format '" + name + "'");
}

std::vector<CheckResult> run_verify(const VerifyOptions& opts) {
  using Suite = void (*)(const VerifyOptions&, std::vector<CheckResult>&);
  const std::vector<std::pair<std::string, Suite>> suites = {{"oracle", suite_oracle},
                                                             {"propriety", suite_propriety},
                                                             {"gradient", suite_gradient},
                                                             {"amnesia", suite_amnesia},
                                                             {"decomposition", suite_decomposition}};
  if (opts.samples < kMinMcSamples) {
    throw ConfigError(fmt::format("--samples must be at least {}", kMinMcSamples));
  }
  std::vector<std::string> selected;
  for (const auto& s : opts.suites) {
    if (s == "all") {
      for (const auto& [name, _] : suites) selected.push_back(name);
    } else if (std::none_of(suites.begin(), suites.end(), [&](const auto& p) { return p.first == s; })) {
      throw ConfigError("unknown suite '" + s + "'");
    } else {
      selected.push_back(s);
    }
  }
  std::vector<CheckResult> results;
  for (const auto& [name, fn] : suites) {
    if (std::find(selected.begin(), selected.end(), name) != selected.end()) fn(opts, results);
  }
  return results;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cost-aware scoring of probabilistic classifiers via sequential search"};
  app.require_subcommand(1);
  const std::vector<std::string> formats = {"text", "json-lines", "csv"};

  ScoreArgs score;
  auto* sc = app.add_subcommand("score", "Score a prediction file");
  sc->add_option("predictions", score.predictions, "Prediction file (.jsonl or .csv)")->required();
  sc->add_option("--costs", score.costs, "Cost configuration (JSON)");
  sc->add_option("--alpha", score.alpha, "Beta-family alpha (number, 0 or inf)")->capture_default_str();
  sc->add_option("--metrics", score.metrics, "Comma-separated metrics");
  sc->add_option("--format", score.format)->check(CLI::IsMember(formats))->capture_default_str();

  SimulateArgs sim;
  auto* si = app.add_subcommand("simulate", "Simulate the ratio-rule search on a prediction file");
  si->add_option("predictions", sim.predictions, "Prediction file (.jsonl or .csv)")->required();
  si->add_option("--costs", sim.costs, "Cost configuration (JSON)")->required();
  si->add_option("--mode", sim.mode, "Realized costs: base or effective")
      ->check(CLI::IsMember({"base", "effective"}))
      ->capture_default_str();
  si->add_option("--format", sim.format)->check(CLI::IsMember(formats))->capture_default_str();

  RankArgs rank;
  auto* rk = app.add_subcommand("rank", "Meta-evaluate metrics by ranking a model zoo");
  rk->add_option("--zoo", rank.zoo, "Synthetic zoo configuration (JSON)");
  rk->add_option("--predictions-dir", rank.predictions_dir, "Directory with one prediction file per model");
  rk->add_option("--costs", rank.costs, "Clinical cost configuration");
  rk->add_option("--condition", rank.conditions,
                 "clinical, well_specified, random_temperature, distractor_temperature or all");
  rk->add_option("--metrics", rank.metrics, "Comma-separated metrics");
  rk->add_option("--seed", rank.seed, "Seed for costs, temperatures and bootstrap")->required();
  rk->add_option("--bootstrap", rank.bootstrap, "Bootstrap replicates")->capture_default_str();
  rk->add_option("--log-sigma", rank.log_sigma, "Temperature LogNormal sigma")->capture_default_str();
  rk->add_option("--cost-draws", rank.cost_draws, "Shared Unif[0,1] cost vectors")->capture_default_str();
  rk->add_option("--format", rank.format)->check(CLI::IsMember({"text", "json-lines"}))->capture_default_str();
  rk->add_option("--export-csv", rank.export_csv, "Write the per-model metric matrix as CSV");

  VerifyArgs ver;
  auto* vf = app.add_subcommand("verify", "Run property and oracle suites");
  vf->add_option("suites", ver.suites, "oracle, propriety, gradient, amnesia, decomposition or all");
  vf->add_option("--seed", ver.seed, "Seed")->required();
  vf->add_option("--samples", ver.samples, "Monte Carlo draws per check")->capture_default_str();
  vf->add_option("--alpha", ver.alpha, "Restrict suites to one alpha");
  vf->add_option("--format", ver.format)->check(CLI::IsMember(formats))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (sc->parsed()) return cmd_score(score, out);
    if (si->parsed()) return cmd_simulate(sim, out);
    if (rk->parsed()) return cmd_rank(rank, out);
    return cmd_verify(ver, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace pandora
