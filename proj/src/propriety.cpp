#include "pandora/propriety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "pandora/errors.hpp"

namespace pandora {
namespace {

// Welford accumulator; merged in worker order for determinism.
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
};

void check_samples(std::size_t n) {
  if (n < kMinMcSamples) throw ConfigError(fmt::format("need at least {} Monte Carlo samples, got {}", kMinMcSamples, n));
}

}  // namespace

CostPrior CostPrior::uniform01(std::uint64_t seed) { return CostPrior(Kind::kUniform01, seed); }

CostPrior CostPrior::beta(double alpha, std::uint64_t seed) {
  CostPrior p(Kind::kBeta, seed);
  p.alpha_ = alpha;
  return p;
}

CostPrior CostPrior::scaled_beta(double alpha, BaseCosts base, std::uint64_t seed) {
  CostPrior p(Kind::kScaledBeta, seed);
  p.alpha_ = alpha;
  p.base_.assign(base.values().begin(), base.values().end());
  return p;
}

CostPrior CostPrior::empirical(std::vector<RealizedCosts> samples, std::uint64_t seed) {
  CostPrior p(Kind::kEmpirical, seed);
  p.samples_ = std::move(samples);
  return p;
}

std::string CostPrior::describe() const {
  switch (kind_) {
    case Kind::kUniform01:
      return "uniform01_iid";
    case Kind::kBeta:
      return fmt::format("beta_iid(alpha={})", alpha_);
    case Kind::kScaledBeta:
      return fmt::format("scaled_beta(alpha={}, C=[{}])", alpha_, fmt::join(base_, ","));
    case Kind::kEmpirical:
      return fmt::format("empirical(n={})", samples_.size());
  }
  return "unknown";
}

void CostPrior::validate(std::size_t k) const {
  if ((kind_ == Kind::kBeta || kind_ == Kind::kScaledBeta) && (!(alpha_ > 0.0) || !std::isfinite(alpha_))) {
    throw ConfigError("cost prior alpha must be finite and > 0");
  }
  if (kind_ == Kind::kScaledBeta) {
    if (base_.size() != k) throw ConfigError("scaled_beta base costs do not match K");
    for (double c : base_) {
      if (!(c > 0.0)) throw ConfigError("scaled_beta base costs must be > 0");
    }
  }
  if (kind_ == Kind::kEmpirical) {
    if (samples_.empty()) throw ConfigError("empirical cost prior needs at least one sample");
    for (const auto& s : samples_) {
      if (s.size() != k) throw ConfigError("empirical cost sample does not match K");
    }
  }
}

void CostPrior::draw(Rng& rng, std::span<double> out) const {
  switch (kind_) {
    case Kind::kUniform01:
      for (double& c : out) c = rng.uniform();
      return;
    case Kind::kBeta:
      for (double& c : out) c = rng.beta_alpha_one(alpha_);
      return;
    case Kind::kScaledBeta:
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = base_[k] * rng.beta_alpha_one(alpha_);
      return;
    case Kind::kEmpirical: {
      const auto& s = samples_[samples_.size() == 1 ? 0 : rng.below(samples_.size())];
      std::copy(s.values().begin(), s.values().end(), out.begin());
      return;
    }
  }
}

McEstimate mc_expected_cost(const LabeledForecast& lf, const CostPrior& prior, std::size_t n_samples,
                            std::size_t workers) {
  check_samples(n_samples);
  prior.validate(lf.size());
  workers = std::clamp<std::size_t>(workers, 1, n_samples);

  std::vector<Moments> partial(workers);
  auto run = [&](std::size_t w) {
    Rng rng(prior.seed(), w);
    std::vector<double> costs(lf.size());
    const std::size_t begin = n_samples * w / workers;
    const std::size_t end = n_samples * (w + 1) / workers;
    for (std::size_t s = begin; s < end; ++s) {
      prior.draw(rng, costs);
      partial[w].push(search_cost(lf, costs));
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  Moments total;
  for (const auto& m : partial) total.merge(m);
  McEstimate est;
  est.mean = total.mean;
  est.n_samples = total.n;
  est.workers = workers;
  const double var = total.n > 1 ? total.m2 / static_cast<double>(total.n - 1) : 0.0;
  est.std_error = std::sqrt(var / static_cast<double>(total.n));
  return est;
}

bool within_standard_errors(const McEstimate& est, double target, double k) {
  return std::abs(est.mean - target) <= k * est.std_error;
}

DecompositionReport pairwise_decomposition_check(const LabeledForecast& lf, const CostPrior& prior,
                                                 std::size_t n_samples) {
  check_samples(n_samples);
  const std::size_t kk = lf.size();
  prior.validate(kk);
  const std::size_t i = lf.true_class;
  const double pi = lf.forecast.clamped(i);

  Rng rng(prior.seed(), 0);
  std::vector<double> draw(kk);
  std::vector<bool> tested(kk);
  DecompositionReport report;
  report.n_samples = n_samples;
  double direct_sum = 0.0;
  double decomposed_sum = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    prior.draw(rng, draw);
    const RealizedCosts costs(draw);
    const SearchTrace trace = simulate_search(lf, costs);
    std::fill(tested.begin(), tested.end(), false);
    for (std::size_t k : trace.order) tested[k] = true;

    double direct = 0.0;
    double decomposed = 0.0;
    bool tie = false;
    for (std::size_t k = 0; k < kk; ++k) {
      if (tested[k]) direct += draw[k];
      if (k == i) {
        decomposed += draw[i];
        continue;
      }
      // h(c_i / c_j, p_i / p_j) with both ratios cross-multiplied.
      const double lhs = draw[i] * lf.forecast.clamped(k);
      const double rhs = pi * draw[k];
      const double h = tie_split(lhs, rhs);
      if (h == 0.5) tie = true;
      if (h != 0.5 && (h == 1.0) != tested[k]) ++report.indicator_mismatches;
      decomposed += draw[k] * h;
    }
    if (tie) {
      ++report.tie_draws;
    } else {
      report.max_abs_diff = std::max(report.max_abs_diff, std::abs(direct - decomposed));
    }
    direct_sum += direct;
    decomposed_sum += decomposed;
  }
  report.direct_mean = direct_sum / static_cast<double>(n_samples);
  report.decomposed_mean = decomposed_sum / static_cast<double>(n_samples);
  return report;
}

double bayes_risk(const Forecast& candidate, const Forecast& true_dist, const Scorer& scorer) {
  if (candidate.size() != true_dist.size()) throw ConfigError("candidate and true distribution disagree on K");
  double risk = 0.0;
  for (std::size_t k = 0; k < true_dist.size(); ++k) {
    if (true_dist[k] == 0.0) continue;
    risk += true_dist[k] * scorer(LabeledForecast(candidate, k));
  }
  return risk;
}

std::string to_string(ProprietyVerdict v) {
  switch (v) {
    case ProprietyVerdict::kStrict:
      return "STRICT";
    case ProprietyVerdict::kNonStrict:
      return "NON-STRICT";
    case ProprietyVerdict::kImproper:
      return "IMPROPER";
  }
  return "?";
}

BayesRiskGrid propriety_scan(const Forecast& true_dist, const Scorer& scorer, double resolution) {
  const std::size_t k = true_dist.size();
  if (k > 3) throw UnsupportedError("propriety grid scans support K <= 3");
  if (!(resolution > 0.0) || resolution > 0.02) throw ConfigError("grid resolution must lie in (0, 0.02]");
  const auto n = static_cast<std::size_t>(std::llround(1.0 / resolution));
  const double step = 1.0 / static_cast<double>(n);

  BayesRiskGrid grid{true_dist, step, {}, {}};
  if (k == 2) {
    for (std::size_t a = 0; a <= n; ++a) {
      const double x = static_cast<double>(a) * step;
      grid.points.push_back({x, 1.0 - x});
    }
  } else {
    for (std::size_t a = 0; a <= n; ++a) {
      for (std::size_t b = 0; a + b <= n; ++b) {
        const double x = static_cast<double>(a) * step;
        const double y = static_cast<double>(b) * step;
        grid.points.push_back({x, y, std::max(0.0, 1.0 - x - y)});
      }
    }
  }

  grid.true_risk = bayes_risk(true_dist, true_dist, scorer);
  grid.grid_min = grid.true_risk;
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * std::abs(grid.true_risk);
  grid.margin = std::numeric_limits<double>::infinity();
  bool beaten = false;
  grid.risks.reserve(grid.points.size());
  for (const auto& pt : grid.points) {
    const double r = bayes_risk(Forecast(pt), true_dist, scorer);
    grid.risks.push_back(r);
    grid.grid_min = std::min(grid.grid_min, r);
    if (r < grid.true_risk - tol) beaten = true;
    double dist = 0.0;
    for (std::size_t c = 0; c < k; ++c) dist += std::abs(pt[c] - true_dist[c]);
    if (dist < 2.0 * step) continue;
    grid.margin = std::min(grid.margin, r - grid.true_risk);
    if (r <= grid.true_risk + tol) ++grid.plateau_points;
  }
  if (beaten) {
    grid.verdict = ProprietyVerdict::kImproper;
  } else if (grid.plateau_points > 0) {
    grid.verdict = ProprietyVerdict::kNonStrict;
  } else {
    grid.verdict = ProprietyVerdict::kStrict;
  }
  return grid;
}

GradientCheckReport gradient_check(double alpha, std::span<const double> deltas) {
  const AlphaParam a(alpha);
  GradientCheckReport report;
  report.alpha = alpha;
  for (double delta : deltas) {
    if (std::abs(delta) < kKinkExclusion) {
      ++report.excluded_near_kink;
      continue;
    }
    const double fd = (pairwise_loss(a, std::exp(delta + kGradientStep)) -
                       pairwise_loss(a, std::exp(delta - kGradientStep))) /
                      (2.0 * kGradientStep);
    const double analytic = pairwise_gradient(alpha, delta);
    // d/dz_j = -d/d(delta)
    report.max_rel_error = std::max(report.max_rel_error, std::abs(analytic + fd) / std::abs(analytic));
    ++report.n_points;
  }
  return report;
}

GradientCheckReport gradient_check(double alpha, std::size_t n_points, std::uint64_t seed) {
  if (n_points < 10) throw ConfigError("gradient check needs at least 10 points");
  Rng rng(seed, 0);
  std::vector<double> deltas;
  deltas.reserve(n_points);
  std::size_t skipped = 0;
  while (deltas.size() < n_points) {
    const double d = rng.uniform(-kGradientDeltaRange, kGradientDeltaRange);
    if (std::abs(d) < kKinkExclusion) {
      ++skipped;
      continue;
    }
    deltas.push_back(d);
  }
  GradientCheckReport report = gradient_check(alpha, deltas);
  report.excluded_near_kink += skipped;
  return report;
}

}  // namespace pandora
