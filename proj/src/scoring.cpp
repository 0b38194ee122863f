#include "pandora/scoring.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "pandora/errors.hpp"

namespace pandora {
namespace {

// Above this alpha the powers are formed as exp(alpha * log r) so that the
// exponent, not the power, carries the magnitude.
constexpr double kLogSpaceAlpha = 700.0;

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("alpha must be finite and > 0, got " + std::to_string(alpha));
  }
}

double power(double r, double exponent, bool log_space) {
  if (!log_space) return std::pow(r, exponent);
  return std::exp(exponent * std::log(r));  // underflows to 0 near the step limit
}

// Odds ratio of class i against class j after cost adjustment.
double cost_adjusted_ratio(const Forecast& f, const BaseCosts& c, std::size_t i, std::size_t j) {
  return (f.clamped(i) * c[j]) / (f.clamped(j) * c[i]);
}

void check_dims(const LabeledForecast& lf, const BaseCosts& costs) {
  if (costs.size() != lf.size()) {
    throw ConfigError("cost vector has " + std::to_string(costs.size()) + " entries, forecast has " +
                      std::to_string(lf.size()));
  }
}

}  // namespace

AlphaParam::AlphaParam(double alpha) : kind_(Kind::kFinite), value_(alpha) { check_alpha(alpha); }

AlphaParam AlphaParam::parse(const std::string& text) {
  if (text == "0" || text == "zero") return zero_limit();
  if (text == "inf" || text == "infinity") return infinity_limit();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse alpha '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("cannot parse alpha '" + text + "'");
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("alpha must be > 0, got '" + text + "'");
  return AlphaParam(v);
}

std::string AlphaParam::to_string() const {
  switch (kind_) {
    case Kind::kZeroLimit:
      return "zero";
    case Kind::kInfinityLimit:
      return "infinity";
    case Kind::kFinite:
      break;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

BaseCosts::BaseCosts(std::vector<double> costs) : costs_(std::move(costs)) {
  for (double c : costs_) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("base costs must be finite and > 0");
  }
}

double pairwise_loss(const AlphaParam& alpha, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("odds ratio must be finite and > 0");
  switch (alpha.kind()) {
    case AlphaParam::Kind::kZeroLimit:
      return r <= 1.0 ? 1.0 - std::log(r) : 1.0 / r;
    case AlphaParam::Kind::kInfinityLimit:
      return 2.0 * tie_split(1.0, r);
    case AlphaParam::Kind::kFinite:
      break;
  }
  const double a = alpha.value();
  const bool log_space = a > kLogSpaceAlpha;
  if (r <= 1.0) return 1.0 + (1.0 + 1.0 / a) * (1.0 - power(r, a, log_space));
  return power(r, -(a + 1.0), log_space);
}

double b_alpha(double alpha) {
  check_alpha(alpha);
  return alpha * alpha / ((alpha + 1.0) * (2.0 * alpha + 1.0));
}

double pairwise_gradient(double alpha, double delta) {
  check_alpha(alpha);
  if (delta <= 0.0) return (alpha + 1.0) * std::exp(alpha * delta);
  return (alpha + 1.0) * std::exp(-(alpha + 1.0) * delta);
}

double pandora_regret(const LabeledForecast& lf) {
  const std::size_t k = lf.size();
  const std::size_t i = lf.true_class;
  const AlphaParam one(1.0);
  const double pi = lf.forecast.clamped(i);
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (j == i) continue;
    total += pairwise_loss(one, pi / lf.forecast.clamped(j));
  }
  return total / (3.0 * static_cast<double>(k - 1));
}

double beta_score(const LabeledForecast& lf, const AlphaParam& alpha, const BaseCosts& costs) {
  check_dims(lf, costs);
  const std::size_t i = lf.true_class;
  double total = 0.0;
  for (std::size_t j = 0; j < lf.size(); ++j) {
    if (j == i) continue;
    total += costs[j] * pairwise_loss(alpha, cost_adjusted_ratio(lf.forecast, costs, i, j));
  }
  return total;
}

double raw_expected_cost(const LabeledForecast& lf, const AlphaParam& alpha, const BaseCosts& costs) {
  check_dims(lf, costs);
  const std::size_t i = lf.true_class;
  switch (alpha.kind()) {
    case AlphaParam::Kind::kZeroLimit:
      throw UnsupportedError("raw expected cost is degenerate in the alpha -> 0 limit; use beta_score");
    case AlphaParam::Kind::kInfinityLimit: {
      // Costs collapse onto C_k; distractor j is paid when it outranks i.
      // h(q_j, q_i) == h(1, r_ij).
      double total = costs[i];
      for (std::size_t j = 0; j < lf.size(); ++j) {
        if (j == i) continue;
        total += costs[j] * tie_split(1.0, cost_adjusted_ratio(lf.forecast, costs, i, j));
      }
      return total;
    }
    case AlphaParam::Kind::kFinite:
      break;
  }
  const double a = alpha.value();
  return a / (a + 1.0) * costs[i] + b_alpha(a) * beta_score(lf, alpha, costs);
}

}  // namespace pandora
