#pragma once

// Closed-form search-cost scores: the Beta(alpha, 1) pairwise loss family,
// Pandora's Regret (alpha = 1, unit costs), the cost-weighted Beta score and
// its affine link to raw expected search cost.
//
// Conventions shared by every function here:
//  * probabilities are clamped with clamp_probability() before ratios form;
//  * the odds ratio of a true class i against a distractor j is
//    r = (p_i / C_i) / (p_j / C_j), with C = 1 for unit costs;
//  * r == 1 takes the r <= 1 branch, which evaluates to exactly 1.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pandora/forecast.hpp"

namespace pandora {

// Shape parameter of the Beta(alpha, 1) unit-cost prior, or one of its two
// limiting regimes.
class AlphaParam {
 public:
  enum class Kind { kFinite, kZeroLimit, kInfinityLimit };

  explicit AlphaParam(double alpha);
  static AlphaParam zero_limit() { return AlphaParam(Kind::kZeroLimit); }
  static AlphaParam infinity_limit() { return AlphaParam(Kind::kInfinityLimit); }
  // Accepts a positive number, "0"/"zero" or "inf"/"infinity".
  static AlphaParam parse(const std::string& text);

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::kFinite; }
  // Only meaningful for finite alpha.
  double value() const { return value_; }
  std::string to_string() const;

 private:
  explicit AlphaParam(Kind kind) : kind_(kind) {}

  Kind kind_ = Kind::kFinite;
  double value_ = 1.0;
};

// Deterministic per-class base costs C_k > 0.
class BaseCosts {
 public:
  explicit BaseCosts(std::vector<double> costs);
  static BaseCosts unit(std::size_t k) { return BaseCosts(std::vector<double>(k, 1.0)); }

  std::size_t size() const { return costs_.size(); }
  double operator[](std::size_t k) const { return costs_[k]; }
  std::span<const double> values() const { return costs_; }

 private:
  std::vector<double> costs_;
};

// L_alpha(r). Throws DomainError for r <= 0 (or non-finite r).
double pairwise_loss(const AlphaParam& alpha, double r);

// alpha^2 / ((alpha + 1)(2 alpha + 1)). Throws DomainError for alpha <= 0.
double b_alpha(double alpha);

// d/dz_j L_alpha(exp(z_i - z_j)) as a function of the logit gap
// delta = z_i - z_j. Peaks at delta = 0 with value alpha + 1.
double pairwise_gradient(double alpha, double delta);

// (1 / (3(K - 1))) * sum_{j != i} L_1(p_i / p_j). Lies in [0, 1].
double pandora_regret(const LabeledForecast& lf);

// sum_{j != i} C_j L_alpha(q_i / q_j) with q_k = p_k / C_k.
// Throws ConfigError when the cost dimension differs from K.
double beta_score(const LabeledForecast& lf, const AlphaParam& alpha, const BaseCosts& costs);

// Expected total search cost when realized costs are c_k = C_k u_k with
// u_k iid Beta(alpha, 1):  alpha/(alpha+1) C_i + b_alpha * beta_score.
// The infinity limit returns C_i + sum_{j != i} C_j h(q_j, q_i). The zero
// limit degenerates to 0 and throws UnsupportedError.
double raw_expected_cost(const LabeledForecast& lf, const AlphaParam& alpha, const BaseCosts& costs);

// h(a, b) = 1(a > b) + 1/2 1(a = b).
inline double tie_split(double a, double b) { return a > b ? 1.0 : (a == b ? 0.5 : 0.0); }

}  // namespace pandora
