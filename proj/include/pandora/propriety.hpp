#pragma once

// Independent numerical checks of the closed forms: a Monte Carlo oracle for
// expected search cost under an arbitrary cost prior, a pathwise check of the
// pairwise decomposition, simplex-grid Bayes-risk scans, and a finite
// difference check of the pairwise gradient.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pandora/forecast.hpp"
#include "pandora/rng.hpp"
#include "pandora/scoring.hpp"
#include "pandora/search.hpp"

namespace pandora {

// Distribution over realized cost vectors.
class CostPrior {
 public:
  enum class Kind { kUniform01, kBeta, kScaledBeta, kEmpirical };

  static CostPrior uniform01(std::uint64_t seed);
  static CostPrior beta(double alpha, std::uint64_t seed);
  // c_k = C_k u_k with u_k iid Beta(alpha, 1).
  static CostPrior scaled_beta(double alpha, BaseCosts base, std::uint64_t seed);
  // Uniform over a finite list of cost vectors.
  static CostPrior empirical(std::vector<RealizedCosts> samples, std::uint64_t seed);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  std::uint64_t seed() const { return seed_; }
  // Finitely supported priors are proper but typically not strictly proper.
  bool finitely_supported() const { return kind_ == Kind::kEmpirical; }
  std::string describe() const;

  // Throws ConfigError if the prior cannot produce K-dimensional draws.
  void validate(std::size_t k) const;
  void draw(Rng& rng, std::span<double> out) const;

 private:
  CostPrior(Kind kind, std::uint64_t seed) : kind_(kind), seed_(seed) {}

  Kind kind_;
  std::uint64_t seed_;
  double alpha_ = 1.0;
  std::vector<double> base_;
  std::vector<RealizedCosts> samples_;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::size_t workers = 1;
};

inline constexpr std::size_t kMinMcSamples = 1000;

// Sample mean and standard error of the simulated search cost. Draws are
// split into `workers` contiguous blocks, block w seeded with
// (prior.seed(), w); results are bit-identical for a fixed worker count.
McEstimate mc_expected_cost(const LabeledForecast& lf, const CostPrior& prior, std::size_t n_samples,
                            std::size_t workers = 1);

// |estimate - target| <= k * SE.
bool within_standard_errors(const McEstimate& est, double target, double k = 3.0);

struct DecompositionReport {
  std::size_t n_samples = 0;
  double direct_mean = 0.0;      // mean simulated total cost
  double decomposed_mean = 0.0;  // mean of c_i + sum_j c_j h(c_i/c_j, p_i/p_j)
  double max_abs_diff = 0.0;     // over draws without a ratio tie
  std::size_t indicator_mismatches = 0;
  std::size_t tie_draws = 0;
};

// Compares, draw by draw, the simulator's total cost with the pairwise
// decomposition. Both sides are summed in class-index order, so on draws
// without a ratio tie the difference is exactly zero. Tie draws carry the
// h = 1/2 split in the decomposed value and are counted, not compared.
DecompositionReport pairwise_decomposition_check(const LabeledForecast& lf, const CostPrior& prior,
                                                 std::size_t n_samples);

using Scorer = std::function<double(const LabeledForecast&)>;

// sum_k pi_k scorer(candidate, k).
double bayes_risk(const Forecast& candidate, const Forecast& true_dist, const Scorer& scorer);

enum class ProprietyVerdict { kStrict, kNonStrict, kImproper };
std::string to_string(ProprietyVerdict v);

struct BayesRiskGrid {
  Forecast true_dist;
  double resolution;
  std::vector<std::vector<double>> points;
  std::vector<double> risks;
  double true_risk = 0.0;
  double grid_min = 0.0;
  // min risk excess over grid points at L1 distance >= 2 * resolution.
  double margin = 0.0;
  std::size_t plateau_points = 0;  // far points tied with the truth
  ProprietyVerdict verdict = ProprietyVerdict::kImproper;
};

// Bayes risk over a barycentric simplex lattice with spacing `resolution`
// (K in {2, 3}, resolution in (0, 0.02]). Strict iff the truth beats every
// lattice point at L1 distance >= 2 * resolution by more than
// 10 * eps * |risk(truth)|; closer points are ignored.
BayesRiskGrid propriety_scan(const Forecast& true_dist, const Scorer& scorer, double resolution);

struct GradientCheckReport {
  double alpha = 1.0;
  std::size_t n_points = 0;
  std::size_t excluded_near_kink = 0;
  double max_rel_error = 0.0;
};

inline constexpr double kGradientStep = 1e-6;
inline constexpr double kKinkExclusion = 1e-4;
inline constexpr double kGradientDeltaRange = 3.0;

// Central differences of L_alpha(exp(delta)) against pairwise_gradient at the
// given logit gaps; gaps with |delta| < kKinkExclusion are skipped.
GradientCheckReport gradient_check(double alpha, std::span<const double> deltas);
// n_points gaps uniform on [-kGradientDeltaRange, kGradientDeltaRange].
GradientCheckReport gradient_check(double alpha, std::size_t n_points, std::uint64_t seed);

}  // namespace pandora
