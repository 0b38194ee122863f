#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pandora {

// Probabilities below this floor are raised to it before any ratio or
// logarithm is formed. The vector is not renormalized afterwards.
inline constexpr double kProbabilityFloor = 1e-12;

// Tolerance on |sum(p) - 1| accepted by Forecast.
inline constexpr double kSimplexTolerance = 1e-9;

inline double clamp_probability(double p) { return p < kProbabilityFloor ? kProbabilityFloor : p; }

// A probability vector over K >= 2 classes. Construction validates the
// simplex constraint; the object is immutable afterwards.
class Forecast {
 public:
  explicit Forecast(std::vector<double> probs);

  // Normalizes nonnegative weights onto the simplex.
  static Forecast from_weights(std::vector<double> weights);
  static Forecast uniform(std::size_t k);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t k) const { return probs_[k]; }
  double clamped(std::size_t k) const { return clamp_probability(probs_[k]); }
  std::span<const double> probs() const { return probs_; }

  // Index of the largest probability; ties go to the lowest index.
  std::size_t argmax() const;

  friend bool operator==(const Forecast&, const Forecast&) = default;

 private:
  std::vector<double> probs_;
};

struct LabeledForecast {
  LabeledForecast(Forecast f, std::size_t label);

  Forecast forecast;
  std::size_t true_class;

  std::size_t size() const { return forecast.size(); }

  friend bool operator==(const LabeledForecast&, const LabeledForecast&) = default;
};

}  // namespace pandora
