#include "pandora/forecast.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "pandora/errors.hpp"

namespace pandora {

Forecast::Forecast(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw DomainError("forecast needs at least 2 classes, got " + std::to_string(probs_.size()));
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) throw DomainError("forecast probabilities must be finite and >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw DomainError("forecast probabilities sum to " + std::to_string(total) + ", expected 1");
  }
}

Forecast Forecast::from_weights(std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) throw DomainError("weights must have a positive finite sum");
  for (double& w : weights) w /= total;
  return Forecast(std::move(weights));
}

Forecast Forecast::uniform(std::size_t k) { return Forecast(std::vector<double>(k, 1.0 / static_cast<double>(k))); }

std::size_t Forecast::argmax() const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < probs_.size(); ++k) {
    if (probs_[k] > probs_[best]) best = k;
  }
  return best;
}

LabeledForecast::LabeledForecast(Forecast f, std::size_t label) : forecast(std::move(f)), true_class(label) {
  if (true_class >= forecast.size()) {
    throw DomainError("true class " + std::to_string(true_class) + " out of range for K=" +
                      std::to_string(forecast.size()));
  }
}

}  // namespace pandora
