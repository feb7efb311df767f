#pragma once

#include <random>
#include <span>
#include <vector>

namespace ple {

/// Walker/Vose alias table over P(x) proportional to degree(x)^exponent.
/// Construction is O(n); each draw is O(1).
class AliasSampler {
 public:
  explicit AliasSampler(std::span<const double> degrees, double exponent = 0.75);

  int sample(std::mt19937& rng) const;

  /// Rejection-redraws until the result differs from `exclude`.
  int sample_excluding(std::mt19937& rng, int exclude) const;

  int population() const { return static_cast<int>(prob_.size()); }
  const std::vector<double>& probabilities() const { return target_; }

 private:
  std::vector<double> prob_;   // acceptance probability per bucket
  std::vector<int> alias_;
  std::vector<double> target_; // exact normalized distribution
  int support_ = 0;            // nodes with positive probability
};

}  // namespace ple
