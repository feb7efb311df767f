#include "ple/sampler.hpp"

#include <cmath>
#include <deque>

#include "ple/errors.hpp"

namespace ple {

AliasSampler::AliasSampler(std::span<const double> degrees, double exponent) {
  const int n = static_cast<int>(degrees.size());
  if (n == 0) throw ConfigError("alias sampler: empty population");

  target_.resize(n);
  double total = 0;
  for (int i = 0; i < n; ++i) {
    if (degrees[i] < 0) throw ConfigError("alias sampler: negative degree");
    target_[i] = degrees[i] > 0 ? std::pow(degrees[i], exponent) : 0.0;
    total += target_[i];
    if (degrees[i] > 0) ++support_;
  }
  if (total <= 0) throw ConfigError("alias sampler: all degrees are zero");
  for (double& p : target_) p /= total;

  // Vose's construction.
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::deque<int> small, large;
  std::vector<double> scaled(n);
  for (int i = 0; i < n; ++i) {
    scaled[i] = target_[i] * n;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    int s = small.front();
    small.pop_front();
    int l = large.front();
    large.pop_front();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = scaled[l] + scaled[s] - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (int i : small) prob_[i] = 1.0;
  for (int i : large) prob_[i] = 1.0;
}

int AliasSampler::sample(std::mt19937& rng) const {
  std::uniform_int_distribution<int> bucket(0, population() - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  int b = bucket(rng);
  return coin(rng) < prob_[b] ? b : alias_[b];
}

int AliasSampler::sample_excluding(std::mt19937& rng, int exclude) const {
  if (support_ == 1 && exclude >= 0 && exclude < population() &&
      target_[exclude] > 0)
    throw ConfigError("alias sampler: nothing to sample besides excluded node");
  int draw;
  do {
    draw = sample(rng);
  } while (draw == exclude);
  return draw;
}

}  // namespace ple
