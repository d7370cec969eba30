#pragma once

// ProbSample: an ascending multiset of sampled probability values together
// with the weighting rule that turns it into a mass-fraction estimate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tailmass {

// How much of the total mass a sample point stands for.
//   Discrete:   each point counts 1/n (points were drawn proportionally to
//               their probability, e.g. by logic sampling a network).
//   Continuous: each point counts its own value (points were drawn from the
//               value density, so mass fractions need value weighting).
enum class WeightMode { Discrete, Continuous };

class ProbSample {
 public:
  ProbSample(std::vector<double> values, WeightMode mode)
      : values_(std::move(values)), mode_(mode) {
    if (values_.empty()) throw std::invalid_argument("ProbSample: empty sample");
    std::sort(values_.begin(), values_.end());
    for (double v : values_) {
      if (!std::isfinite(v) || v <= 0.0)
        throw std::invalid_argument("ProbSample: values must be finite and > 0");
      if (mode_ == WeightMode::Discrete && v > 1.0)
        throw std::invalid_argument("ProbSample: discrete values must be <= 1");
    }
  }

  const std::vector<double>& values() const { return values_; }
  WeightMode mode() const { return mode_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;  // ascending
  WeightMode mode_;
};

}  // namespace tailmass
