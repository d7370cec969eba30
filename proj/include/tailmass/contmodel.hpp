#pragma once

// Continuous three-variable reference model with closed forms.
//
//   X1 ~ Exponential(lambda)
//   X2 | X1 ~ Exponential(rate X1)
//   X3 | X1 ~ Uniform(0, X1)
//
// The joint density value of a draw is P = lambda * exp(-X1 * (lambda + X2)),
// which lives in (0, lambda]. Its distribution admits closed forms for the
// density, the CDF, and the fraction of total mass contributed by values
// below a point, making the model an oracle for the empirical estimators and
// the tail fit.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tailmass/prng.hpp"
#include "tailmass/sample.hpp"

namespace tailmass {

struct ContinuousDraw {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
  double p = 0.0;  // joint density value at (x1, x2, x3)
};

class ContinuousExemplar {
 public:
  explicit ContinuousExemplar(double lambda = 1.0) : lambda_(lambda) {
    if (!(lambda > 0.0))
      throw std::invalid_argument("ContinuousExemplar: lambda must be > 0");
  }

  double lambda() const { return lambda_; }

  // Density of the value P at p, for p in (0, lambda].
  double pdf(double p) const {
    require_in_range(p);
    return std::log(lambda_ / p) / lambda_;
  }

  // P(value <= p). Extends with 0 below the support and 1 above it.
  double cdf(double p) const {
    if (p <= 0.0) return 0.0;
    if (p >= lambda_) return 1.0;
    return p * (1.0 - std::log(p / lambda_)) / lambda_;
  }

  // Fraction of the total mass contributed by values below p:
  // integral of t * pdf(t) over (0, p), normalized by E[P] = lambda / 4.
  double mass_below(double p) const {
    if (p <= 0.0) return 0.0;
    if (p >= lambda_) return 1.0;
    const double r = p / lambda_;
    return r * r * (1.0 + 2.0 * std::log(lambda_ / p));
  }

 private:
  void require_in_range(double p) const {
    if (!(p > 0.0) || p > lambda_)
      throw std::invalid_argument("ContinuousExemplar: p outside (0, lambda]");
  }

  double lambda_;
};

// Draws n cases by inverse-CDF transforms of the shared generator and returns
// them with their joint density values as a continuous-mode sample.
// Deterministic in (model, n, seed).
inline std::pair<std::vector<ContinuousDraw>, ProbSample> sample_continuous(
    const ContinuousExemplar& model, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_continuous: n must be >= 1");
  Rng rng(seed);
  std::vector<ContinuousDraw> draws;
  draws.reserve(static_cast<std::size_t>(n));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n));
  const double lambda = model.lambda();
  for (int i = 0; i < n; ++i) {
    ContinuousDraw d;
    d.x1 = rng.exponential(lambda);
    d.x2 = rng.exponential(d.x1);
    d.x3 = rng.next_double() * d.x1;
    d.p = lambda * std::exp(-d.x1 * (lambda + d.x2));
    draws.push_back(d);
    values.push_back(d.p);
  }
  return {std::move(draws), ProbSample(std::move(values), WeightMode::Continuous)};
}

}  // namespace tailmass
