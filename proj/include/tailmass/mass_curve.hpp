#pragma once

// Mass-fraction curves: for a distribution over probability values, the
// nondecreasing map q -> fraction of total mass contributed by values
// strictly below q. Provides the exact enumeration curve, the empirical
// estimator, the Lorenz curve, and a log-normal baseline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tailmass/bayesnet.hpp"
#include "tailmass/errors.hpp"
#include "tailmass/sample.hpp"

namespace tailmass {

// Standard normal CDF. erfc keeps full precision in the lower tail.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Where a curve's numbers come from.
enum class CurveProvenance { ExactEnum, Empirical, TailModel, LogNormal };

inline const char* provenance_label(CurveProvenance p) {
  switch (p) {
    case CurveProvenance::ExactEnum: return "exact_enum";
    case CurveProvenance::Empirical: return "empirical";
    case CurveProvenance::TailModel: return "tail_model";
    case CurveProvenance::LogNormal: return "lognormal";
  }
  return "unknown";
}

// A queryable nondecreasing map q -> mass fraction in [0, 1], tagged with the
// provenance of its values.
class MassCurve {
 public:
  MassCurve(CurveProvenance provenance, std::function<double(double)> eval)
      : provenance_(provenance), eval_(std::move(eval)) {}

  double operator()(double q) const { return eval_(q); }
  CurveProvenance provenance() const { return provenance_; }

 private:
  CurveProvenance provenance_;
  std::function<double(double)> eval_;
};

namespace detail {

// Sorted values with prefix weights; shared by the exact and empirical curves.
struct WeightedLadder {
  std::vector<double> values;  // ascending
  std::vector<double> prefix;  // prefix[k] = weight of values[0..k-1]
  double total = 0.0;

  WeightedLadder(std::vector<double> vals, WeightMode mode)
      : values(std::move(vals)) {
    std::sort(values.begin(), values.end());
    prefix.resize(values.size() + 1, 0.0);
    for (std::size_t k = 0; k < values.size(); ++k)
      prefix[k + 1] =
          prefix[k] + (mode == WeightMode::Discrete ? 1.0 : values[k]);
    total = prefix.back();
  }

  // Weight of values strictly below q, as a fraction of the total.
  double fraction_below(double q) const {
    const auto it = std::lower_bound(values.begin(), values.end(), q);
    return prefix[static_cast<std::size_t>(it - values.begin())] / total;
  }
};

}  // namespace detail

// Fraction of the sample's mass contributed by values strictly below q.
// Discrete mode counts points; continuous mode weights them by value.
inline double empirical_mass_below(const ProbSample& sample, double q) {
  const auto& v = sample.values();
  const auto it = std::lower_bound(v.begin(), v.end(), q);
  if (sample.mode() == WeightMode::Discrete)
    return static_cast<double>(it - v.begin()) / static_cast<double>(v.size());
  double below = 0.0, total = 0.0;
  for (auto p = v.begin(); p != it; ++p) below += *p;
  for (double p : v) total += p;
  return below / total;
}

// Lorenz curve point: the mass fraction held by the lowest floor(r * n)
// values. Requires continuous weighting.
inline double lorenz_point(const ProbSample& sample, double r) {
  if (sample.mode() != WeightMode::Continuous)
    throw std::invalid_argument("lorenz_point: sample must be continuous-mode");
  if (!(r >= 0.0) || r > 1.0)
    throw std::invalid_argument("lorenz_point: r must be in [0, 1]");
  const auto& v = sample.values();
  const auto k = static_cast<std::size_t>(
      std::floor(r * static_cast<double>(v.size())));
  double below = 0.0, total = 0.0;
  for (std::size_t t = 0; t < v.size(); ++t) {
    total += v[t];
    if (t < k) below += v[t];
  }
  return below / total;
}

// Exact mass fraction below q for an enumerable network: sum of the joint
// probabilities strictly below q.
inline double exact_mass_below(const BayesNet& net, double q,
                               std::uint64_t cap = kDefaultEnumerationCap) {
  double below = 0.0;
  for_each_instantiation(
      net, [&below, q](const Instantiation&, double p) { if (p < q) below += p; },
      cap);
  return below;
}

// Exact curve from one enumeration pass; O(log N) per query afterwards.
inline MassCurve exact_mass_curve(const BayesNet& net,
                                  std::uint64_t cap = kDefaultEnumerationCap) {
  std::vector<double> joints;
  for_each_instantiation(
      net, [&joints](const Instantiation&, double p) { joints.push_back(p); },
      cap);
  auto ladder = std::make_shared<detail::WeightedLadder>(std::move(joints),
                                                         WeightMode::Continuous);
  return MassCurve(CurveProvenance::ExactEnum, [ladder](double q) {
    return ladder->fraction_below(q);
  });
}

inline MassCurve empirical_mass_curve(const ProbSample& sample) {
  auto ladder =
      std::make_shared<detail::WeightedLadder>(sample.values(), sample.mode());
  return MassCurve(CurveProvenance::Empirical, [ladder](double q) {
    return ladder->fraction_below(q);
  });
}

// Moments of log joint probability over all instantiations, uniformly
// weighted; sigma is the population standard deviation.
struct LogNormalParams {
  double mu = 0.0;
  double sigma = 0.0;
};

inline LogNormalParams exact_log_normal_params(
    const BayesNet& net, std::uint64_t cap = kDefaultEnumerationCap) {
  double sum = 0.0, sumsq = 0.0;
  std::uint64_t count = 0;
  for_each_instantiation(
      net,
      [&](const Instantiation&, double p) {
        if (p <= 0.0)
          throw NumericalError(
              "exact_log_normal_params: zero-probability instantiation");
        const double lp = std::log(p);
        sum += lp;
        sumsq += lp * lp;
        ++count;
      },
      cap);
  LogNormalParams out;
  out.mu = sum / static_cast<double>(count);
  const double var = sumsq / static_cast<double>(count) - out.mu * out.mu;
  out.sigma = var > 0.0 ? std::sqrt(var) : 0.0;
  return out;
}

// Log-normal estimate of the mass fraction below q: the normal CDF of log q,
// renormalized so the estimate reaches 1 at q = 1. sigma = 0 degenerates to a
// step at e^mu.
inline double log_normal_mass_below(const LogNormalParams& params, double q) {
  if (q <= 0.0) return 0.0;
  if (q >= 1.0) return 1.0;
  const double lq = std::log(q);
  if (params.sigma == 0.0) return lq < params.mu ? 0.0 : 1.0;
  return normal_cdf((lq - params.mu) / params.sigma) /
         normal_cdf(-params.mu / params.sigma);
}

inline MassCurve log_normal_mass_curve(const LogNormalParams& params) {
  return MassCurve(CurveProvenance::LogNormal, [params](double q) {
    return log_normal_mass_below(params, q);
  });
}

}  // namespace tailmass
