#pragma once

// Left-tail model for mass-fraction curves: below a threshold u the curve is
// approximated by G(u) * U(q - u), where U is a reversed generalized Pareto
// CDF on z <= 0. Parameters are estimated from pairs of order statistics of
// the below-threshold sample: each pair (i, j) yields one equation system
// whose scale root is bracketed by a known interval and solved by bisection,
// and the pair estimates are aggregated robustly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "tailmass/errors.hpp"
#include "tailmass/mass_curve.hpp"
#include "tailmass/sample.hpp"

namespace tailmass {

// Reversed generalized Pareto parameters. Valid sign pairings:
//   alpha > 0, delta > 0: support (-delta, 0], finite lower endpoint;
//   alpha < 0, delta < 0: support (-inf, 0], unbounded tail;
//   alpha = 0, delta > 0: exponential limit exp(z / delta).
struct RgpdParams {
  double delta = 0.0;
  double alpha = 0.0;

  bool is_valid() const {
    if (!std::isfinite(delta) || !std::isfinite(alpha)) return false;
    if (alpha > 0.0) return delta > 0.0;
    if (alpha < 0.0) return delta < 0.0;
    return delta > 0.0;
  }
};

// U(z): nondecreasing from 0 to U(0) = 1 on z <= 0. For alpha > 0 the value
// is clamped to 0 at and below the lower support endpoint z = -delta.
inline double rgpd_cdf(double z, const RgpdParams& params) {
  if (!params.is_valid())
    throw std::invalid_argument("rgpd_cdf: invalid parameter signs");
  if (z > 0.0) throw std::domain_error("rgpd_cdf: z must be <= 0");
  if (params.alpha == 0.0) return std::exp(z / params.delta);
  if (params.alpha > 0.0 && z <= -params.delta) return 0.0;
  return std::pow(1.0 + z / params.delta, 1.0 / params.alpha);
}

// Inverse of rgpd_cdf on v in (0, 1].
inline double rgpd_quantile(double v, const RgpdParams& params) {
  if (!params.is_valid())
    throw std::invalid_argument("rgpd_quantile: invalid parameter signs");
  if (!(v > 0.0) || v > 1.0)
    throw std::domain_error("rgpd_quantile: v must be in (0, 1]");
  if (params.alpha == 0.0) return params.delta * std::log(v);
  return params.delta * (std::pow(v, params.alpha) - 1.0);
}

// One pair's inputs: two below-threshold order statistics p_i <= p_j < u and
// their log conditional weight fractions c_i <= c_j < 0.
struct PairInputs {
  double p_i = 0.0;
  double p_j = 0.0;
  double c_i = 0.0;
  double c_j = 0.0;
  double u = 0.0;
};

// Residual whose zero in delta solves the pair's equation system:
//   c_i * log(1 + (p_j - u) / delta) - c_j * log(1 + (p_i - u) / delta).
// Defined for delta < 0 or delta > u - p_i; non-finite outside.
inline double scale_equation(double delta, const PairInputs& in) {
  return in.c_i * std::log1p((in.p_j - in.u) / delta) -
         in.c_j * std::log1p((in.p_i - in.u) / delta);
}

enum class PairStatus {
  Ok,                 // scale root bracketed and solved
  AlphaZero,          // degenerate direction d ~ 0: exponential closure
  DegenerateSkipped,  // tied values or unusable weight fractions
  BracketFailed       // no representable sign change near the singular end
};

inline const char* pair_status_label(PairStatus s) {
  switch (s) {
    case PairStatus::Ok: return "ok";
    case PairStatus::AlphaZero: return "alpha_zero";
    case PairStatus::DegenerateSkipped: return "degenerate_skipped";
    case PairStatus::BracketFailed: return "bracket_failed";
  }
  return "unknown";
}

struct PairEstimate {
  std::size_t i = 0;  // 1-based order-statistic indices
  std::size_t j = 0;
  PairStatus status = PairStatus::DegenerateSkipped;
  double delta = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
};

enum class RobustMethod { Median, Lms };

struct FitConfig {
  RobustMethod robust = RobustMethod::Median;
  // |d| <= d_zero_tol * scale switches a pair to the exponential closure.
  double d_zero_tol = 1e-12;
  // Bisection may stop early once |residual| <= bisection_tol * (|c_i|+|c_j|)
  // and the bracket is relatively tight; otherwise it runs to the
  // representable limit of the bracket.
  double bisection_tol = 1e-12;
  int max_iterations = 200;
};

// Solves one pair. The root interval follows the sign of
// d = c_i (u - p_j) - c_j (u - p_i): for d > 0 the root lies in (delta0, 0),
// for d < 0 in (u - p_i, delta0), with
// delta0 = (c_i - c_j)(u - p_i)(u - p_j) / d the single interior critical
// point of the residual. The residual diverges to -inf at the singular
// interval end (0 or u - p_i), so that end is approached geometrically until
// a sign change is found; roots closer to the singular end than one ulp are
// reported as BracketFailed.
inline PairEstimate solve_pair(PairInputs in, const FitConfig& config = {}) {
  PairEstimate out;
  // canonical order: p_i <= p_j pairs with c_i <= c_j
  if (in.p_i > in.p_j) {
    std::swap(in.p_i, in.p_j);
    std::swap(in.c_i, in.c_j);
  }
  const bool finite_inputs = std::isfinite(in.p_i) && std::isfinite(in.p_j) &&
                             std::isfinite(in.c_i) && std::isfinite(in.c_j);
  if (!finite_inputs || !(in.p_j < in.u) || !(in.c_i < 0.0) || !(in.c_j < 0.0) ||
      in.p_i == in.p_j || in.c_i == in.c_j || in.c_i > in.c_j) {
    out.status = PairStatus::DegenerateSkipped;
    return out;
  }

  const double d = in.c_i * (in.u - in.p_j) - in.c_j * (in.u - in.p_i);
  const double d_scale =
      std::max(std::abs(in.c_i * (in.u - in.p_j)), std::abs(in.c_j * (in.u - in.p_i)));
  if (std::abs(d) <= config.d_zero_tol * d_scale) {
    // Exponential closure: the unique scale reproducing c_i exactly.
    out.status = PairStatus::AlphaZero;
    out.delta = (in.p_i - in.u) / in.c_i;
    out.alpha = 0.0;
    return out;
  }

  const double delta0 = (in.c_i - in.c_j) * (in.u - in.p_i) * (in.u - in.p_j) / d;
  const double singular = d > 0.0 ? 0.0 : in.u - in.p_i;  // residual -> -inf here
  const double sgn = d > 0.0 ? -1.0 : 1.0;                // approach direction
  const double width = std::abs(singular - delta0);
  const double h_at_delta0 = scale_equation(delta0, in);
  if (!(width > 0.0) || !std::isfinite(h_at_delta0) || h_at_delta0 < 0.0) {
    out.status = PairStatus::BracketFailed;
    return out;
  }
  if (h_at_delta0 == 0.0) {
    out.status = PairStatus::Ok;
    out.delta = delta0;
    out.alpha = std::log1p((in.p_i - in.u) / delta0) / in.c_i;
    return out;
  }

  // Bracket the root against the singular end: grow the offset while the
  // residual is non-finite, shrink it geometrically while the residual still
  // has the sign of h(delta0). Roots closer to the singular end than the
  // smallest representable offset are reported as BracketFailed.
  double eps = std::max(1e-12, 1e-9 * width);
  double near = 0.0, h_near = 0.0;
  int grow_tries = 0;
  while (true) {
    const double x = singular + sgn * eps;
    if (x == singular) {
      out.status = PairStatus::BracketFailed;
      return out;
    }
    const double hx = scale_equation(x, in);
    if (!std::isfinite(hx)) {
      if (++grow_tries > 8) {
        out.status = PairStatus::BracketFailed;
        return out;
      }
      eps *= 10.0;
      continue;
    }
    if (hx < 0.0) {
      near = x;
      h_near = hx;
      break;
    }
    eps *= 1e-3;
    if (eps < 1e-320) {
      out.status = PairStatus::BracketFailed;
      return out;
    }
  }

  double lo = std::min(delta0, near);
  double hi = std::max(delta0, near);
  double h_lo = lo == delta0 ? h_at_delta0 : h_near;
  double best_x = near, best_h = std::abs(h_near);
  if (std::abs(h_at_delta0) < best_h) {
    best_x = delta0;
    best_h = std::abs(h_at_delta0);
  }
  const double h_scale = std::abs(in.c_i) + std::abs(in.c_j);
  for (int it = 0; it < config.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double hm = scale_equation(mid, in);
    if (std::abs(hm) < best_h) {
      best_x = mid;
      best_h = std::abs(hm);
    }
    if (hm == 0.0) break;
    if ((hm < 0.0) == (h_lo < 0.0)) {
      lo = mid;
      h_lo = hm;
    } else {
      hi = mid;
    }
    if (best_h <= config.bisection_tol * h_scale &&
        hi - lo <= 1e-9 * std::abs(mid))
      break;
  }
  out.status = PairStatus::Ok;
  out.delta = best_x;
  out.alpha = std::log1p((in.p_i - in.u) / best_x) / in.c_i;
  return out;
}

// Below-threshold view of a sample: ascending values < u with prefix weights,
// ready to serve order statistics and log conditional weight fractions.
class TailSample {
 public:
  TailSample(const std::vector<double>& values, WeightMode mode, double u)
      : TailSample(std::span<const double>(values), mode, u) {}

  TailSample(std::span<const double> values, WeightMode mode, double u)
      : mode_(mode), u_(u) {
    for (double v : values)
      if (v < u) {
        if (mode == WeightMode::Continuous && !(v > 0.0))
          throw std::invalid_argument(
              "TailSample: continuous weighting needs positive values");
        values_.push_back(v);
      }
    std::sort(values_.begin(), values_.end());
    prefix_.resize(values_.size() + 1, 0.0);
    for (std::size_t k = 0; k < values_.size(); ++k)
      prefix_[k + 1] =
          prefix_[k] + (mode == WeightMode::Discrete ? 1.0 : values_[k]);
  }

  std::size_t m() const { return values_.size(); }
  WeightMode mode() const { return mode_; }
  double threshold() const { return u_; }

  // 1-based order statistic.
  double value(std::size_t i) const { return values_.at(i - 1); }

  // log of (weight strictly below value(i)) / (total below-threshold weight).
  // -inf when nothing lies strictly below value(i).
  double log_fraction_below(std::size_t i) const {
    const double v = value(i);
    const auto k = static_cast<std::size_t>(
        std::lower_bound(values_.begin(), values_.end(), v) - values_.begin());
    return std::log(prefix_[k] / prefix_.back());
  }

 private:
  std::vector<double> values_;
  std::vector<double> prefix_;
  WeightMode mode_;
  double u_;
};

inline PairEstimate estimate_pair(const TailSample& tail, std::size_t i,
                                  std::size_t j, const FitConfig& config = {}) {
  if (!(i >= 1 && i < j && j <= tail.m()))
    throw std::invalid_argument("estimate_pair: need 1 <= i < j <= m");
  PairInputs in{tail.value(i), tail.value(j), tail.log_fraction_below(i),
                tail.log_fraction_below(j), tail.threshold()};
  PairEstimate est = solve_pair(in, config);
  est.i = i;
  est.j = j;
  return est;
}

inline double median_of(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median_of: empty input");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Least-median-of-squares location: the midpoint of the shortest interval
// containing floor(n/2) + 1 of the values; ties resolve to the smallest
// midpoint. Equals the sample value for n = 1.
inline double lms_location(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("lms_location: empty input");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const std::size_t half = n / 2 + 1;
  double best_width = std::numeric_limits<double>::infinity();
  double best_mid = v.front();
  for (std::size_t k = 0; k + half <= n; ++k) {
    const double width = v[k + half - 1] - v[k];
    const double mid = 0.5 * (v[k] + v[k + half - 1]);
    if (width < best_width || (width == best_width && mid < best_mid)) {
      best_width = width;
      best_mid = mid;
    }
  }
  return best_mid;
}

struct FitResult {
  RgpdParams params;
  double u = 0.0;
  std::size_t m = 0;           // below-threshold count
  std::size_t base_index = 0;  // the fixed i paired against every j
  RobustMethod robust = RobustMethod::Median;
  std::vector<PairEstimate> pairs;
  std::size_t usable = 0;  // pairs contributing to the aggregate
};

// Fits tail parameters from all pairs (i, j), i = max(1, floor(m / 10)),
// j = i+1 .. m-1, aggregating the usable pair estimates componentwise with
// the configured robust location. Requires m >= 20 below-threshold values
// and at least 3 usable pairs.
inline FitResult fit_tail(const TailSample& tail, const FitConfig& config = {}) {
  FitResult out;
  out.u = tail.threshold();
  out.m = tail.m();
  out.robust = config.robust;
  if (out.m < 20)
    throw std::invalid_argument("fit_tail: m < 20 below-threshold values");
  out.base_index = std::max<std::size_t>(1, out.m / 10);
  std::vector<double> deltas, alphas;
  for (std::size_t j = out.base_index + 1; j + 1 <= out.m; ++j) {
    PairEstimate est = estimate_pair(tail, out.base_index, j, config);
    if (est.status == PairStatus::Ok || est.status == PairStatus::AlphaZero) {
      deltas.push_back(est.delta);
      alphas.push_back(est.alpha);
    }
    out.pairs.push_back(est);
  }
  out.usable = deltas.size();
  if (out.usable < 3)
    throw NumericalError("fit_tail: fewer than 3 usable pair estimates");
  const bool lms = config.robust == RobustMethod::Lms;
  out.params.delta = lms ? lms_location(deltas) : median_of(deltas);
  out.params.alpha = lms ? lms_location(alphas) : median_of(alphas);
  return out;
}

inline FitResult fit_tail(const ProbSample& sample, double u,
                          const FitConfig& config = {}) {
  return fit_tail(TailSample(sample.values(), sample.mode(), u), config);
}

// A fitted tail: mass fraction G(u) at the threshold scaled by the RGPD
// shape below it. Valid on q0 < q <= u (q0 = 0 unless the curve is known to
// vanish below some positive point).
struct TailModel {
  double u = 0.0;
  double g_at_u = 0.0;  // in (0, 1]
  RgpdParams params;
  double q0 = 0.0;

  TailModel(double u, double g_at_u, RgpdParams params, double q0 = 0.0)
      : u(u), g_at_u(g_at_u), params(params), q0(q0) {
    if (!(g_at_u > 0.0) || g_at_u > 1.0)
      throw std::invalid_argument("TailModel: g_at_u must be in (0, 1]");
    if (!(q0 < u)) throw std::invalid_argument("TailModel: q0 must be < u");
    if (!params.is_valid())
      throw NumericalError("TailModel: invalid fitted parameters");
  }

  double mass_below(double q) const {
    if (!(q > q0) || q > u)
      throw std::domain_error("TailModel: q outside (q0, u]");
    return g_at_u * rgpd_cdf(q - u, params);
  }
};

// Curve wrapper: clamps to 0 at or below q0 and to the threshold value above
// u, keeping the map nondecreasing on all of (0, inf).
inline MassCurve tail_mass_curve(const TailModel& model) {
  return MassCurve(CurveProvenance::TailModel, [model](double q) {
    if (q <= model.q0) return 0.0;
    if (q > model.u) return model.g_at_u;
    return model.mass_below(q);
  });
}

enum class ThresholdStrategy { OrderStatistic, HalvingSchedule };

// Picks the fitting threshold u for a sample.
//   OrderStatistic: midpoint between the k-th and (k+1)-th smallest values,
//     k = target_count, so exactly k values lie strictly below u. When tied
//     values make that count unreachable, the nearest separable k is used
//     (preferring the smaller k on distance ties).
//   HalvingSchedule: starts at start_u and halves until at most
//     1.2 * target_count values lie below; errors if the count drops
//     below 20.
inline double select_threshold(const ProbSample& sample, int target_count = 50,
                               ThresholdStrategy strategy = ThresholdStrategy::OrderStatistic,
                               double start_u = 0.005) {
  const auto& v = sample.values();
  const auto n = v.size();
  if (target_count < 1)
    throw std::invalid_argument("select_threshold: target_count must be >= 1");
  if (strategy == ThresholdStrategy::OrderStatistic) {
    const auto target = static_cast<std::size_t>(target_count);
    if (target >= n)
      throw std::invalid_argument(
          "select_threshold: target_count must be below the sample size");
    auto separable = [&v](std::size_t k) { return v[k - 1] < v[k]; };
    std::size_t k = target;
    if (!separable(k)) {
      std::size_t best = 0;
      for (std::size_t cand = 1; cand < n; ++cand) {
        if (!separable(cand)) continue;
        const auto dist = cand > target ? cand - target : target - cand;
        const auto best_dist = best > target ? best - target : target - best;
        if (best == 0 || dist < best_dist) best = cand;
      }
      if (best == 0)
        throw std::invalid_argument(
            "select_threshold: all values identical, no separating threshold");
      k = best;
    }
    return 0.5 * (v[k - 1] + v[k]);
  }
  if (!(start_u > 0.0))
    throw std::invalid_argument("select_threshold: start_u must be > 0");
  double u = start_u;
  while (true) {
    const auto count = static_cast<std::size_t>(
        std::lower_bound(v.begin(), v.end(), u) - v.begin());
    if (count <= 1.2 * static_cast<double>(target_count)) {
      if (count < 20)
        throw NumericalError(
            "select_threshold: halving schedule left fewer than 20 values");
      return u;
    }
    u *= 0.5;
    if (u == 0.0)
      throw NumericalError("select_threshold: halving schedule underflowed");
  }
}

}  // namespace tailmass
