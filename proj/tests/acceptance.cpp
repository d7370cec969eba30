// Acceptance suite: end-to-end checks of the estimation pipeline, one
// PASS/FAIL line per criterion. Exits nonzero if any criterion fails.
//
// Tolerances and seed sets are frozen; a failure here means the behavior of
// the pipeline changed, not that a knob needs retuning.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "tailmass/tailmass.hpp"

using namespace tailmass;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s  [%s]\n", index, pass ? "PASS" : "FAIL",
              name, detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    grid[static_cast<std::size_t>(k)] =
        lo * std::pow(hi / lo, double(k) / double(n - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

// Fits the tail of a sample and wraps it as a model anchored at the
// empirical mass fraction at u. Throws on unusable fits.
TailModel fit_model(const ProbSample& sample, double u,
                    const FitConfig& config = {}) {
  const FitResult fit = fit_tail(sample, u, config);
  if (!fit.params.is_valid())
    throw NumericalError("aggregated parameters have invalid signs");
  return TailModel(u, empirical_mass_below(sample, u), fit.params);
}

// ---------------------------------------------------------------------------
// criterion 1: closed-form reference points of the continuous model

void criterion_1() {
  const ContinuousExemplar model(1.0);
  struct Row {
    double p, cdf17, mass17, cdf4, mass4;
  };
  // 17-digit values frozen from the closed forms; 4-digit values as
  // independently published for the same model
  const Row rows[] = {
      {0.05, 0.19978661367769955, 0.017478661367769955, 0.1998, 0.0174},
      {0.01, 0.056051701859880914, 0.0010210340371976183, 0.0561, 0.00102},
      {0.005, 0.031491586832740183, 0.00028991586832740183, 0.0315, 0.000289},
      {0.002, 0.014429216196844383, 5.3716864787377534e-5, 0.0144, 0.0000537},
  };
  bool pass = true;
  double worst = 0.0;
  for (const Row& r : rows) {
    const double f = model.cdf(r.p), g = model.mass_below(r.p);
    const double e1 = std::abs(f - r.cdf17) / r.cdf17;
    const double e2 = std::abs(g - r.mass17) / r.mass17;
    const double e3 = std::abs(f - r.cdf4) / r.cdf4;
    const double e4 = std::abs(g - r.mass4) / r.mass4;
    worst = std::max({worst, e1, e2});
    pass = pass && e1 <= 1e-12 && e2 <= 1e-12 && e3 <= 1e-2 && e4 <= 1e-2;
  }
  report(1, "closed-form reference points", pass,
         "max rel err vs frozen " + fmt(worst));
}

// ---------------------------------------------------------------------------
// criterion 2: continuous-model tail estimates across seeds

// Documented reference run for the deep extrapolation point; see README.
constexpr std::uint64_t kReferenceSeed = 20000;

void criterion_2() {
  const ContinuousExemplar model(1.0);
  const double qs[] = {0.05, 0.01, 0.005};
  int rel_pass = 0, factor_pass = 0, usable = 0;
  double ref_factor = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 50; ++s) {
    const std::uint64_t seed = 20000 + static_cast<std::uint64_t>(s);
    try {
      const auto [draws, sample] = sample_continuous(model, 1000, seed);
      const double u = select_threshold(sample, 320);
      const TailModel tail = fit_model(sample, u);
      ++usable;
      bool ok = true;
      for (double q : qs) {
        const double truth = model.mass_below(q);
        ok = ok && std::abs(tail.mass_below(q) - truth) / truth <= 0.5;
      }
      rel_pass += ok ? 1 : 0;
      const double est = tail.mass_below(0.002);
      const double truth = model.mass_below(0.002);
      const double factor = est > 0.0
                                ? std::max(est / truth, truth / est)
                                : std::numeric_limits<double>::infinity();
      factor_pass += factor <= 5.0 ? 1 : 0;
      if (seed == kReferenceSeed) ref_factor = factor;
    } catch (const std::exception&) {
      // an unusable fit counts against the pass rates
    }
  }
  const bool pass = rel_pass >= 45 && ref_factor <= 5.0;
  report(2, "continuous tail estimates across seeds", pass,
         "rel<=0.5 at q in {0.05,0.01,0.005}: " + std::to_string(rel_pass) +
             "/50; factor<=5 at 0.002: reference seed " + fmt(ref_factor) +
             ", ensemble " + std::to_string(factor_pass) + "/50");
}

// ---------------------------------------------------------------------------
// criteria 3 and 4: sampled networks against exact enumeration, and the
// log-normal baseline's failure on the same networks

void criteria_3_4() {
  int agree[2] = {0, 0};
  int lognormal_off = 0;
  const CptRegime regimes[] = {CptRegime::UnitUniform, CptRegime::Extreme};
  for (int r = 0; r < 2; ++r) {
    for (int s = 0; s < 25; ++s) {
      const DerivedSeeds seeds(5000 + static_cast<std::uint64_t>(s));
      const BayesNet net = random_network(15, 2, 3, regimes[r], seeds.net);
      const MassCurve exact = exact_mass_curve(net);
      try {
        const ProbSample sample = logic_sample(net, 1000, seeds.sample);
        const double u = select_threshold(sample, 50);
        const TailModel tail = fit_model(sample, u);
        const MassCurve curve = tail_mass_curve(tail);
        double sup = 0.0;
        for (double q : log_grid(u / 1000.0, u, 40))
          sup = std::max(sup, std::abs(curve(q) - exact(q)));
        agree[r] += sup <= 0.05 ? 1 : 0;
      } catch (const std::exception&) {
        // unusable fit: the seed fails
      }
      if (regimes[r] == CptRegime::UnitUniform) {
        const MassCurve lognormal =
            log_normal_mass_curve(exact_log_normal_params(net));
        const double q = 5e-6;
        lognormal_off += std::abs(lognormal(q) - exact(q)) > 0.5 ? 1 : 0;
      }
    }
  }
  report(3, "sampled networks match exact curves", agree[0] >= 20 && agree[1] >= 20,
         "sup diff <= 0.05 on 40-point grid: uniform " + std::to_string(agree[0]) +
             "/25, extreme " + std::to_string(agree[1]) + "/25");
  report(4, "log-normal baseline misses the deep tail", lognormal_off >= 20,
         "|lognormal - exact| > 0.5 at q = 5e-6: " + std::to_string(lognormal_off) +
             "/25 uniform networks");
}

// ---------------------------------------------------------------------------
// criterion 5: truncated-marginal errors never exceed the dropped mass

void criterion_5() {
  const double p0s[] = {1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  int checks = 0, holds = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    const DerivedSeeds seeds(3000 + static_cast<std::uint64_t>(t));
    const BayesNet net = random_network(12, 2, 3, CptRegime::UnitUniform, seeds.net);
    const auto exact = exact_marginals(net);
    for (double p0 : p0s) {
      const TruncatedMarginals trunc = truncated_marginals(net, p0);
      double max_err = 0.0;
      for (std::size_t v = 0; v < exact.size(); ++v)
        for (std::size_t s = 0; s < exact[v].size(); ++s)
          max_err = std::max(max_err,
                             std::abs(exact[v][s] - trunc.marginals[v][s]));
      const double bound = exact_mass_below(net, p0);
      ++checks;
      holds += max_err <= bound + 1e-12 ? 1 : 0;
      worst_slack = std::min(worst_slack, bound + 1e-12 - max_err);
    }
  }
  report(5, "marginal error bounded by dropped mass", holds == checks,
         std::to_string(holds) + "/" + std::to_string(checks) +
             " network/threshold pairs; min slack " + fmt(worst_slack));
}

// ---------------------------------------------------------------------------
// criterion 6: pair solver on realistic and analytic tuples

void criterion_6() {
  Rng rng(42);
  int solved = 0, alpha_zero = 0, skipped = 0;
  int bad_status = 0, bad_interval = 0, bad_residual = 0;
  double worst_h = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const int m = 20 + static_cast<int>(rng.next_below(2981));
    const double sign = rng.next_below(2) == 0 ? 1.0 : -1.0;
    const double alpha = sign * (0.1 + 1.9 * rng.next_double());
    const double delta = sign * 0.1 * std::pow(100.0, rng.next_double());
    const double shifts[] = {0.0, 0.5, -0.5, 3.0};
    const double u = shifts[rng.next_below(4)];
    const RgpdParams truth{delta, alpha};
    std::vector<double> z(static_cast<std::size_t>(m));
    for (double& w : z) {
      double v = rng.next_double();
      if (v == 0.0) v = 0.5;
      w = rgpd_quantile(v, truth);
    }
    std::sort(z.begin(), z.end());
    const int i = 2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m - 3)));
    const int j =
        i + 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m - 1 - i)));
    PairInputs in;
    in.u = u;
    in.p_i = u + z[static_cast<std::size_t>(i - 1)];
    in.p_j = u + z[static_cast<std::size_t>(j - 1)];
    in.c_i = std::log((i - 1) / double(m));
    in.c_j = std::log((j - 1) / double(m));
    if (in.p_i == in.p_j) {
      ++skipped;
      continue;
    }
    const PairEstimate est = solve_pair(in);
    if (est.status == PairStatus::AlphaZero) {
      ++alpha_zero;
      continue;
    }
    if (est.status != PairStatus::Ok) {
      ++bad_status;
      continue;
    }
    ++solved;
    const double d = in.c_i * (in.u - in.p_j) - in.c_j * (in.u - in.p_i);
    const double delta0 =
        (in.c_i - in.c_j) * (in.u - in.p_i) * (in.u - in.p_j) / d;
    const bool inside = d > 0.0 ? (est.delta >= delta0 && est.delta < 0.0)
                                : (est.delta > in.u - in.p_i && est.delta <= delta0);
    if (!inside) ++bad_interval;
    const double h = std::abs(scale_equation(est.delta, in));
    worst_h = std::max(worst_h, h);
    if (h > 1e-9) ++bad_residual;
  }

  int analytic_bad = 0;
  double worst_rel = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double sign = rng.next_below(2) == 0 ? 1.0 : -1.0;
    const double alpha = sign * (0.1 + 1.9 * rng.next_double());
    const double delta = sign * 0.1 * std::pow(100.0, rng.next_double());
    const double shifts[] = {0.0, 0.5, -0.5, 3.0};
    const double u = shifts[rng.next_below(4)];
    const RgpdParams truth{delta, alpha};
    const double vi = 0.05 + 0.4 * rng.next_double();
    const double vj = 0.55 + 0.4 * rng.next_double();
    PairInputs in;
    in.u = u;
    in.p_i = u + rgpd_quantile(vi, truth);
    in.p_j = u + rgpd_quantile(vj, truth);
    in.c_i = std::log(vi);
    in.c_j = std::log(vj);
    const PairEstimate est = solve_pair(in);
    if (est.status != PairStatus::Ok) {
      ++analytic_bad;
      continue;
    }
    const double rd = std::abs(est.delta - delta) / std::abs(delta);
    const double ra = std::abs(est.alpha - alpha) / std::abs(alpha);
    worst_rel = std::max({worst_rel, rd, ra});
    if (rd > 1e-6 || ra > 1e-6) ++analytic_bad;
  }

  const bool pass = bad_status == 0 && bad_interval == 0 && bad_residual == 0 &&
                    analytic_bad == 0;
  report(6, "pair solver: intervals, residuals, analytic recovery", pass,
         std::to_string(solved) + " solved, " + std::to_string(alpha_zero) +
             " alpha-zero, " + std::to_string(skipped) +
             " tied; failures status/interval/residual " +
             std::to_string(bad_status) + "/" + std::to_string(bad_interval) +
             "/" + std::to_string(bad_residual) + ", max |h| " + fmt(worst_h) +
             "; analytic bad " + std::to_string(analytic_bad) +
             ", max rel err " + fmt(worst_rel));
}

// ---------------------------------------------------------------------------
// criterion 7: parameter recovery from synthetic tail samples

void criterion_7() {
  bool pass = true;
  std::string detail;
  for (double alpha : {-1.0, -0.5, 0.5, 1.0}) {
    const double delta = alpha > 0 ? 1.0 : -1.0;
    const RgpdParams truth{delta, alpha};
    int good = 0;
    for (int s = 0; s < 20; ++s) {
      Rng rng(1000 + static_cast<std::uint64_t>(s));
      std::vector<double> z(10000);
      for (double& w : z) {
        double v = rng.next_double();
        if (v == 0.0) v = 0.5;
        w = rgpd_quantile(v, truth);
      }
      try {
        const FitResult fit = fit_tail(TailSample(z, WeightMode::Discrete, 0.0));
        const bool ok = std::abs(fit.params.alpha - alpha) <= 0.15 &&
                        std::abs(fit.params.delta - delta) <= 0.15 * std::abs(delta);
        good += ok ? 1 : 0;
      } catch (const std::exception&) {
      }
    }
    pass = pass && good >= 18;
    if (!detail.empty()) detail += ", ";
    detail += "alpha " + fmt(alpha) + ": " + std::to_string(good) + "/20";
  }
  report(7, "parameter recovery from synthetic samples", pass, detail);
}

// ---------------------------------------------------------------------------
// criterion 8: robust location equals an independent window scan

void criterion_8() {
  Rng rng(8);
  int mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(rng.next_below(40));
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v)
      x = static_cast<double>(rng.next_below(16)) / 8.0;  // ties likely
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t half = sorted.size() / 2 + 1;
    double best_w = 0.0, best_m = 0.0;
    bool first = true;
    for (std::size_t k = 0; k + half <= sorted.size(); ++k) {
      const double w = sorted[k + half - 1] - sorted[k];
      const double mid = 0.5 * (sorted[k] + sorted[k + half - 1]);
      if (first || w < best_w || (w == best_w && mid < best_m)) {
        best_w = w;
        best_m = mid;
        first = false;
      }
    }
    if (first) best_m = sorted.front();
    if (lms_location(v) != best_m) ++mismatches;
  }
  report(8, "robust location matches the window-scan oracle", mismatches == 0,
         std::to_string(1000 - mismatches) + "/1000 lists identical");
}

// ---------------------------------------------------------------------------
// criterion 9: determinism and structural properties

void criterion_9() {
  bool pass = true;
  std::string detail;
  auto check = [&](bool ok, const char* what) {
    pass = pass && ok;
    if (!ok) {
      if (!detail.empty()) detail += ", ";
      detail += what;
    }
  };

  // determinism of every sampling stage
  {
    const BayesNet a = random_network(15, 2, 3, CptRegime::UnitUniform, 77);
    const BayesNet b = random_network(15, 2, 3, CptRegime::UnitUniform, 77);
    const BayesNet c = random_network(15, 2, 3, CptRegime::UnitUniform, 78);
    check(a.parents == b.parents && a.cpts == b.cpts, "network determinism");
    check(a.parents != c.parents || a.cpts != c.cpts, "network seed sensitivity");
    const ProbSample s1 = logic_sample(a, 500, 9);
    const ProbSample s2 = logic_sample(a, 500, 9);
    const ProbSample s3 = logic_sample(a, 500, 10);
    check(s1.values() == s2.values(), "logic-sample determinism");
    check(s1.values() != s3.values(), "logic-sample seed sensitivity");
    const ContinuousExemplar model(1.0);
    const auto d1 = sample_continuous(model, 500, 9);
    const auto d2 = sample_continuous(model, 500, 9);
    check(d1.second.values() == d2.second.values(), "continuous determinism");
  }

  // curve structure: nondecreasing, within [0, 1], exact curve reaches 1
  for (int s = 0; s < 5; ++s) {
    const DerivedSeeds seeds(5000 + static_cast<std::uint64_t>(s));
    const BayesNet net = random_network(15, 2, 3, CptRegime::UnitUniform, seeds.net);
    const ProbSample sample = logic_sample(net, 1000, seeds.sample);
    const MassCurve exact = exact_mass_curve(net);
    const MassCurve empirical = empirical_mass_curve(sample);
    const MassCurve lognormal = log_normal_mass_curve(exact_log_normal_params(net));
    const double u = select_threshold(sample, 50);
    MassCurve fitted = tail_mass_curve(fit_model(sample, u));
    const MassCurve* curves[] = {&exact, &empirical, &lognormal, &fitted};
    bool mono = true, ranged = true;
    for (const MassCurve* curve : curves) {
      double prev = -1.0;
      for (double q : log_grid(1e-9, 1.0, 60)) {
        const double g = (*curve)(q);
        mono = mono && g >= prev;
        ranged = ranged && g >= 0.0 && g <= 1.0;
        prev = g;
      }
    }
    check(mono, "curve monotone");
    check(ranged, "curve in [0,1]");
    check(exact(2.0) == 1.0, "exact curve reaches 1");

    // sampled mass fractions track the exact curve (distribution-free bound)
    double sup = 0.0;
    for (double q : log_grid(1e-9, 1.0, 40))
      sup = std::max(sup, std::abs(empirical(q) - exact(q)));
    check(sup <= 4.0 / std::sqrt(1000.0), "uniform deviation bound");
  }

  // scale equivariance of the fit
  {
    const RgpdParams truth{1.0, 0.5};
    Rng rng(2000);
    std::vector<double> z;
    for (int k = 0; k < 400; ++k) {
      double v = rng.next_double();
      if (v == 0.0) v = 0.5;
      z.push_back(rgpd_quantile(v, truth));
    }
    std::vector<double> z4, p, pc;
    const double u = 0.3, c = 3.0;
    for (double w : z) {
      z4.push_back(4.0 * w);
      p.push_back(u + w);
      pc.push_back(c * (u + w));
    }
    const FitResult base = fit_tail(TailSample(z, WeightMode::Discrete, 0.0));
    const FitResult by4 = fit_tail(TailSample(z4, WeightMode::Discrete, 0.0));
    check(std::abs(by4.params.delta - 4.0 * base.params.delta) <=
              1e-12 * std::abs(4.0 * base.params.delta),
          "power-of-two equivariance (delta)");
    check(std::abs(by4.params.alpha - base.params.alpha) <=
              1e-12 * std::abs(base.params.alpha),
          "power-of-two equivariance (alpha)");
    const FitResult at_u = fit_tail(TailSample(p, WeightMode::Discrete, u));
    const FitResult at_cu = fit_tail(TailSample(pc, WeightMode::Discrete, c * u));
    check(std::abs(at_cu.params.delta - c * at_u.params.delta) <=
              1e-7 * std::abs(c * at_u.params.delta),
          "general equivariance (delta)");
    check(std::abs(at_cu.params.alpha - at_u.params.alpha) <=
              1e-7 * std::abs(at_u.params.alpha),
          "general equivariance (alpha)");
  }

  // shape continuity across alpha = 0 at matched exponential scale
  {
    double sup = 0.0;
    for (double alpha : {1e-8, -1e-8}) {
      const RgpdParams params{1.0 / alpha, alpha};
      for (double zz = -0.5; zz < 0.0; zz += 0.005)
        sup = std::max(sup, std::abs(rgpd_cdf(zz, params) - std::exp(zz)));
    }
    check(sup <= 1e-6, "alpha -> 0 continuity");
  }

  // weighted empirical estimator tracks the continuous oracle
  {
    const ContinuousExemplar model(1.0);
    const double qs[] = {0.01, 0.05, 0.1, 0.2, 0.5};
    const double tol[] = {0.02, 0.02, 0.02, 0.03, 0.06};
    int good = 0;
    for (int s = 0; s < 10; ++s) {
      const auto [draws, sample] =
          sample_continuous(model, 2000, 7000 + static_cast<std::uint64_t>(s));
      bool ok = true;
      for (int k = 0; k < 5; ++k)
        ok = ok &&
             std::abs(empirical_mass_below(sample, qs[k]) -
                      model.mass_below(qs[k])) <= tol[k];
      good += ok ? 1 : 0;
    }
    check(good >= 9, "weighted-estimator consistency");
  }

  report(9, "determinism and structural properties", pass,
         pass ? "all property checks hold" : detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criteria_3_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
