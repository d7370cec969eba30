#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tailmass/contmodel.hpp"

using namespace tailmass;

TEST_CASE("closed-form CDF and mass fractions at the reference points") {
  const ContinuousExemplar model(1.0);
  struct Row {
    double p, cdf, mass;
  };
  // frozen from the closed forms F(p) = p(1 - log p) and
  // G(p) = p^2 (1 - 2 log p) at lambda = 1
  const Row rows[] = {
      {0.05, 0.19978661367769955, 0.017478661367769955},
      {0.01, 0.056051701859880914, 0.0010210340371976183},
      {0.005, 0.031491586832740183, 0.00028991586832740183},
      {0.002, 0.014429216196844383, 5.3716864787377534e-5},
  };
  for (const Row& r : rows) {
    CHECK(model.cdf(r.p) == Catch::Approx(r.cdf).epsilon(1e-14));
    CHECK(model.mass_below(r.p) == Catch::Approx(r.mass).epsilon(1e-14));
  }
}

TEST_CASE("pdf, cdf, and mass_below behave at the support boundaries") {
  const ContinuousExemplar model(1.0);
  CHECK(model.pdf(1.0) == 0.0);
  CHECK(model.pdf(0.01) == Catch::Approx(std::log(100.0)).epsilon(1e-14));
  CHECK_THROWS_AS(model.pdf(0.0), std::invalid_argument);
  CHECK_THROWS_AS(model.pdf(1.5), std::invalid_argument);
  CHECK(model.cdf(0.0) == 0.0);
  CHECK(model.cdf(-1.0) == 0.0);
  CHECK(model.cdf(1.0) == 1.0);
  CHECK(model.cdf(2.0) == 1.0);
  CHECK(model.mass_below(0.0) == 0.0);
  CHECK(model.mass_below(1.0) == 1.0);

  double prev_cdf = 0.0, prev_mass = 0.0;
  for (double p = 0.01; p <= 1.0; p += 0.01) {
    CHECK(model.cdf(p) >= prev_cdf);
    CHECK(model.mass_below(p) >= prev_mass);
    CHECK(model.mass_below(p) <= model.cdf(p));  // low values carry less mass
    prev_cdf = model.cdf(p);
    prev_mass = model.mass_below(p);
  }

  CHECK_THROWS_AS(ContinuousExemplar(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ContinuousExemplar(-1.0), std::invalid_argument);
}

TEST_CASE("mass_below equals the integral of t pdf(t) over (0, q) / (lambda/4)") {
  for (double lambda : {1.0, 2.5}) {
    const ContinuousExemplar model(lambda);
    for (double q : {0.01, 0.05, 0.5}) {
      const double qq = q * lambda;
      const int panels = 100000;
      const double lo = 1e-9 * lambda;
      const double h = (qq - lo) / panels;
      auto integrand = [&](double t) { return t * model.pdf(t); };
      double acc = 0.5 * (integrand(lo) + integrand(qq));
      for (int k = 1; k < panels; ++k) acc += integrand(lo + k * h);
      const double integral = acc * h / (lambda / 4.0);
      CHECK(model.mass_below(qq) == Catch::Approx(integral).epsilon(1e-4));
    }
  }
}

TEST_CASE("cdf equals the integral of the pdf") {
  const ContinuousExemplar model(1.0);
  const double q = 0.3;
  const int panels = 200000;
  const double lo = 1e-10;
  const double h = (q - lo) / panels;
  double acc = 0.5 * (model.pdf(lo) + model.pdf(q));
  for (int k = 1; k < panels; ++k) acc += model.pdf(lo + k * h);
  CHECK(model.cdf(q) == Catch::Approx(acc * h).epsilon(1e-5));
}

TEST_CASE("sampler reproduces the closed-form distribution") {
  const ContinuousExemplar model(1.0);
  const int n = 50000;
  const auto [draws, sample] = sample_continuous(model, n, 21);
  REQUIRE(draws.size() == static_cast<std::size_t>(n));
  REQUIRE(sample.size() == static_cast<std::size_t>(n));
  CHECK(sample.mode() == WeightMode::Continuous);

  for (const ContinuousDraw& d : draws) {
    CHECK(d.x1 > 0.0);
    CHECK(d.x2 >= 0.0);
    CHECK(d.x3 >= 0.0);
    CHECK(d.x3 < d.x1);
    CHECK(d.p == 1.0 * std::exp(-d.x1 * (1.0 + d.x2)));
    CHECK(d.p > 0.0);
    CHECK(d.p <= 1.0);
  }

  // empirical CDF of the density values against the closed form
  const auto& v = sample.values();
  for (double q : {0.01, 0.05, 0.2, 0.5, 0.9}) {
    const auto below = std::lower_bound(v.begin(), v.end(), q) - v.begin();
    const double freq = static_cast<double>(below) / n;
    CHECK(std::abs(freq - model.cdf(q)) <= 4.0 / std::sqrt(double(n)));
  }

  // mean of P is lambda / 4
  double sum = 0.0;
  for (double p : v) sum += p;
  CHECK(sum / n == Catch::Approx(0.25).epsilon(0.02));

  const auto [draws2, sample2] = sample_continuous(model, n, 21);
  CHECK(sample.values() == sample2.values());
  const auto [draws3, sample3] = sample_continuous(model, n, 22);
  CHECK(sample.values() != sample3.values());

  CHECK_THROWS_AS(sample_continuous(model, 0, 1), std::invalid_argument);
}

TEST_CASE("lambda scales the support") {
  const ContinuousExemplar model(2.5);
  const auto [draws, sample] = sample_continuous(model, 2000, 5);
  for (double p : sample.values()) {
    CHECK(p > 0.0);
    CHECK(p <= 2.5);
  }
  CHECK(model.mass_below(2.5) == 1.0);
  CHECK(model.cdf(2.5) == 1.0);
  // scale invariance: G and F at p depend only on p / lambda
  const ContinuousExemplar unit(1.0);
  CHECK(model.mass_below(0.25) == Catch::Approx(unit.mass_below(0.1)).epsilon(1e-14));
  CHECK(model.cdf(0.25) == Catch::Approx(unit.cdf(0.1)).epsilon(1e-14));
}
