#include <parsmd/bounds.hpp>
#include <parsmd/smd.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace parsmd;

namespace {

const TailClass kBounded{TailKind::BoundedAS, 0};
const TailClass kSubGaussian{TailKind::SubGaussian, 0};
const TailClass kPoly3{TailKind::Polynomial, 3.0};

// Independent oracle: adaptive Gauss-Kronrod on the normal density.
double tail_quadrature(double mean, double sd, double c) {
  auto pdf = [&](double t) {
    const double z = (t - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2 * std::numbers::pi));
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      pdf, c, std::numeric_limits<double>::infinity(), 15, 1e-14);
}

}  // namespace

TEST_CASE("case constants") {
  auto c = case_constants(kBounded);
  CHECK(c.c1 == doctest::Approx(1.41421356237));
  CHECK(c.c2 == doctest::Approx(2.82842712475));
  c = case_constants(kSubGaussian);
  CHECK(c.c1 == doctest::Approx(2.82842712475));
  CHECK(c.c2 == doctest::Approx(2.82842712475));
  c = case_constants(kPoly3);
  CHECK(c.c1 == doctest::Approx(default_c1_polynomial(3.0)));
  CHECK(c.c1 == doctest::Approx(3 * std::numbers::sqrt2));
  CHECK(c.c2 == 1.0);
  BoundOptions opts;
  opts.c1_polynomial = 5.0;
  CHECK(case_constants(kPoly3, opts).c1 == 5.0);
  CHECK_THROWS_AS(case_constants(TailClass{TailKind::Polynomial, 2.0}), DomainError);
}

TEST_CASE("deviation_bound examples") {
  const double b = deviation_bound(1, 1, 1, 100, std::exp(-1.0), kBounded);
  CHECK(b == doctest::Approx(std::numbers::sqrt2 / 10 * (1 + 2 * std::numbers::sqrt2)));
  CHECK(b == doctest::Approx(0.5414).epsilon(1e-3));
  const double near_one = deviation_bound(2, 0.7, 1, 400, 1 - 1e-12, kBounded);
  CHECK(near_one == doctest::Approx(std::numbers::sqrt2 * 2 * 0.7 / 20).epsilon(1e-5));
  CHECK_THROWS_AS(deviation_bound(1, 1, 1, 100, 0.0, kBounded), DomainError);
  CHECK_THROWS_AS(deviation_bound(1, 1, 1, 100, 1.0, kBounded), DomainError);
  CHECK_THROWS_AS(deviation_bound(0, 1, 1, 100, 0.5, kBounded), DomainError);
}

TEST_CASE("validity conditions") {
  const double sigma = 0.01;
  const double scale = std::log(1 / sigma);  // 4.605
  CHECK(check_validity(1, sigma, kBounded).status == ValidityStatus::Ok);
  CHECK(check_validity(93, sigma, kSubGaussian).status == ValidityStatus::Ok);
  CHECK(check_validity(60, sigma, kSubGaussian).status == ValidityStatus::Warning);
  const auto bad = check_validity(40, sigma, kSubGaussian);
  CHECK(bad.status == ValidityStatus::Violated);
  CHECK(bad.scale == doctest::Approx(scale));
  CHECK(bad.message.find("ln σ⁻¹ ≪ N") != std::string::npos);
  try {
    deviation_bound(1, 1, 1, 40, sigma, kSubGaussian);
    FAIL("expected BoundNotApplicable");
  } catch (const BoundNotApplicable& e) {
    CHECK(e.report().condition == "ln σ⁻¹ ≪ N");
  }
  // polynomial: sigma^(-1/(alpha-1)) = 10 at sigma = 0.01, alpha = 3
  CHECK(check_validity(200, sigma, kPoly3).status == ValidityStatus::Ok);
  CHECK(check_validity(150, sigma, kPoly3).status == ValidityStatus::Warning);
  CHECK(check_validity(99, sigma, kPoly3).status == ValidityStatus::Violated);
  BoundOptions loose;
  loose.validity_multiplier = 2;
  loose.warning_multiplier = 1;
  CHECK(check_validity(20, sigma, kPoly3, loose).status == ValidityStatus::Ok);
}

TEST_CASE("deviation_N") {
  CHECK(deviation_constant(kBounded) == doctest::Approx(8.0));
  CHECK(deviation_constant(kSubGaussian) == doctest::Approx(32.0));
  CHECK(deviation_N(1, 1, 0.2, 0.1, kBounded) == 200);
  const double c1 = default_c1_polynomial(3.0);
  CHECK(deviation_constant(kPoly3) == doctest::Approx(c1 * c1));
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    const auto n1 = deviation_N(1.3, 2.1, eps, 0.1, kSubGaussian);
    const auto n2 = deviation_N(1.3, 2.1, eps / 2, 0.1, kSubGaussian);
    CHECK(std::abs(n2 - 4 * n1) <= 4);
  }
}

TEST_CASE("gaussian_tail examples and quadrature agreement") {
  CHECK(gaussian_tail(1, 1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  const double c = std::sqrt(2 * std::log(20.0));
  const double oracle = tail_quadrature(0, 1, c);
  CHECK(oracle == doctest::Approx(0.00716).epsilon(1e-2));
  CHECK(gaussian_tail(0, 1, c) == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(gaussian_tail(0, 1, c) <= 0.05);
  for (double sigma : {0.2, 0.1, 0.05, 0.01}) {
    const double eps = 0.3;
    const double cut = eps / 2 + eps / 2 * std::sqrt(2 * std::log(1 / sigma));
    CHECK(tail_quadrature(eps / 2, eps / 2, cut) <= sigma);
    CHECK(gaussian_tail(eps / 2, eps / 2, cut) <= sigma);
  }
  CHECK_THROWS_AS(gaussian_tail(0, 0, 1), DomainError);

  RandomStream rng(StreamKey{17, 0, 0}, 0);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double mean = rng.uniform(-2, 2), sd = rng.uniform(0.05, 3), cut = mean + sd * rng.uniform(-4, 6);
    worst = std::max(worst, std::abs(gaussian_tail(mean, sd, cut) - tail_quadrature(mean, sd, cut)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("average_of_k_parameters") {
  CHECK(average_of_k_parameters(0.2, 0.05, 1, 1, kBounded).K == 6);
  const auto plan = average_of_k_parameters(0.2, 0.05, 1, 1, kBounded);
  CHECK(plan.N == 800);
  CHECK(plan.strategy == StrategyKind::AverageOfK);
  CHECK(plan.h == doctest::Approx(stepsize(1, 1, 800)));
  CHECK(average_of_k_parameters(0.2, std::exp(-1.0), 1, 1, kBounded).K == 2);
  CHECK_THROWS_AS(average_of_k_parameters(0.2, 1.5, 1, 1, kBounded), DomainError);
  CHECK_THROWS_AS(average_of_k_parameters(-0.2, 0.1, 1, 1, kBounded), DomainError);
}

TEST_CASE("min_of_k_parameters") {
  const auto plan = min_of_k_parameters(0.1, 0.05, 1, 1);
  CHECK(plan.N == 800);
  CHECK(plan.K == 5);
  CHECK(plan.oracle_calls_total() == 800 * 5);
  CHECK(min_of_k_parameters(0.1, 0.5, 1, 1).K == 1);
  CHECK_THROWS_AS(min_of_k_parameters(0.1, 0.5, 1, 0), DomainError);
}

TEST_CASE("single plan is Theta(ln 1/sigma) longer than one average-of-K worker") {
  for (double sigma : {0.1, 0.01, 1e-4}) {
    const auto single = single_parameters(0.1, sigma, 1, 1, kBounded);
    const auto avg = average_of_k_parameters(0.1, sigma, 1, 1, kBounded);
    CHECK(single.K == 1);
    const double ratio = double(single.N) / double(avg.N);
    CHECK(ratio == doctest::Approx(std::pow(1 + std::sqrt(2 * std::log(1 / sigma)), 2) / 4).epsilon(1e-3));
  }
}

TEST_CASE("monotonicity") {
  double prev = 1e300;
  for (std::int64_t N : {100, 200, 400, 800}) {
    const double b = deviation_bound(1, 1, 1.5, N, 0.1, kBounded);
    CHECK(b < prev);
    prev = b;
  }
  prev = 0;
  for (double sigma : {0.5, 0.2, 0.1, 0.01}) {
    const double b = deviation_bound(1, 1, 1.5, 1000, sigma, kSubGaussian);
    CHECK(b > prev);
    prev = b;
  }
  const auto a = average_of_k_parameters(0.2, 0.1, 1, 1, kBounded);
  const auto b = average_of_k_parameters(0.1, 0.1, 1, 1, kBounded);
  CHECK(b.N == 4 * a.N);
}

TEST_CASE("Gaussian domination chain") {
  const double M = 3, R = 1.2, r_bar = 2.0, eps = 0.1;
  for (const TailClass& tail : {kBounded, kSubGaussian, kPoly3}) {
    for (double sigma_star : {0.2, 0.05, 0.01}) {
      const auto N = deviation_N(M, r_bar, eps, sigma_star, tail);
      for (double sigma : {sigma_star, 0.3, 0.5, 0.9}) {
        if (sigma < sigma_star) continue;
        CAPTURE(sigma);
        CHECK(deviation_bound(M, R, r_bar, N, sigma, tail) <= eps * (1 + std::sqrt(2 * std::log(1 / sigma))));
      }
    }
  }
}

TEST_CASE("averaging K Gaussians: tail of the mean") {
  // N(e/2, e^2/4) averaged over K = ceil(2 ln 1/sigma) copies is N(e/2, e^2/(4K));
  // checked by Monte Carlo against gaussian_tail, then against sigma.
  const double eps = 0.2;
  for (double sigma : {0.2, 0.1, 0.05}) {
    const int K = static_cast<int>(std::ceil(2 * std::log(1 / sigma)));
    const double exact = gaussian_tail(eps / 2, eps / (2 * std::sqrt(double(K))), eps);
    CHECK(exact <= sigma);
    RandomStream rng(StreamKey{21, 0, 0}, static_cast<std::uint32_t>(K));
    const int trials = 200000;
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
      double s = 0;
      for (int k = 0; k < K; ++k) s += eps / 2 + eps / 2 * rng.normal();
      hits += s / K >= eps;
    }
    const double p = double(hits) / trials;
    CHECK(std::abs(p - exact) <= 4 * std::sqrt(exact * (1 - exact) / trials));
  }
}

TEST_CASE("expectation-only plan") {
  const auto plan = expectation_parameters(0.1, 2, 0.5);
  CHECK(plan.N == 200);
  CHECK(plan.K == 1);
  CHECK(plan.h == doctest::Approx(stepsize(2, 0.5, 200)));
}

TEST_CASE("with_iterations re-checks validity") {
  auto plan = average_of_k_parameters(0.2, 0.1, 1, 1, kSubGaussian);
  CHECK_THROWS_AS(with_iterations(plan, 10, 1, 1), BoundNotApplicable);
  const auto ok = with_iterations(plan, 5000, 1, 1);
  CHECK(ok.N == 5000);
  CHECK(ok.h == doctest::Approx(stepsize(1, 1, 5000)));
}
