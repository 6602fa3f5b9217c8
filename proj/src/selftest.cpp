#include <parsmd/bounds.hpp>
#include <parsmd/orchestrator.hpp>
#include <parsmd/selftest.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace parsmd {

namespace {

VectorXd random_simplex_point(RandomStream& rng, Eigen::Index n, double floor) {
  VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = -std::log(rng.uniform());
  w /= w.sum();
  // shrink towards the floor so the point stays inside the clipped simplex
  return (1.0 - static_cast<double>(n) * floor) * w + VectorXd::Constant(n, floor);
}

VectorXd random_ball_point(RandomStream& rng, const ProxSetup<double>& s) {
  VectorXd d(s.dimension);
  for (Eigen::Index i = 0; i < s.dimension; ++i) d(i) = rng.normal();
  const double r = s.radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(s.dimension));
  return s.center + r * d / d.norm();
}

VectorXd random_point(RandomStream& rng, const ProxSetup<double>& s) {
  return s.kind == GeometryKind::EuclideanBall ? random_ball_point(rng, s)
                                               : random_simplex_point(rng, s.dimension, s.floor());
}

VectorXd random_vector(RandomStream& rng, Eigen::Index n, double scale) {
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * rng.normal();
  return v;
}

std::vector<ProxSetup<double>> test_setups() {
  return {euclidean_ball<double>(VectorXd::Zero(3), 1.0), euclidean_ball<double>(VectorXd::Constant(2, 0.5), 2.0),
          entropy_simplex<double>(3, 1e-3), entropy_simplex<double>(4, 0.1)};
}

double step_objective(const ProxSetup<double>& s, const VectorXd& x, const VectorXd& v, const VectorXd& y) {
  return v.dot(y - x) + bregman(s, x, y);
}

SelftestCheck check_step_inequality(const StepFunction& step) {
  SelftestCheck c{"step-inequality", true, ""};
  double worst = 0.0;
  std::uint32_t case_id = 0;
  for (const auto& s : test_setups()) {
    for (int trial = 0; trial < 50; ++trial, ++case_id) {
      RandomStream rng(StreamKey{0x5e1f7e57, 1, case_id}, 0);
      const VectorXd x = random_point(rng, s);
      const double scale = trial % 5 == 0 ? 0.0 : std::pow(10.0, -2.0 + 0.1 * trial);
      const VectorXd v = random_vector(rng, s.dimension, scale);
      const VectorXd xp = step(s, x, v);
      for (int k = 0; k < 6; ++k) {
        const VectorXd u = k == 0 ? x : random_point(rng, s);
        const double dn = dual_norm(s, v);
        const double slack = 2.0 * bregman(s, x, u) + 2.0 * v.dot(u - x) + dn * dn - 2.0 * bregman(s, xp, u);
        worst = std::min(worst, slack);
      }
    }
  }
  if (worst < -1e-9) {
    c.passed = false;
    std::ostringstream d;
    d << "violated by " << -worst;
    c.detail = d.str();
  }
  return c;
}

SelftestCheck check_brute_force(const StepFunction& step) {
  SelftestCheck c{"mirror-step-brute-force", true, ""};
  // 2-D ball and 2-D simplex on a fine grid; the closed form must not be beaten.
  double worst = 0.0;
  const std::vector<ProxSetup<double>> setups = {euclidean_ball<double>(VectorXd::Zero(2), 1.0),
                                                 entropy_simplex<double>(2, 1e-3)};
  std::uint32_t case_id = 0;
  for (const auto& s : setups) {
    for (int trial = 0; trial < 10; ++trial, ++case_id) {
      RandomStream rng(StreamKey{0x5e1f7e57, 2, case_id}, 0);
      const VectorXd x = random_point(rng, s);
      const VectorXd v = random_vector(rng, 2, 0.7);
      const VectorXd y = step(s, x, v);
      const double fy = step_objective(s, x, v, y);
      double best = fy;
      if (s.kind == GeometryKind::EuclideanBall) {
        const int n = 400;
        for (int i = 0; i <= n; ++i)
          for (int j = 0; j <= n; ++j) {
            VectorXd z(2);
            z << -1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n;
            if (z.norm() <= 1.0) best = std::min(best, step_objective(s, x, v, z));
          }
      } else {
        const double lo = s.floor();
        const int n = 20000;
        for (int i = 0; i <= n; ++i) {
          VectorXd z(2);
          z(0) = lo + (1.0 - 2.0 * lo) * i / n;
          z(1) = 1.0 - z(0);
          best = std::min(best, step_objective(s, x, v, z));
        }
      }
      worst = std::max(worst, fy - best);
    }
  }
  if (worst > 1e-9) {
    c.passed = false;
    c.detail = "grid point beats closed form by " + std::to_string(worst);
  }
  return c;
}

SelftestCheck check_feasibility(const StepFunction& step) {
  SelftestCheck c{"feasibility-closure", true, ""};
  std::uint32_t case_id = 0;
  for (const auto& s : test_setups()) {
    for (int trial = 0; trial < 50; ++trial, ++case_id) {
      RandomStream rng(StreamKey{0x5e1f7e57, 3, case_id}, 0);
      const VectorXd y = step(s, random_point(rng, s), random_vector(rng, s.dimension, 5.0));
      if (!is_feasible(s, y, 1e-12)) {
        c.passed = false;
        c.detail = "infeasible step output";
        return c;
      }
    }
  }
  return c;
}

SelftestCheck check_strong_convexity() {
  SelftestCheck c{"strong-convexity", true, ""};
  std::uint32_t case_id = 0;
  for (const auto& s : test_setups()) {
    for (int trial = 0; trial < 200; ++trial, ++case_id) {
      RandomStream rng(StreamKey{0x5e1f7e57, 4, case_id}, 0);
      const VectorXd x = random_point(rng, s);
      const VectorXd y = random_point(rng, s);
      const double pn = primal_norm(s, VectorXd(y - x));
      const double lhs = prox_function(s, y);
      const double rhs = prox_function(s, x) + prox_gradient(s, x).dot(y - x) + 0.5 * pn * pn;
      if (lhs < rhs - 1e-12) {
        c.passed = false;
        c.detail = "d fails 1-strong convexity";
        return c;
      }
    }
  }
  return c;
}

// Composite Simpson on the normal density over [c, mean + 40 sd].
double normal_tail_quadrature(double mean, double sd, double c) {
  const double lo = c;
  const double hi = std::max(c, mean + 40.0 * sd);
  if (hi <= lo) return 0.0;
  const int n = 20000;
  const double step = (hi - lo) / n;
  auto pdf = [&](double t) {
    const double z = (t - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
  };
  double acc = pdf(lo) + pdf(hi);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * pdf(lo + i * step);
  return acc * step / 3.0;
}

SelftestCheck check_gaussian_tail() {
  SelftestCheck c{"gaussian-tail-quadrature", true, ""};
  RandomStream rng(StreamKey{0x5e1f7e57, 5, 0}, 0);
  for (int i = 0; i < 20; ++i) {
    const double mean = rng.uniform(-1.0, 1.0);
    const double sd = rng.uniform(0.1, 2.0);
    const double cut = mean + sd * rng.uniform(-3.0, 5.0);
    const double diff = std::abs(gaussian_tail(mean, sd, cut) - normal_tail_quadrature(mean, sd, cut));
    if (diff > 1e-9) {
      c.passed = false;
      c.detail = "disagreement " + std::to_string(diff);
      return c;
    }
  }
  return c;
}

SelftestCheck check_determinism() {
  SelftestCheck c{"schedule-independence", true, ""};
  const Problem p = make_problem(euclidean_ball<double>(VectorXd::Zero(3), 1.0), ObjectiveKind::QuadraticBall,
                                 VectorXd(VectorXd::Constant(3, 0.3)), NoiseModel{NoiseKind::Uniform, 0.5, 0.0});
  StrategyPlan plan = average_of_k_parameters(0.5, 0.1, p.constants.M, p.constants.r_bar, p.tail_class());
  plan = with_iterations(plan, 200, p.constants.M, p.constants.r_bar);
  const DeviationEstimate a = estimate_deviation(p, plan, 0.05, 30, 99, {1});
  const DeviationEstimate b = estimate_deviation(p, plan, 0.05, 30, 99, {3});
  for (std::size_t t = 0; t < a.records.size(); ++t) {
    if (a.records[t].gap != b.records[t].gap) {
      c.passed = false;
      c.detail = "trial " + std::to_string(t) + " differs between worker counts";
      return c;
    }
  }
  return c;
}

}  // namespace

VectorXd perturbed_entropy_step(const ProxSetup<double>& setup, const VectorXd& x, const VectorXd& v) {
  VectorXd y = mirror_step(setup, x, v);
  if (setup.kind != GeometryKind::EntropySimplex) return y;
  return 0.9 * y + VectorXd::Constant(setup.dimension, 0.1 / static_cast<double>(setup.dimension));
}

bool SelftestReport::passed() const { return first_failure().empty(); }

std::string SelftestReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return c.name;
  return {};
}

std::string SelftestReport::render() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
  }
  out << (passed() ? "selftest passed" : "selftest failed: " + first_failure()) << '\n';
  return out.str();
}

SelftestReport run_selftest(const SelftestOptions& opts) {
  const StepFunction step = opts.step ? opts.step : StepFunction([](const ProxSetup<double>& s, const VectorXd& x,
                                                                    const VectorXd& v) { return mirror_step(s, x, v); });
  SelftestReport report;
  report.checks.push_back(check_step_inequality(step));
  report.checks.push_back(check_brute_force(step));
  report.checks.push_back(check_feasibility(step));
  report.checks.push_back(check_strong_convexity());
  report.checks.push_back(check_gaussian_tail());
  report.checks.push_back(check_determinism());
  return report;
}

}  // namespace parsmd
