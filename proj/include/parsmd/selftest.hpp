#ifndef PARSMD_SELFTEST_HPP
#define PARSMD_SELFTEST_HPP

#include <parsmd/geometry.hpp>

#include <functional>
#include <string>
#include <vector>

namespace parsmd {

using StepFunction =
    std::function<VectorXd(const ProxSetup<double>&, const VectorXd&, const VectorXd&)>;

struct SelftestOptions {
  // Mirror step under test; defaults to mirror_step. Tests substitute a
  // perturbed step to confirm the suite detects it.
  StepFunction step;
};

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  bool passed() const;
  // Name of the first failing check, or empty.
  std::string first_failure() const;
  // Deterministic text rendering (no timings).
  std::string render() const;
};

// Fast invariant suite: step inequality, brute-force mirror steps,
// feasibility, strong convexity, gaussian_tail vs quadrature and schedule
// independence of the orchestrator.
SelftestReport run_selftest(const SelftestOptions& opts = {});

// Perturbed entropy step used as a mutation: mixes 10% of the uniform
// distribution into the exact step.
VectorXd perturbed_entropy_step(const ProxSetup<double>& setup, const VectorXd& x, const VectorXd& v);

}  // namespace parsmd

#endif  // PARSMD_SELFTEST_HPP
