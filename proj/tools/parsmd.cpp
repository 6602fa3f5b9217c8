// parsmd: run experiments, tabulate bounds and self-check the SMD toolkit.
//
//   parsmd run --manifest exp.json [--workers N] [--seed S]
//   parsmd bounds --epsilon 0.1 --sigma 0.05 --M 1 --R 1 --R-bar 1 --tail bounded [--format json]
//   parsmd selftest
//
// Exit status: 0 success, 1 I/O / schema / usage error, 2 bound not applicable.

#include <parsmd/experiment.hpp>
#include <parsmd/parallel.hpp>
#include <parsmd/selftest.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <random>

namespace {

using namespace parsmd;

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

int cmd_run(const std::string& manifest_path, std::optional<unsigned> workers_flag,
            std::optional<std::uint64_t> seed_flag) {
  ExperimentManifest m;
  try {
    m = load_manifest(manifest_path);
  } catch (const std::exception& e) {
    std::cerr << "parsmd run: " << e.what() << '\n';
    return kExitError;
  }

  std::uint64_t seed = 0;
  std::string source;
  if (seed_flag) {
    seed = *seed_flag;
    source = "flag";
  } else if (m.master_seed) {
    seed = *m.master_seed;
    source = "manifest";
  } else {
    seed = entropy_seed();
    source = "entropy";
  }

  unsigned workers = 0;
  if (workers_flag) {
    workers = *workers_flag;
  } else if (std::getenv("PARSMD_WORKERS")) {
    workers = default_worker_count();
  } else if (m.workers) {
    workers = *m.workers;
  } else {
    workers = default_worker_count();
  }

  try {
    const ExperimentOutput out = run_experiment(m, seed, source, workers);
    write_outputs(m.output, out);
  } catch (const BoundNotApplicable& e) {
    std::cerr << "parsmd run: " << e.what() << '\n';
    return kExitNotApplicable;
  } catch (const std::exception& e) {
    std::cerr << "parsmd run: " << e.what() << '\n';
    return kExitError;
  }
  return kExitOk;
}

TailClass parse_tail(const std::string& name, double alpha) {
  if (name == "a" || name == "bounded") return {TailKind::BoundedAS, 0.0};
  if (name == "b" || name == "subgaussian") return {TailKind::SubGaussian, 0.0};
  if (name == "c" || name == "polynomial") {
    if (!(alpha > 2.0)) throw DomainError("polynomial tail requires --alpha > 2");
    return {TailKind::Polynomial, alpha};
  }
  throw DomainError("unknown tail class '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic mirror descent with parallel (eps, sigma) strategies"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Execute an experiment manifest");
  std::string manifest_path;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  run->add_option("--manifest", manifest_path, "Experiment manifest (JSON)")->required();
  run->add_option("--workers", workers, "Worker threads (overrides PARSMD_WORKERS)")
      ->check(CLI::Range(1u, 1024u));
  run->add_option("--seed", seed, "Master seed (overrides the manifest)");

  auto* bounds = app.add_subcommand("bounds", "Tabulate the closed-form bounds");
  BoundsQuery q;
  std::string tail_name = "bounded";
  double alpha = 0.0;
  std::string format = "csv";
  bounds->add_option("--epsilon", q.epsilon)->required()->check(CLI::PositiveNumber);
  bounds->add_option("--sigma", q.sigma)->required()->check(CLI::Range(0.0, 1.0));
  bounds->add_option("--M", q.M)->required()->check(CLI::PositiveNumber);
  bounds->add_option("--R", q.R)->required()->check(CLI::PositiveNumber);
  bounds->add_option("--R-bar", q.r_bar)->required()->check(CLI::PositiveNumber);
  bounds->add_option("--tail", tail_name, "bounded|subgaussian|polynomial (or a|b|c)");
  bounds->add_option("--alpha", alpha, "Polynomial tail exponent (> 2)");
  bounds->add_option("--c1", q.options.c1_polynomial, "C1(alpha) override for the polynomial class");
  bounds->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  auto* selftest = app.add_subcommand("selftest", "Run the fast invariant suite");
  std::string fault;
  selftest->add_option("--inject-fault", fault, "Test hook: entropy-step")
      ->check(CLI::IsMember({"entropy-step"}))
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  if (*run) return cmd_run(manifest_path, workers, seed);

  if (*bounds) {
    try {
      if (!(q.sigma > 0.0 && q.sigma < 1.0)) throw DomainError("--sigma must lie in (0, 1)");
      if (q.R > q.r_bar) throw DomainError("--R must not exceed --R-bar");
      q.tail = parse_tail(tail_name, alpha);
      const Json table = bounds_table(q);
      std::cout << (format == "json" ? table.dump(2) + "\n" : bounds_csv(table));
    } catch (const BoundNotApplicable& e) {
      std::cerr << "parsmd bounds: " << e.what() << '\n';
      return kExitNotApplicable;
    } catch (const std::exception& e) {
      std::cerr << "parsmd bounds: " << e.what() << '\n' << bounds->help();
      return kExitError;
    }
    return kExitOk;
  }

  SelftestOptions opts;
  if (fault == "entropy-step") opts.step = perturbed_entropy_step;
  const SelftestReport report = run_selftest(opts);
  std::cout << report.render();
  if (!report.passed()) {
    std::cerr << "first failing invariant: " << report.first_failure() << '\n';
    return kExitError;
  }
  return kExitOk;
}
