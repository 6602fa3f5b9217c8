#ifndef PARSMD_MANIFEST_HPP
#define PARSMD_MANIFEST_HPP

#include <parsmd/io.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace parsmd {

struct OutputPaths {
  std::string directory = ".";
  std::string trials = "trials.jsonl";
  std::string summary = "summary.json";
  std::string csv = "results.csv";

  friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

// One experiment: a problem, which strategies to run, the (eps, sigma)
// target and Monte Carlo budget, and where to write results.
struct ExperimentManifest {
  Problem problem;
  std::string strategy = "compare";  // compare | single | average_of_k | min_of_k
  double epsilon = 0.1;
  double sigma = 0.05;
  std::int64_t trials = 300;
  std::optional<std::int64_t> n_override;
  std::optional<std::int64_t> k_override;
  BoundOptions bound_options;
  std::optional<std::uint64_t> master_seed;
  std::optional<unsigned> workers;
  OutputPaths output;
};

Json manifest_to_json(const ExperimentManifest& m);

// Validates ranges; throws SchemaError (or DomainError for an invalid problem).
ExperimentManifest manifest_from_json(const Json& doc);

ExperimentManifest load_manifest(const std::string& path);

}  // namespace parsmd

#endif  // PARSMD_MANIFEST_HPP
