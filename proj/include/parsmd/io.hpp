#ifndef PARSMD_IO_HPP
#define PARSMD_IO_HPP

#include <parsmd/bounds.hpp>
#include <parsmd/orchestrator.hpp>

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace parsmd {

using Json = nlohmann::json;

// Missing or ill-typed fields in a JSON document.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

// Problem documents (see docs/schema.md). "constants" is optional on input;
// when absent M, R and r_bar are derived from the problem.
Json problem_to_json(const Problem& problem);
Problem problem_from_json(const Json& doc);

Json tail_class_to_json(const TailClass& tail);
TailClass tail_class_from_json(const Json& doc);

Json plan_to_json(const StrategyPlan& plan);
StrategyPlan plan_from_json(const Json& doc);

Json estimate_to_json(const DeviationEstimate& est);
Json trial_record_to_json(const TrialRecord& rec, StrategyKind strategy);

}  // namespace parsmd

#endif  // PARSMD_IO_HPP
