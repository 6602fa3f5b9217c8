#include <parsmd/manifest.hpp>

#include <fstream>

namespace parsmd {

namespace {

template <typename T>
std::optional<T> optional_field(const Json& doc, const char* key, const char* where) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception&) {
    throw SchemaError(std::string(where) + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T required_field(const Json& doc, const char* key, const char* where) {
  auto v = optional_field<T>(doc, key, where);
  if (!v) throw SchemaError(std::string(where) + ": missing field '" + key + "'");
  return *v;
}

}  // namespace

Json manifest_to_json(const ExperimentManifest& m) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["problem"] = problem_to_json(m.problem);
  doc["strategy"] = m.strategy;
  doc["epsilon"] = m.epsilon;
  doc["sigma"] = m.sigma;
  doc["trials"] = m.trials;
  Json overrides = Json::object();
  if (m.n_override) overrides["N"] = *m.n_override;
  if (m.k_override) overrides["K"] = *m.k_override;
  if (m.bound_options.c1_polynomial > 0.0) overrides["c1_alpha"] = m.bound_options.c1_polynomial;
  overrides["validity_multiplier"] = m.bound_options.validity_multiplier;
  overrides["warning_multiplier"] = m.bound_options.warning_multiplier;
  doc["overrides"] = overrides;
  if (m.master_seed) doc["master_seed"] = *m.master_seed;
  if (m.workers) doc["workers"] = *m.workers;
  doc["output"] = {{"directory", m.output.directory},
                   {"trials", m.output.trials},
                   {"summary", m.output.summary},
                   {"csv", m.output.csv}};
  return doc;
}

ExperimentManifest manifest_from_json(const Json& doc) {
  constexpr const char* where = "manifest";
  if (!doc.is_object()) throw SchemaError("manifest: expected a JSON object");
  const int version = required_field<int>(doc, "schema_version", where);
  if (version != kSchemaVersion)
    throw SchemaError("manifest: unsupported schema_version " + std::to_string(version));

  ExperimentManifest m;
  if (!doc.contains("problem")) throw SchemaError("manifest: missing field 'problem'");
  m.problem = problem_from_json(doc.at("problem"));
  m.strategy = optional_field<std::string>(doc, "strategy", where).value_or("compare");
  if (m.strategy != "compare" && m.strategy != "single" && m.strategy != "average_of_k" &&
      m.strategy != "min_of_k")
    throw SchemaError("manifest: unknown strategy '" + m.strategy + "'");
  m.epsilon = required_field<double>(doc, "epsilon", where);
  m.sigma = required_field<double>(doc, "sigma", where);
  m.trials = optional_field<std::int64_t>(doc, "trials", where).value_or(300);
  if (!(m.epsilon > 0.0)) throw SchemaError("manifest: epsilon must be positive");
  if (!(m.sigma > 0.0 && m.sigma < 1.0)) throw SchemaError("manifest: sigma must lie in (0, 1)");
  if (m.trials < 30 || m.trials > 1'000'000) throw SchemaError("manifest: trials must lie in [30, 1e6]");

  if (doc.contains("overrides")) {
    const Json& o = doc.at("overrides");
    if (!o.is_object()) throw SchemaError("manifest.overrides: expected an object");
    m.n_override = optional_field<std::int64_t>(o, "N", "manifest.overrides");
    m.k_override = optional_field<std::int64_t>(o, "K", "manifest.overrides");
    if (m.n_override && *m.n_override < 1) throw SchemaError("manifest.overrides: N must be >= 1");
    if (m.k_override && (*m.k_override < 1 || *m.k_override > 4096))
      throw SchemaError("manifest.overrides: K must lie in [1, 4096]");
    if (auto c1 = optional_field<double>(o, "c1_alpha", "manifest.overrides")) {
      if (!(*c1 > 0.0)) throw SchemaError("manifest.overrides: c1_alpha must be positive");
      m.bound_options.c1_polynomial = *c1;
    }
    m.bound_options.validity_multiplier =
        optional_field<double>(o, "validity_multiplier", "manifest.overrides").value_or(20.0);
    m.bound_options.warning_multiplier =
        optional_field<double>(o, "warning_multiplier", "manifest.overrides").value_or(10.0);
    if (!(m.bound_options.warning_multiplier > 0.0) ||
        m.bound_options.warning_multiplier > m.bound_options.validity_multiplier)
      throw SchemaError("manifest.overrides: need 0 < warning_multiplier <= validity_multiplier");
  }

  m.master_seed = optional_field<std::uint64_t>(doc, "master_seed", where);
  m.workers = optional_field<unsigned>(doc, "workers", where);
  if (m.workers && (*m.workers < 1 || *m.workers > 1024))
    throw SchemaError("manifest: workers must lie in [1, 1024]");

  if (doc.contains("output")) {
    const Json& out = doc.at("output");
    if (!out.is_object()) throw SchemaError("manifest.output: expected an object");
    m.output.directory = optional_field<std::string>(out, "directory", "manifest.output").value_or(".");
    m.output.trials = optional_field<std::string>(out, "trials", "manifest.output").value_or("trials.jsonl");
    m.output.summary = optional_field<std::string>(out, "summary", "manifest.output").value_or("summary.json");
    m.output.csv = optional_field<std::string>(out, "csv", "manifest.output").value_or("results.csv");
  }
  return m;
}

ExperimentManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open manifest '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("malformed JSON in '" + path + "': " + e.what());
  }
  return manifest_from_json(doc);
}

}  // namespace parsmd
