#include <parsmd/io.hpp>

#include <cmath>

namespace parsmd {

namespace {

template <typename T>
T field(const Json& doc, const char* key, const char* where) {
  if (!doc.is_object() || !doc.contains(key))
    throw SchemaError(std::string(where) + ": missing field '" + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw SchemaError(std::string(where) + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T field_or(const Json& doc, const char* key, T fallback, const char* where) {
  if (!doc.is_object() || !doc.contains(key)) return fallback;
  return field<T>(doc, key, where);
}

Json vector_to_json(const VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

VectorXd vector_from_json(const Json& doc, const char* key, const char* where) {
  const auto values = field<std::vector<double>>(doc, key, where);
  return Eigen::Map<const VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

const char* noise_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::None:
      return "none";
    case NoiseKind::Uniform:
      return "uniform";
    case NoiseKind::Gaussian:
      return "gaussian";
    case NoiseKind::Pareto:
      return "pareto";
  }
  return "none";
}

NoiseKind noise_from_name(const std::string& name) {
  if (name == "none") return NoiseKind::None;
  if (name == "uniform") return NoiseKind::Uniform;
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "pareto") return NoiseKind::Pareto;
  throw SchemaError("problem.noise: unknown kind '" + name + "'");
}

const char* validity_name(ValidityStatus s) {
  switch (s) {
    case ValidityStatus::Ok:
      return "ok";
    case ValidityStatus::Warning:
      return "warning";
    case ValidityStatus::Violated:
      return "violated";
  }
  return "ok";
}

ValidityStatus validity_from_name(const std::string& name) {
  if (name == "ok") return ValidityStatus::Ok;
  if (name == "warning") return ValidityStatus::Warning;
  if (name == "violated") return ValidityStatus::Violated;
  throw SchemaError("plan.validity: unknown status '" + name + "'");
}

}  // namespace

Json problem_to_json(const Problem& p) {
  Json doc;
  doc["objective"] = p.objective == ObjectiveKind::LinearSimplex ? "linear_simplex" : "quadratic_ball";
  if (p.setup.kind == GeometryKind::EuclideanBall) {
    doc["geometry"] = {{"kind", "euclidean_ball"},
                       {"radius", p.setup.radius},
                       {"center", vector_to_json(p.setup.center)}};
  } else {
    doc["geometry"] = {{"kind", "entropy_simplex"},
                       {"dimension", p.setup.dimension},
                       {"gamma", p.setup.gamma}};
  }
  doc["mean"] = vector_to_json(p.mean);
  doc["noise"] = {{"kind", noise_name(p.noise.kind)}, {"scale", p.noise.scale}};
  if (p.noise.kind == NoiseKind::Pareto) doc["noise"]["alpha"] = p.noise.alpha;
  doc["constants"] = {{"M", p.constants.M}, {"R", p.constants.R}};
  if (std::isfinite(p.constants.r_bar)) doc["constants"]["R_bar"] = p.constants.r_bar;
  doc["tail_class"] = tail_class_to_json(p.tail_class());
  return doc;
}

Problem problem_from_json(const Json& doc) {
  constexpr const char* where = "problem";
  if (!doc.is_object()) throw SchemaError("problem: expected an object");
  const auto objective_name = field<std::string>(doc, "objective", where);
  ObjectiveKind objective;
  if (objective_name == "linear_simplex") {
    objective = ObjectiveKind::LinearSimplex;
  } else if (objective_name == "quadratic_ball") {
    objective = ObjectiveKind::QuadraticBall;
  } else {
    throw SchemaError("problem: unknown objective '" + objective_name + "'");
  }

  const Json& geo = doc.contains("geometry") ? doc.at("geometry") : throw SchemaError("problem: missing field 'geometry'");
  const auto geo_kind = field<std::string>(geo, "kind", "problem.geometry");
  const VectorXd mean = vector_from_json(doc, "mean", where);
  ProxSetup<double> setup;
  if (geo_kind == "euclidean_ball") {
    setup = euclidean_ball<double>(vector_from_json(geo, "center", "problem.geometry"),
                                   field<double>(geo, "radius", "problem.geometry"));
  } else if (geo_kind == "entropy_simplex") {
    const auto n = field_or<Eigen::Index>(geo, "dimension", mean.size(), "problem.geometry");
    setup = entropy_simplex<double>(n, field_or<double>(geo, "gamma", kDefaultSimplexFloor, "problem.geometry"));
  } else {
    throw SchemaError("problem.geometry: unknown kind '" + geo_kind + "'");
  }

  NoiseModel noise;
  if (doc.contains("noise")) {
    const Json& nz = doc.at("noise");
    noise.kind = noise_from_name(field<std::string>(nz, "kind", "problem.noise"));
    noise.scale = field_or<double>(nz, "scale", 0.0, "problem.noise");
    noise.alpha = field_or<double>(nz, "alpha", 3.0, "problem.noise");
  }

  Problem p = make_problem(std::move(setup), objective, mean, noise);
  if (doc.contains("constants")) {
    const Json& k = doc.at("constants");
    ProblemConstants c = p.constants;
    c.M = field_or<double>(k, "M", c.M, "problem.constants");
    c.R = field_or<double>(k, "R", c.R, "problem.constants");
    c.r_bar = field_or<double>(k, "R_bar", c.r_bar, "problem.constants");
    if (!(c.M > 0.0) || !(c.R >= 0.0) || !(c.r_bar > 0.0) || c.R > c.r_bar)
      throw SchemaError("problem.constants: need M > 0, R_bar > 0 and 0 <= R <= R_bar");
    p.constants = c;
  }
  return p;
}

Json tail_class_to_json(const TailClass& tail) {
  switch (tail.kind) {
    case TailKind::BoundedAS:
      return {{"kind", "bounded_as"}};
    case TailKind::SubGaussian:
      return {{"kind", "sub_gaussian"}};
    case TailKind::Polynomial:
      return {{"kind", "polynomial"}, {"alpha", tail.alpha}};
  }
  return {};
}

TailClass tail_class_from_json(const Json& doc) {
  const auto kind = field<std::string>(doc, "kind", "tail_class");
  if (kind == "bounded_as") return {TailKind::BoundedAS, 0.0};
  if (kind == "sub_gaussian") return {TailKind::SubGaussian, 0.0};
  if (kind == "polynomial") {
    const double alpha = field<double>(doc, "alpha", "tail_class");
    if (!(alpha > 2.0)) throw SchemaError("tail_class: polynomial alpha must exceed 2");
    return {TailKind::Polynomial, alpha};
  }
  throw SchemaError("tail_class: unknown kind '" + kind + "'");
}

Json plan_to_json(const StrategyPlan& plan) {
  return {{"strategy", to_string(plan.strategy)},
          {"epsilon", plan.epsilon},
          {"sigma", plan.sigma},
          {"N", plan.N},
          {"K", plan.K},
          {"h", plan.h},
          {"tail_class", tail_class_to_json(plan.tail_class)},
          {"C1", plan.C1},
          {"C2", plan.C2},
          {"C", plan.C},
          {"oracle_calls_total", plan.oracle_calls_total()},
          {"oracle_calls_per_worker", plan.oracle_calls_per_worker()},
          {"validity",
           {{"status", validity_name(plan.validity.status)},
            {"condition", plan.validity.condition},
            {"scale", plan.validity.scale},
            {"message", plan.validity.message}}}};
}

StrategyPlan plan_from_json(const Json& doc) {
  constexpr const char* where = "plan";
  StrategyPlan plan;
  try {
    plan.strategy = strategy_from_string(field<std::string>(doc, "strategy", where));
  } catch (const DomainError& e) {
    throw SchemaError(std::string("plan: ") + e.what());
  }
  plan.epsilon = field<double>(doc, "epsilon", where);
  plan.sigma = field<double>(doc, "sigma", where);
  plan.N = field<std::int64_t>(doc, "N", where);
  plan.K = field<std::int64_t>(doc, "K", where);
  plan.h = field<double>(doc, "h", where);
  if (plan.N < 1 || plan.K < 1 || !(plan.h > 0.0)) throw SchemaError("plan: need N >= 1, K >= 1, h > 0");
  plan.tail_class = tail_class_from_json(doc.contains("tail_class") ? doc.at("tail_class") : Json::object());
  plan.C1 = field<double>(doc, "C1", where);
  plan.C2 = field<double>(doc, "C2", where);
  plan.C = field<double>(doc, "C", where);
  if (doc.contains("validity")) {
    const Json& v = doc.at("validity");
    plan.validity.status = validity_from_name(field<std::string>(v, "status", "plan.validity"));
    plan.validity.condition = field_or<std::string>(v, "condition", "", "plan.validity");
    plan.validity.scale = field_or<double>(v, "scale", 0.0, "plan.validity");
    plan.validity.message = field_or<std::string>(v, "message", "", "plan.validity");
    plan.validity.N = plan.N;
  }
  return plan;
}

Json estimate_to_json(const DeviationEstimate& est) {
  return {{"strategy", to_string(est.strategy)},
          {"epsilon", est.epsilon},
          {"target_sigma", est.target_sigma},
          {"trials", est.trials},
          {"exceedances", est.exceedances},
          {"empirical_probability", est.empirical_probability},
          {"ci_low", est.ci_low},
          {"ci_high", est.ci_high},
          {"mean_gap", est.mean_gap},
          {"gap_std", est.gap_std}};
}

Json trial_record_to_json(const TrialRecord& rec, StrategyKind strategy) {
  Json doc = {{"strategy", to_string(strategy)},
              {"trial", rec.trial},
              {"gap", rec.gap},
              {"exceeded", rec.exceeded},
              {"replicate_gaps", rec.replicate_gaps}};
  if (rec.selected_replicate) doc["selected_replicate"] = *rec.selected_replicate;
  return doc;
}

}  // namespace parsmd
