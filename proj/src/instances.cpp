#include <random>
#include <stdexcept>

#include <json.hpp>

#include "dagp/problems.hpp"

namespace dagp {

namespace {

using nlohmann::json;

Vector normal_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

json to_array(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector from_array(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json function_to_json(const SmoothConvexFunction& f) {
  if (const auto* lc = dynamic_cast<const LogCoshFunction*>(&f)) {
    return {{"type", "logcosh"}, {"a", to_array(lc->a())}, {"b", lc->b()}};
  }
  if (const auto* q = dynamic_cast<const QuadraticFunction*>(&f)) {
    return {{"type", "quadratic"}, {"center", to_array(q->center())}, {"scale", q->scale()}};
  }
  if (const auto* lg = dynamic_cast<const LogisticLoss*>(&f)) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < lg->features().rows(); ++i) {
      rows.push_back(to_array(lg->features().row(i).transpose()));
    }
    return {{"type", "logistic"},
            {"features", rows},
            {"labels", to_array(lg->labels())},
            {"lambda", lg->lambda()}};
  }
  throw std::invalid_argument("instance_to_json: unsupported function type");
}

json set_to_json(const ConvexSet& s) {
  if (const auto* h = dynamic_cast<const Halfspace*>(&s)) {
    return {{"type", "halfspace"}, {"c", to_array(h->c())}, {"d", h->d()}};
  }
  if (const auto* b = dynamic_cast<const Box*>(&s)) {
    return {{"type", "box"}, {"lower", to_array(b->lower())}, {"upper", to_array(b->upper())}};
  }
  if (const auto* b = dynamic_cast<const Ball*>(&s)) {
    return {{"type", "ball"}, {"center", to_array(b->center())}, {"radius", b->radius()}};
  }
  if (dynamic_cast<const WholeSpace*>(&s) != nullptr) {
    return {{"type", "whole"}};
  }
  throw std::invalid_argument("instance_to_json: unsupported set type");
}

FunctionPtr function_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "logcosh") {
    return std::make_shared<LogCoshFunction>(from_array(j.at("a")), j.at("b").get<double>());
  }
  if (type == "quadratic") {
    return std::make_shared<QuadraticFunction>(from_array(j.at("center")),
                                               j.at("scale").get<double>());
  }
  if (type == "logistic") {
    const auto& rows = j.at("features");
    const Vector labels = from_array(j.at("labels"));
    const Eigen::Index cols = rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size());
    Matrix features(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      features.row(static_cast<Eigen::Index>(i)) = from_array(rows[i]).transpose();
    }
    return std::make_shared<LogisticLoss>(std::move(features), labels,
                                          j.at("lambda").get<double>());
  }
  throw std::invalid_argument("instance_from_json: unknown function type '" + type + "'");
}

SetPtr set_from_json(const json& j, int dimension) {
  const auto type = j.at("type").get<std::string>();
  if (type == "halfspace") {
    return std::make_shared<Halfspace>(from_array(j.at("c")), j.at("d").get<double>());
  }
  if (type == "box") return std::make_shared<Box>(from_array(j.at("lower")), from_array(j.at("upper")));
  if (type == "ball") {
    return std::make_shared<Ball>(from_array(j.at("center")), j.at("radius").get<double>());
  }
  if (type == "whole") return std::make_shared<WholeSpace>(dimension);
  throw std::invalid_argument("instance_from_json: unknown set type '" + type + "'");
}

}  // namespace

ProblemInstance generate_synthetic_instance(int dimension, int node_count, std::uint64_t seed) {
  if (dimension < 1 || node_count < 1) {
    throw std::invalid_argument("generate_synthetic_instance: sizes must be positive");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  ProblemInstance inst;
  inst.kind = "synthetic_constrained";
  inst.dimension = dimension;
  inst.seed = seed;
  const Vector witness = normal_vector(rng, dimension);
  for (int v = 0; v < node_count; ++v) {
    Vector a = normal_vector(rng, dimension);
    const double b = normal(rng);
    Vector c = normal_vector(rng, dimension);
    const double slack = std::abs(normal(rng));
    const double d = c.dot(witness) + slack;
    inst.functions.push_back(std::make_shared<LogCoshFunction>(std::move(a), b));
    inst.sets.push_back(std::make_shared<Halfspace>(std::move(c), d));
  }
  inst.witness = witness;
  return inst;
}

ProblemInstance generate_logistic_instance(int node_count, int dimension, int samples_per_node,
                                           std::uint64_t seed) {
  if (node_count < 1 || dimension < 1 || samples_per_node < 1) {
    throw std::invalid_argument("generate_logistic_instance: sizes must be positive");
  }
  std::mt19937_64 rng(seed);
  Vector direction = normal_vector(rng, dimension);
  direction.normalize();

  ProblemInstance inst;
  inst.kind = "logistic";
  inst.dimension = dimension;
  inst.seed = seed;
  inst.lambda = 1.0 / (static_cast<double>(node_count) * samples_per_node);
  const double node_lambda = inst.lambda / node_count;

  for (int v = 0; v < node_count; ++v) {
    Matrix features(samples_per_node, dimension);
    Vector labels(samples_per_node);
    for (int i = 0; i < samples_per_node; ++i) {
      const double y = (i % 2 == 0) ? 1.0 : -1.0;
      labels(i) = y;
      features.row(i) = (y * direction + normal_vector(rng, dimension)).transpose();
    }
    inst.functions.push_back(
        std::make_shared<LogisticLoss>(std::move(features), std::move(labels), node_lambda));
    inst.sets.push_back(std::make_shared<WholeSpace>(dimension));
  }
  inst.witness = Vector::Zero(dimension);
  return inst;
}

std::string instance_to_json(const ProblemInstance& inst) {
  json nodes = json::array();
  for (int v = 0; v < inst.node_count(); ++v) {
    nodes.push_back({{"function", function_to_json(*inst.functions[v])},
                     {"set", set_to_json(*inst.sets[v])}});
  }
  json j = {{"kind", inst.kind},
            {"dimension", inst.dimension},
            {"node_count", inst.node_count()},
            {"seed", inst.seed},
            {"lambda", inst.lambda},
            {"nodes", nodes}};
  if (inst.witness) j["witness"] = to_array(*inst.witness);
  return j.dump(1);
}

ProblemInstance instance_from_json(const std::string& text) {
  const json j = json::parse(text);
  ProblemInstance inst;
  inst.kind = j.at("kind").get<std::string>();
  inst.dimension = j.at("dimension").get<int>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.lambda = j.value("lambda", 0.0);
  for (const auto& node : j.at("nodes")) {
    inst.functions.push_back(function_from_json(node.at("function")));
    inst.sets.push_back(set_from_json(node.at("set"), inst.dimension));
  }
  if (j.contains("witness")) inst.witness = from_array(j.at("witness"));
  if (j.at("node_count").get<int>() != inst.node_count()) {
    throw std::invalid_argument("instance_from_json: node_count does not match node list");
  }
  inst.validate();
  return inst;
}

}  // namespace dagp
