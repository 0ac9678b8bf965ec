#include "gnlab/funcspace_json.hpp"

#include <string>

#include "gnlab/error.hpp"

namespace gnlab {

using nlohmann::json;

namespace {

double number(const json& params, const char* key) {
  require(params.contains(key), ErrorKind::kParameter, std::string("missing parameter '") + key + "'");
  const json& v = params.at(key);
  require(v.is_number(), ErrorKind::kParameter, std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& params, const char* key) {
  require(params.contains(key) && params.at(key).is_array(), ErrorKind::kParameter,
          std::string("parameter '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : params.at(key)) {
    require(v.is_number(), ErrorKind::kParameter, std::string("parameter '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

struct ToJson {
  json operator()(const family::BumpChi&) const { return json::object(); }
  json operator()(const family::ScaledBump& f) const { return {{"a", f.a}, {"b", f.b}}; }
  json operator()(const family::PolynomialPiece& f) const { return {{"coeffs", f.poly.coeffs()}}; }
  json operator()(const family::SineBump& f) const { return {{"frequency", f.frequency}}; }
  json operator()(const family::SplineBump& f) const { return {{"coeffs", f.coeffs}, {"knots", f.knots}}; }
  json operator()(const family::Plateau& f) const { return {{"a", f.a}, {"b", f.b}, {"ramp", f.ramp}}; }
  json operator()(const family::Sum& f) const {
    json terms = json::array();
    for (const auto& [w, g] : f.terms) terms.push_back({{"weight", w}, {"function", to_json(g)}});
    return {{"terms", terms}};
  }
  json operator()(const family::Product& f) const {
    json factors = json::array();
    for (const auto& g : f.factors) factors.push_back(to_json(g));
    return {{"factors", factors}};
  }
  json operator()(const family::Dilation& f) const {
    return {{"base", to_json(f.base.front())}, {"scale", f.scale}, {"shift", f.shift}};
  }
};

}  // namespace

json to_json(const Interval& i) { return json::array({i.lo, i.hi}); }

Interval interval_from_json(const json& j) {
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(), ErrorKind::kParameter,
          "interval must be [lo, hi]");
  Interval out{j[0].get<double>(), j[1].get<double>()};
  require(out.lo <= out.hi, ErrorKind::kParameter, "interval has lo > hi");
  return out;
}

json to_json(const AnalyticFunction& f) {
  return {{"family", f.family_name()}, {"params", std::visit(ToJson{}, f.node())},
          {"support", to_json(f.support())}};
}

AnalyticFunction function_from_json(const json& j) {
  require(j.is_object() && j.contains("family") && j.at("family").is_string(), ErrorKind::kParameter,
          "function descriptor needs a string 'family'");
  const std::string name = j.at("family").get<std::string>();
  const json params = j.value("params", json::object());
  require(params.is_object(), ErrorKind::kParameter, "'params' must be an object");

  if (name == "bumpchi") return AnalyticFunction::bump_chi();
  if (name == "scaled_bump") return AnalyticFunction::scaled_bump(number(params, "a"), number(params, "b"));
  if (name == "polynomial") {
    Interval support{0.0, 1.0};
    if (j.contains("support")) support = interval_from_json(j.at("support"));
    return AnalyticFunction::polynomial(numbers(params, "coeffs"), support);
  }
  if (name == "sine_bump") return AnalyticFunction::sine_bump(number(params, "frequency"));
  if (name == "spline_bump")
    return AnalyticFunction::spline_bump(numbers(params, "coeffs"), numbers(params, "knots"));
  if (name == "plateau")
    return AnalyticFunction::plateau(number(params, "a"), number(params, "b"), number(params, "ramp"));
  if (name == "sum") {
    require(params.contains("terms") && params.at("terms").is_array(), ErrorKind::kParameter,
            "sum needs 'terms'");
    family::Sum sum;
    for (const auto& t : params.at("terms"))
      sum.terms.emplace_back(number(t, "weight"), function_from_json(t.at("function")));
    return AnalyticFunction(std::move(sum));
  }
  if (name == "product") {
    require(params.contains("factors") && params.at("factors").is_array(), ErrorKind::kParameter,
            "product needs 'factors'");
    family::Product prod;
    for (const auto& t : params.at("factors")) prod.factors.push_back(function_from_json(t));
    return AnalyticFunction(std::move(prod));
  }
  if (name == "dilation") {
    require(params.contains("base"), ErrorKind::kParameter, "dilation needs 'base'");
    return AnalyticFunction(family::Dilation{{function_from_json(params.at("base"))},
                                             number(params, "scale"), params.value("shift", 0.0)});
  }
  fail(ErrorKind::kParameter, "unknown function family '" + name + "'");
}

json to_json(const Scalar& s) {
  if (s.is_exact()) {
    const Rational& r = *s.exact();
    if (r.is_integer()) return r.num();
    return r.to_string();
  }
  return s.value();
}

Scalar scalar_from_json(const json& j) {
  if (j.is_number_integer()) return Scalar(j.get<std::int64_t>());
  if (j.is_number()) return Scalar(j.get<double>());
  require(j.is_string(), ErrorKind::kParameter, "expected a number or a numeric string");
  return Scalar::parse(j.get<std::string>());
}

json to_json(const Exponent& e) {
  if (e.is_infinite()) return "inf";
  return to_json(e.finite());
}

Exponent exponent_from_json(const json& j) {
  if (j.is_string()) return Exponent::parse(j.get<std::string>());
  return Exponent(scalar_from_json(j));
}

}  // namespace gnlab
