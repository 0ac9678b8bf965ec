#include "gnlab/gn.hpp"

#include <algorithm>
#include <cmath>

#include "gnlab/error.hpp"
#include "gnlab/funcspace_json.hpp"
#include "gnlab/norms.hpp"
#include "gnlab/quadrature.hpp"

namespace gnlab {

using nlohmann::json;

Scalar GNParams::kbar() const {
  std::int64_t sum = 0;
  for (int k : ks) sum += k;
  return Scalar(sum) / Scalar(kappa());
}

GNParams GNParams::cor7() {
  GNParams p;
  p.p = Exponent(12);
  p.q = Exponent(2);
  p.r = Exponent::infinity();
  p.ks = {0, 1, 2};
  p.j = 2;
  p.m = 3;
  p.theta = Scalar(Rational(1, 2));
  return p;
}

GNParams GNParams::cor6(int k) {
  require(k >= 1, ErrorKind::kParameter, "cor6 preset needs k >= 1");
  GNParams p;
  p.p = Exponent(6);
  p.q = Exponent(2);
  p.r = Exponent::infinity();
  p.ks = {0, k};
  p.j = k;
  p.m = 2 * k;
  p.theta = Scalar(Rational(1, 3));
  return p;
}

namespace {

void check_exponent(const Exponent& e, const char* name) {
  require(e.is_infinite() || e.value() >= 1.0, ErrorKind::kParameter,
          std::string("exponent ") + name + " must lie in [1, inf], got " + e.to_string());
}

Scalar reciprocal_product(const Exponent& q, int kappa) {
  return q.reciprocal() / Scalar(kappa);
}

Exponent times(const Exponent& q, int kappa) {
  if (q.is_infinite()) return q;
  return Exponent(q.finite() * Scalar(kappa));
}

Exponent from_reciprocal(const Scalar& inv, const char* name) {
  require(inv.value() >= -1e-15 && inv.value() <= 1.0 + 1e-15, ErrorKind::kInfeasible,
          std::string("no legal ") + name + ": 1/" + name + " = " + inv.to_string() + " is outside [0,1]");
  if (Scalar::equal(inv, Scalar(0), 1e-15)) return Exponent::infinity();
  return Exponent(Scalar(1) / inv);
}

}  // namespace

void validate_orders(const GNParams& params) {
  require(!params.ks.empty(), ErrorKind::kParameter, "at least one order k_i is required");
  require(std::is_sorted(params.ks.begin(), params.ks.end()), ErrorKind::kParameter,
          "orders k_i must be sorted ascending");
  require(params.ks.front() >= 0, ErrorKind::kParameter, "orders must be >= 0");
  require(params.ks.back() <= params.j, ErrorKind::kParameter, "ordering k_kappa <= j violated");
  require(params.j < params.m, ErrorKind::kParameter, "ordering j < m violated");
  check_exponent(params.p, "p");
  check_exponent(params.q, "q");
  check_exponent(params.r, "r");
  require(Scalar::less_equal(Scalar(0), params.theta, 0.0) && Scalar::less_equal(params.theta, Scalar(1), 0.0),
          ErrorKind::kParameter, "theta must lie in [0,1]");
}

void validate(const GNParams& params) {
  validate_orders(params);
  require(Scalar::less_equal(theta_star(params), params.theta), ErrorKind::kParameter,
          "theta " + params.theta.to_string() + " is below theta* = " + theta_star(params).to_string());
}

Scalar theta_star(const GNParams& params) {
  validate_orders(params);
  Scalar kbar = params.kbar();
  return (Scalar(params.j) - kbar) / (Scalar(params.m) - kbar);
}

bool RelationResidual::holds(double tol) const {
  if (general.is_exact()) return general.exact()->is_zero();
  return std::fabs(general.value()) < tol;
}

RelationResidual relation_residual(const GNParams& params) {
  validate_orders(params);
  const Scalar kbar = params.kbar();
  const Scalar one(1);
  const Scalar inv_qk = reciprocal_product(params.q, params.kappa());
  RelationResidual out;
  out.general = (params.p.reciprocal() - Scalar(params.j)) -
                params.theta * (params.r.reciprocal() - Scalar(params.m)) -
                (one - params.theta) * (inv_qk - kbar);
  if (Scalar::equal(params.theta, theta_star(params), 1e-14)) {
    out.critical = params.p.reciprocal() - params.theta * params.r.reciprocal() - (one - params.theta) * inv_qk;
    out.consistent = Scalar::equal(out.general, *out.critical, 1e-12);
  }
  return out;
}

GNParams solve_exponent(GNParams params, Unknown unknown) {
  validate_orders(params);
  const Scalar one(1);
  const Scalar kbar = params.kbar();
  const Scalar kappa(params.kappa());
  switch (unknown) {
    case Unknown::kP: {
      Scalar inv = Scalar(params.j) + params.theta * (params.r.reciprocal() - Scalar(params.m)) +
                   (one - params.theta) * (reciprocal_product(params.q, params.kappa()) - kbar);
      params.p = from_reciprocal(inv, "p");
      break;
    }
    case Unknown::kQ: {
      require(!Scalar::equal(params.theta, one, 0.0), ErrorKind::kInfeasible,
              "q does not enter the relation when theta = 1");
      Scalar a = params.p.reciprocal() - Scalar(params.j) -
                 params.theta * (params.r.reciprocal() - Scalar(params.m)) + (one - params.theta) * kbar;
      params.q = from_reciprocal(a * kappa / (one - params.theta), "q");
      break;
    }
    case Unknown::kTheta: {
      Scalar low = reciprocal_product(params.q, params.kappa()) - kbar;
      Scalar num = params.p.reciprocal() - Scalar(params.j) - low;
      Scalar den = params.r.reciprocal() - Scalar(params.m) - low;
      require(!Scalar::equal(den, Scalar(0), 1e-15), ErrorKind::kInfeasible,
              "theta is undetermined for this tuple");
      params.theta = num / den;
      break;
    }
  }
  try {
    validate(params);
  } catch (const Error& e) {
    fail(ErrorKind::kInfeasible, std::string("solution is not admissible: ") + e.what());
  }
  require(relation_residual(params).holds(), ErrorKind::kInfeasible, "solved tuple misses the relation");
  return params;
}

json to_json(const GNParams& params) {
  json out;
  out["p"] = to_json(params.p);
  out["q"] = to_json(params.q);
  out["r"] = to_json(params.r);
  out["ks"] = params.ks;
  out["j"] = params.j;
  out["m"] = params.m;
  out["theta"] = to_json(params.theta);
  return out;
}

GNParams params_from_json(const json& j) {
  require(j.is_object(), ErrorKind::kParameter, "params must be a JSON object");
  GNParams out;
  if (j.contains("preset")) {
    std::string preset = j.at("preset").get<std::string>();
    if (preset == "cor7") {
      out = GNParams::cor7();
    } else if (preset == "cor6") {
      out = GNParams::cor6(j.value("k", 1));
    } else {
      fail(ErrorKind::kParameter, "unknown preset '" + preset + "'");
    }
  }
  if (j.contains("p")) out.p = exponent_from_json(j.at("p"));
  if (j.contains("q")) out.q = exponent_from_json(j.at("q"));
  if (j.contains("r")) out.r = exponent_from_json(j.at("r"));
  if (j.contains("ks")) out.ks = j.at("ks").get<std::vector<int>>();
  if (j.contains("j")) out.j = j.at("j").get<int>();
  if (j.contains("m")) out.m = j.at("m").get<int>();
  if (j.contains("theta")) out.theta = scalar_from_json(j.at("theta"));
  validate_orders(out);
  return out;
}

std::string params_hash(const GNParams& params) { return fnv1a_hex(to_json(params).dump()); }

// ------------------------------------------------------------------ reports

double InequalityReport::factor(const std::string& name) const {
  for (const auto& [n, v] : factors)
    if (n == name) return v;
  fail(ErrorKind::kParameter, "report has no factor '" + name + "'");
}

json InequalityReport::to_json() const {
  json f = json::object();
  for (const auto& [n, v] : factors) f[n] = json_number(v);
  json params_json = gnlab::to_json(params);
  params_json["kappa"] = params.kappa();
  params_json["kbar"] = gnlab::to_json(params.kbar());
  params_json["theta_star"] = gnlab::to_json(theta_star(params));
  return {{"kind", kind},
          {"lhs", json_number(lhs)},
          {"rhs_factors", f},
          {"rhs", json_number(rhs)},
          {"ratio", json_number(ratio)},
          {"degenerate", degenerate},
          {"violation_candidate", violation_candidate},
          {"classical", classical},
          {"params", params_json},
          {"grid", {{"N", n}, {"interval", gnlab::to_json(grid)}}}};
}

namespace {

void finish(InequalityReport& rep) {
  if (rep.rhs > 0.0) {
    rep.ratio = rep.lhs / rep.rhs;
  } else if (rep.lhs == 0.0) {
    rep.ratio = 0.0;
    rep.degenerate = true;
  } else {
    rep.ratio = std::numeric_limits<double>::infinity();
    rep.violation_candidate = true;
  }
}

InequalityReport start(const char* kind, const GridFunction& u, const GNParams& params) {
  validate_orders(params);
  require(u.max_derivative() >= params.m, ErrorKind::kParameter,
          "grid function lacks derivative order " + std::to_string(params.m));
  InequalityReport rep;
  rep.kind = kind;
  rep.params = params;
  rep.n = u.size();
  rep.grid = u.interval();
  return rep;
}

void require_relation(const GNParams& params) {
  auto res = relation_residual(params);
  require(res.holds(1e-10), ErrorKind::kPrecondition,
          "scaling relation fails, residual " + res.general.to_string());
}

void require_compact_support(const GridFunction& u) {
  auto v = u.values();
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::fabs(x));
  double tol = 1e-10 * peak;
  require(std::fabs(v.front()) <= tol && std::fabs(v.back()) <= tol, ErrorKind::kPrecondition,
          "u must vanish at both ends of the grid");
}

double top_norm(const GridFunction& u, const GNParams& params, const Interval& domain) {
  return lebesgue_norm(u, NormSpec{params.r, params.m, domain});
}

double prod_norm(const GridFunction& u, const GNParams& params, const Interval& domain) {
  return product_norm(u, ProductSpec{params.ks, params.q, domain});
}

}  // namespace

InequalityReport evaluate_generalized(const GridFunction& u, const GNParams& params) {
  auto rep = start("generalized", u, params);
  require_relation(params);
  require_compact_support(u);
  const Interval d = u.interval();
  const double theta = params.theta.value();
  rep.lhs = lebesgue_norm(u, NormSpec{params.p, params.j, d});
  double top = top_norm(u, params, d);
  double prod = prod_norm(u, params, d);
  rep.factors = {{"top", top}, {"product", prod}};
  rep.rhs = std::pow(top, theta) * std::pow(prod, (1.0 - theta) / params.kappa());
  finish(rep);
  return rep;
}

InequalityReport evaluate_bounded(const GridFunction& u, const GNParams& params, const BoundedExtras& extras) {
  auto rep = start("bounded", u, params);
  require_relation(params);
  require(extras.k0 >= 0 && extras.k0 <= params.ks.front(), ErrorKind::kParameter, "need 0 <= k0 <= k1");
  const Interval unit{0.0, 1.0};
  Interval window = unit;
  if (extras.omega) {
    require(extras.omega->lo < extras.omega->hi && unit.contains(*extras.omega), ErrorKind::kParameter,
            "omega must be a non-empty subinterval of (0,1)");
    window = *extras.omega;
  }
  const double theta = params.theta.value();
  rep.lhs = lebesgue_norm(u, NormSpec{params.p, params.j, unit});
  double top = top_norm(u, params, unit);
  double prod = prod_norm(u, params, window);
  double low = lebesgue_norm(u, NormSpec{extras.s, extras.k0, unit});
  rep.factors = {{"top", top}, {"product", prod}, {"low", low}};
  rep.rhs = std::pow(top, theta) * std::pow(prod, (1.0 - theta) / params.kappa()) + low;
  rep.classical = params.kappa() == 1;
  finish(rep);
  return rep;
}

InequalityReport evaluate_localized(const GridFunction& u, const GNParams& params, const Interval& omega) {
  auto rep = start("localized", u, params);
  require(omega.lo < omega.hi && omega.lo >= 0.0 && omega.hi <= 1.0, ErrorKind::kParameter,
          "omega must be a non-empty open subinterval of (0,1)");
  const Interval unit{0.0, 1.0};
  rep.lhs = lebesgue_norm(u, NormSpec{params.p, params.j, unit});
  double top = top_norm(u, params, unit);
  double prod = prod_norm(u, params, omega);
  rep.factors = {{"top", top}, {"product_omega", prod}};
  rep.rhs = top + std::pow(prod, 1.0 / params.kappa());
  finish(rep);
  return rep;
}

// ------------------------------------------------------------ identities

IbpResidual ibp_identities(const GridFunction& u, IbpCase which) {
  require(u.max_derivative() >= 2, ErrorKind::kParameter, "identities need derivatives up to order 2");
  auto f = u.values();
  auto d1 = u.derivative(1);
  auto d2 = u.derivative(2);
  const bool l4 = which == IbpCase::kL4;
  const double weight = l4 ? 3.0 : 5.0;
  std::vector<double> lead(u.size()), cross(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    double sq = d1[i] * d1[i];
    double even = l4 ? sq : sq * sq;  // (u')^2 or (u')^4
    lead[i] = even * sq;
    cross[i] = f[i] * even * d2[i];
  }
  const double h = u.spacing();
  double a = quadrature::simpson(lead, h);
  double b = quadrature::simpson(cross, h);
  IbpResidual out;
  out.raw = a + weight * b;
  out.normalized = a > 0.0 ? out.raw / a : 0.0;
  return out;
}

double ratio4_ceiling() { return std::sqrt(3.0); }
double ratio6_ceiling() { return std::cbrt(5.0); }

namespace {

double ratio_of(double num, double den, double power) {
  if (den <= 0.0) return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return num / std::pow(den, power);
}

}  // namespace

double ratio4(const GridFunction& u) {
  const Interval d = u.interval();
  double num = lebesgue_norm(u, NormSpec{Exponent(4), 1, d});
  double den = product_norm(u, ProductSpec{{0, 2}, Exponent(2), d});
  return ratio_of(num, den, 0.5);
}

double ratio6(const GridFunction& u) {
  const Interval d = u.interval();
  double num = lebesgue_norm(u, NormSpec{Exponent(6), 1, d});
  double den = product_norm(u, ProductSpec{{0, 1, 2}, Exponent(2), d});
  return ratio_of(num, den, 1.0 / 3.0);
}

double ratio_half(const GridFunction& u) {
  double num = gagliardo_seminorm(u, 0.5, 4.0, 0);
  double den = product_norm(u, ProductSpec{{0, 1}, Exponent(2), u.interval()});
  return ratio_of(num, den, 0.5);
}

namespace {

constexpr std::size_t kSeminormNodes = 4097;

bool is_zero(const GridFunction& g) {
  for (double v : g.values())
    if (v != 0.0) return false;
  return true;
}

}  // namespace

std::vector<SpecialRow> special_constants(const std::vector<CorpusEntry>& corpus, std::size_t n) {
  std::vector<SpecialRow> rows;
  for (const auto& e : corpus) {
    SpecialRow row;
    row.id = e.id;
    Interval s = e.function.support();
    if (s.length() <= 0.0) {
      row.skipped = true;
      row.note = "empty support";
      rows.push_back(row);
      continue;
    }
    GridFunction g = sample(e.function, s, n, 2);
    if (is_zero(g)) {
      row.skipped = true;
      row.note = "zero function";
      rows.push_back(row);
      continue;
    }
    const Interval d = g.interval();
    double uu2 = product_norm(g, ProductSpec{{0, 2}, Exponent(2), d});
    double uu1u2 = product_norm(g, ProductSpec{{0, 1, 2}, Exponent(2), d});
    if (uu2 == 0.0 || uu1u2 == 0.0) {
      row.skipped = true;
      row.note = "zero denominator";
      rows.push_back(row);
      continue;
    }
    row.ratio4 = ratio4(g);
    row.ratio6 = ratio6(g);
    GridFunction coarse = sample(e.function, s, std::min(n, kSeminormNodes), 1);
    row.ratio_half = ratio_half(coarse);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ProbeRow> open_problem_probe(const std::vector<CorpusEntry>& corpus, const Exponent& q,
                                         const std::vector<int>& ks, std::size_t n) {
  require(!ks.empty() && std::is_sorted(ks.begin(), ks.end()) && ks.front() >= 0, ErrorKind::kParameter,
          "orders must be non-empty, sorted and >= 0");
  require(q.is_infinite() || q.value() >= 1.0, ErrorKind::kParameter, "q must lie in [1, inf]");
  const int kappa = static_cast<int>(ks.size());
  int sum = 0;
  for (int k : ks) sum += k;
  const bool integer = sum % kappa == 0;
  const bool half_pattern = kappa == 2 && ks[1] == ks[0] + 1;
  if (!integer && !half_pattern)
    fail(ErrorKind::kUnsupported,
         "non-integer mean order is only supported for two consecutive orders (k, k+1)");
  Exponent qk = times(q, kappa);
  if (!integer)
    require(!qk.is_infinite(), ErrorKind::kUnsupported, "the fractional seminorm needs a finite exponent");

  std::vector<ProbeRow> rows;
  for (const auto& e : corpus) {
    ProbeRow row;
    row.id = e.id;
    Interval s = e.function.support();
    GridFunction g = sample(e.function, s, n, ks.back());
    if (is_zero(g)) {
      row.skipped = true;
      row.note = "zero function";
      rows.push_back(row);
      continue;
    }
    row.rhs = std::pow(product_norm(g, ProductSpec{ks, q, s}), 1.0 / kappa);
    if (integer) {
      row.lhs = lebesgue_norm(g, NormSpec{qk, sum / kappa, s});
    } else {
      GridFunction coarse = sample(e.function, s, std::min(n, kSeminormNodes), ks[0]);
      row.lhs = gagliardo_seminorm(coarse, 0.5, qk.value(), ks[0]);
    }
    if (row.rhs == 0.0) {
      row.skipped = true;
      row.note = "zero denominator";
    } else {
      row.ratio = row.lhs / row.rhs;
    }
    rows.push_back(row);
  }
  return rows;
}

CsvTable sweep_generalized(const std::vector<CorpusEntry>& corpus, const std::vector<GNParams>& tuples,
                           std::size_t n) {
  CsvTable table({"params_hash", "function_id", "lhs", "rhs_top", "rhs_product", "rhs", "ratio", "N", "status"});
  for (const auto& params : tuples) {
    const std::string hash = params_hash(params);
    for (const auto& e : corpus) {
      try {
        GridFunction g = sample(e.function, e.function.support(), n, params.m);
        auto rep = evaluate_generalized(g, params);
        table.add_row({hash, e.id, format_number(rep.lhs), format_number(rep.factor("top")),
                       format_number(rep.factor("product")), format_number(rep.rhs), format_number(rep.ratio),
                       std::to_string(n), rep.degenerate ? "degenerate" : "ok"});
      } catch (const Error& err) {
        table.add_row({hash, e.id, "", "", "", "", "", std::to_string(n),
                       std::string("skipped: ") + to_string(err.kind())});
      }
    }
  }
  return table;
}

}  // namespace gnlab
