#include "gnlab/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gnlab/error.hpp"
#include "gnlab/funcspace.hpp"
#include "gnlab/parallel.hpp"
#include "gnlab/quadrature.hpp"

namespace gnlab {

using nlohmann::json;

void validate(const ControlSystem& sys) {
  require(sys.p >= 1, ErrorKind::kParameter, "p must be >= 1");
  require(sys.T > 0.0 && std::isfinite(sys.T), ErrorKind::kParameter, "horizon T must be > 0");
}

namespace {

double ipow(double x, int p) {
  double r = 1.0;
  for (int k = 0; k < p; ++k) r *= x;
  return r;
}

struct LawValue {
  double t;
  double operator()(const law::Zero&) const { return 0.0; }
  double operator()(const law::ScaledBumpTriple& w) const {
    double s = t * std::pow(w.eps, -w.a);
    if (s <= 0.0 || s >= 1.0) return 0.0;
    static const AnalyticFunction chi = AnalyticFunction::bump_chi();
    return w.sign * w.eps * evaluate(chi, 3, s);
  }
  double operator()(const law::GridSamples& w) const {
    const std::size_t n = w.values.size();
    if (t < 0.0 || t > w.T) return 0.0;
    double s = t / w.T * static_cast<double>(n - 1);
    auto i = static_cast<std::size_t>(std::floor(s));
    if (i + 1 >= n) return w.values.back();
    double frac = s - static_cast<double>(i);
    return w.values[i] + frac * (w.values[i + 1] - w.values[i]);
  }
};

void check_law(const ControlSystem& sys, const ControlLaw& w) {
  if (const auto* b = std::get_if<law::ScaledBumpTriple>(&w)) {
    require(b->eps > 0.0 && std::isfinite(b->a) && b->a >= 0.0, ErrorKind::kParameter,
            "bump law needs eps > 0 and a >= 0");
    require(b->sign == 1 || b->sign == -1, ErrorKind::kParameter, "bump law sign must be +1 or -1");
    require(std::pow(b->eps, b->a) <= sys.T * (1.0 + 1e-12), ErrorKind::kParameter,
            "scaled support [0, eps^a] does not fit in [0, T]");
  }
  if (const auto* g = std::get_if<law::GridSamples>(&w)) {
    require(g->values.size() >= 2, ErrorKind::kParameter, "sampled control needs two samples");
    require(g->T > 0.0, ErrorKind::kParameter, "sampled control needs T > 0");
  }
}

using State = std::array<double, 4>;

State rhs(const State& x, double w, int p) {
  double prod = x[0] * x[1] * x[2];
  return {w, x[0], x[1], prod * prod - ipow(x[0], p)};
}

}  // namespace

double control_value(const ControlLaw& w, double t) { return std::visit(LawValue{t}, w); }

std::string law_name(const ControlLaw& w) {
  struct {
    std::string operator()(const law::Zero&) const { return "zero"; }
    std::string operator()(const law::ScaledBumpTriple& b) const {
      return std::string("bump(eps=") + format_number(b.eps) + ",a=" + format_number(b.a) +
             ",sign=" + std::to_string(b.sign) + ")";
    }
    std::string operator()(const law::GridSamples& g) const {
      return "samples(" + std::to_string(g.values.size()) + ")";
    }
  } v;
  return std::visit(v, w);
}

Trajectory integrate(const ControlSystem& sys, const ControlLaw& w, std::size_t steps) {
  validate(sys);
  check_law(sys, w);
  require(steps >= 2, ErrorKind::kParameter, "integration needs at least two steps");
  const double dt = sys.T / static_cast<double>(steps);
  Trajectory tr;
  tr.t.resize(steps + 1);
  for (auto& row : tr.x) row.assign(steps + 1, 0.0);
  tr.w.resize(steps + 1);
  State x{0.0, 0.0, 0.0, 0.0};
  double w0 = control_value(w, 0.0);
  tr.w[0] = w0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double wm = control_value(w, t + 0.5 * dt);
    const double w1 = control_value(w, k + 1 == steps ? sys.T : t + dt);
    State k1 = rhs(x, w0, sys.p);
    State y;
    for (int i = 0; i < 4; ++i) y[i] = x[i] + 0.5 * dt * k1[i];
    State k2 = rhs(y, wm, sys.p);
    for (int i = 0; i < 4; ++i) y[i] = x[i] + 0.5 * dt * k2[i];
    State k3 = rhs(y, wm, sys.p);
    for (int i = 0; i < 4; ++i) y[i] = x[i] + dt * k3[i];
    State k4 = rhs(y, w1, sys.p);
    for (int i = 0; i < 4; ++i) {
      x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(x[i]))
        fail(ErrorKind::kDivergence, "state became non-finite at step " + std::to_string(k + 1));
      tr.x[static_cast<std::size_t>(i)][k + 1] = x[i];
    }
    tr.t[k + 1] = k + 1 == steps ? sys.T : t + dt;
    tr.w[k + 1] = w1;
    w0 = w1;
  }
  return tr;
}

namespace {

// int (u u' u'')^2 and int (u'')^p along a trajectory, u = x3
std::pair<double, double> formula_terms(const Trajectory& tr, int p, bool absolute) {
  const std::size_t n = tr.t.size();
  std::vector<double> prod(n), power(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = tr.x[0][i] * tr.x[1][i] * tr.x[2][i];
    prod[i] = v * v;
    double s = ipow(tr.x[0][i], p);
    power[i] = absolute ? std::fabs(s) : s;
  }
  const double h = tr.t.back() / static_cast<double>(n - 1);
  return {quadrature::simpson(prod, h), quadrature::simpson(power, h)};
}

double constraint_size(const Trajectory& tr) {
  auto x = tr.terminal();
  return std::max({std::fabs(x[0]), std::fabs(x[1]), std::fabs(x[2])});
}

}  // namespace

FormulaCheck terminal_formula_check(const ControlSystem& sys, const ControlLaw& w, std::size_t steps,
                                    double constraint_tol) {
  auto tr = integrate(sys, w, steps);
  require(constraint_size(tr) <= constraint_tol, ErrorKind::kPrecondition,
          "terminal constraints x1(T) = x2(T) = x3(T) = 0 violated (max " + format_number(constraint_size(tr)) +
              ")");
  auto [a, b] = formula_terms(tr, sys.p, false);
  FormulaCheck out;
  out.x4 = tr.x[3].back();
  out.formula = a - b;
  out.residual = std::fabs(out.x4 - out.formula) / std::max(std::fabs(out.x4), 1e-30);
  return out;
}

// ----------------------------------------------------------------- scaling

std::vector<double> parse_geometric_range(const std::string& text) {
  auto bad = [&] { fail(ErrorKind::kParameter, "malformed range '" + text + "' (expected hi:lo:count)"); };
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3) bad();
  double hi = 0.0, lo = 0.0;
  long count = 0;
  try {
    std::size_t used = 0;
    hi = std::stod(parts[0], &used);
    if (used != parts[0].size()) bad();
    lo = std::stod(parts[1], &used);
    if (used != parts[1].size()) bad();
    count = std::stol(parts[2], &used);
    if (used != parts[2].size()) bad();
  } catch (const std::logic_error&) {
    bad();
  }
  if (!(hi > 0.0) || !(lo > 0.0) || !std::isfinite(hi) || !std::isfinite(lo) || count < 1) bad();
  if (count == 1) return {hi};
  std::vector<double> out;
  for (long i = 0; i < count; ++i) {
    double f = static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(std::exp(std::log(hi) + f * (std::log(lo) - std::log(hi))));
  }
  out.front() = hi;
  out.back() = lo;
  return out;
}

namespace {

std::pair<double, double> base_integrals(int p, int sign) {
  constexpr std::size_t n = (1u << 14) + 1;
  GridFunction g = sample(AnalyticFunction::bump_chi().scaled(sign), {0.0, 1.0}, n, 2);
  std::vector<double> prod(n), power(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = g.derivative(0)[i] * g.derivative(1)[i] * g.derivative(2)[i];
    prod[i] = v * v;
    power[i] = ipow(g.derivative(2)[i], p);
  }
  return {quadrature::simpson(prod, g.spacing()), quadrature::simpson(power, g.spacing())};
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

ScalingResult scaling_experiment(int p, double a, const std::vector<double>& eps, int base_sign, double T,
                                 std::size_t steps) {
  require(p >= 1, ErrorKind::kParameter, "p must be >= 1");
  require(a >= 0.0 && std::isfinite(a), ErrorKind::kParameter, "a must be >= 0");
  require(!eps.empty(), ErrorKind::kParameter, "empty eps list");
  for (double e : eps) require(e > 0.0 && e < 1.0, ErrorKind::kParameter, "eps values must lie in (0,1)");
  ScalingResult out;
  out.p = p;
  out.a = a;
  out.base_sign = base_sign;
  out.T = T;
  out.steps = steps;
  out.rows.resize(eps.size());
  const ControlSystem sys{p, T};
  parallel_tasks(eps.size(), [&](std::size_t i) {
    auto tr = integrate(sys, law::ScaledBumpTriple{eps[i], a, base_sign}, steps);
    out.rows[i] = {eps[i], tr.x[3].back(), sign_of(tr.x[3].back())};
  });

  std::vector<double> lx, ly;
  for (const auto& r : out.rows)
    if (r.x4 != 0.0) {
      lx.push_back(std::log(r.eps));
      ly.push_back(std::log(std::fabs(r.x4)));
    }
  if (lx.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx > 0.0) out.slope = sxy / sxx;
  }

  out.stated_slope = std::min(7.0 + 12.0 * a, p * (1.0 + a) + 1.0);
  const double e1 = 6.0 + 13.0 * a;
  const double e2 = p * (1.0 + a) + a;
  out.expected_slope = std::min(e1, e2);
  auto [i1, i2] = base_integrals(p, base_sign);
  out.product_integral = i1;
  out.power_integral = i2;
  if (e1 < e2) {
    out.expected_sign = sign_of(i1);
  } else if (e2 < e1) {
    out.expected_sign = -sign_of(i2);
  } else {
    out.expected_sign = sign_of(i1 - i2);
  }
  return out;
}

json ScalingResult::to_json() const {
  json rows_json = json::array();
  for (const auto& r : rows) rows_json.push_back({{"eps", r.eps}, {"x4", r.x4}, {"sign", r.sign}});
  return {{"p", p},
          {"a", a},
          {"base_sign", base_sign},
          {"T", T},
          {"steps", steps},
          {"rows", rows_json},
          {"slope", slope ? json(*slope) : json(nullptr)},
          {"stated_slope", stated_slope},
          {"expected_slope", expected_slope},
          {"expected_sign", expected_sign},
          {"product_integral", product_integral},
          {"power_integral", power_integral}};
}

CsvTable ScalingResult::to_csv() const {
  CsvTable t({"eps", "x4", "sign"});
  for (const auto& r : rows) t.add_row({format_number(r.eps), format_number(r.x4), std::to_string(r.sign)});
  return t;
}

// ------------------------------------------------------------- obstruction

law::GridSamples random_control(double T, std::size_t steps, std::uint64_t seed, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int kModes = 8;
  std::array<double, kModes> ca{}, sa{};
  for (int k = 0; k < kModes; ++k) {
    ca[static_cast<std::size_t>(k)] = normal(rng) / (k + 1);
    sa[static_cast<std::size_t>(k)] = normal(rng) / (k + 1);
  }
  const double c0 = normal(rng);
  law::GridSamples out{T, std::vector<double>(2 * steps + 1)};
  const double pi = std::acos(-1.0);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double s = static_cast<double>(i) / static_cast<double>(out.values.size() - 1);
    double v = c0;
    for (int k = 0; k < kModes; ++k) {
      double ang = 2.0 * pi * (k + 1) * s;
      v += ca[static_cast<std::size_t>(k)] * std::cos(ang) + sa[static_cast<std::size_t>(k)] * std::sin(ang);
    }
    out.values[i] = v;
  }
  return out;
}

std::optional<law::GridSamples> project_control(const law::GridSamples& w, std::size_t steps, double eta) {
  require(eta > 0.0, ErrorKind::kParameter, "eta must be > 0");
  const ControlSystem lin{1, w.T};
  auto terminal3 = [&](const law::GridSamples& c) {
    auto x = integrate(lin, c, steps).terminal();
    return std::array<double, 3>{x[0], x[1], x[2]};
  };
  const std::size_t n = w.values.size();
  std::array<law::GridSamples, 3> basis;
  std::array<std::array<double, 3>, 3> M{};
  for (int b = 0; b < 3; ++b) {
    basis[static_cast<std::size_t>(b)] = {w.T, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
      double s = static_cast<double>(i) / static_cast<double>(n - 1);
      basis[static_cast<std::size_t>(b)].values[i] = std::pow(s, b);
    }
    auto col = terminal3(basis[static_cast<std::size_t>(b)]);
    for (int r = 0; r < 3; ++r) M[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)] = col[static_cast<std::size_t>(r)];
  }
  auto rhs = terminal3(w);

  // Cramer's rule on the 3x3 response matrix
  auto det3 = [](const std::array<std::array<double, 3>, 3>& A) {
    return A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
           A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
  };
  const double det = det3(M);
  double scale = 0.0;
  for (const auto& row : M)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  if (!(std::fabs(det) > 1e-14 * scale * scale * scale)) return std::nullopt;
  std::array<double, 3> c{};
  for (int k = 0; k < 3; ++k) {
    auto A = M;
    for (int r = 0; r < 3; ++r) A[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] = rhs[static_cast<std::size_t>(r)];
    c[static_cast<std::size_t>(k)] = det3(A) / det;
  }
  law::GridSamples out = w;
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (int b = 0; b < 3; ++b)
      out.values[i] -= c[static_cast<std::size_t>(b)] * basis[static_cast<std::size_t>(b)].values[i];
    sup = std::max(sup, std::fabs(out.values[i]));
  }
  if (!(sup > 0.0)) return std::nullopt;
  for (double& v : out.values) v *= eta / sup;
  return out;
}

ObstructionResult obstruction_check(int p, double T, double eta, std::size_t trials, std::uint64_t seed,
                                    std::size_t steps) {
  require(p >= 12, ErrorKind::kParameter, "the obstruction case needs p >= 12");
  require(T > 0.0 && eta > 0.0, ErrorKind::kParameter, "T and eta must be > 0");
  ObstructionResult out;
  out.p = p;
  out.T = T;
  out.eta = eta;
  out.seed = seed;
  out.steps = steps;
  out.condition = std::pow(T, p - 12) * std::pow(eta, p - 6);
  require(out.condition <= 1.0 + 1e-12, ErrorKind::kPrecondition,
          "T^(p-12) eta^(p-6) = " + format_number(out.condition) + " exceeds 1");
  out.trials.resize(trials);
  const ControlSystem sys{p, T};
  parallel_tasks(trials, [&](std::size_t i) {
    ObstructionTrial& tr = out.trials[i];
    tr.index = i;
    auto w = project_control(random_control(T, steps, seed, i), steps, eta);
    if (!w) {
      tr.skipped = true;
      tr.note = "constraint projection failed";
      return;
    }
    auto path = integrate(sys, *w, steps);
    auto [prod, power] = formula_terms(path, p, true);
    tr.x4 = path.x[3].back();
    tr.normalizer = prod + power;
    tr.normalized = tr.normalizer > 0.0 ? tr.x4 / tr.normalizer : 0.0;
    tr.constraint = constraint_size(path);
  });
  out.worst = std::numeric_limits<double>::infinity();
  for (const auto& tr : out.trials) {
    if (tr.skipped) continue;
    out.worst = std::min(out.worst, tr.normalized);
    if (tr.normalized < -out.tolerance) out.pass = false;
  }
  if (!std::isfinite(out.worst)) out.worst = 0.0;
  return out;
}

json ObstructionResult::to_json() const {
  json rows = json::array();
  for (const auto& t : trials)
    rows.push_back({{"index", t.index},
                    {"skipped", t.skipped},
                    {"note", t.note},
                    {"x4", t.x4},
                    {"normalizer", t.normalizer},
                    {"normalized", t.normalized},
                    {"constraint", t.constraint}});
  return {{"p", p},       {"T", T},         {"eta", eta},   {"condition", condition}, {"seed", seed},
          {"steps", steps}, {"tolerance", tolerance}, {"pass", pass}, {"worst", worst}, {"trials", rows}};
}

// ------------------------------------------------------------------- p = 1

MonotoneResult monotone_check_p1(double T, const std::vector<ControlLaw>& laws, std::size_t steps) {
  MonotoneResult out;
  out.laws.resize(laws.size());
  const ControlSystem sys{1, T};
  parallel_tasks(laws.size(), [&](std::size_t i) {
    auto tr = integrate(sys, laws[i], steps);
    MonotoneLawResult& r = out.laws[i];
    r.name = law_name(laws[i]);
    constexpr double kUlp = std::numeric_limits<double>::epsilon();
    for (std::size_t k = 0; k + 1 < tr.t.size(); ++k) {
      double before = tr.x[1][k] + tr.x[3][k];
      double after = tr.x[1][k + 1] + tr.x[3][k + 1];
      double step = after - before;
      double slack = 64.0 * kUlp *
                     (std::fabs(tr.x[1][k]) + std::fabs(tr.x[3][k]) + std::fabs(tr.x[1][k + 1]) +
                      std::fabs(tr.x[3][k + 1]));
      r.worst_step = std::min(r.worst_step, step);
      if (step < -slack) r.pass = false;
    }
  });
  for (const auto& r : out.laws) out.pass = out.pass && r.pass;
  return out;
}

json MonotoneResult::to_json() const {
  json rows = json::array();
  for (const auto& r : laws) rows.push_back({{"law", r.name}, {"worst_step", r.worst_step}, {"pass", r.pass}});
  return {{"pass", pass}, {"laws", rows}};
}

}  // namespace gnlab
