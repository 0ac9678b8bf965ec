#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gnlab/corpus.hpp"
#include "gnlab/covering.hpp"
#include "gnlab/error.hpp"
#include "gnlab/parallel.hpp"

using namespace gnlab;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kParameter;
}

BalanceSpec cor7_spec(DomainMode mode = DomainMode::kRealLine) {
  return BalanceSpec::from_params(GNParams::cor7(), mode);
}

BalanceSpec spec02() {
  BalanceSpec s;
  s.ks = {0, 2};
  s.q = Exponent(2);
  s.m = 3;
  s.r = Exponent::infinity();
  return s;
}

}  // namespace

TEST(BalanceSpec, FromParamsAndValidation) {
  auto s = cor7_spec();
  EXPECT_EQ(s.ks, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(s.m, 3);
  EXPECT_DOUBLE_EQ(s.kbar(), 1.0);
  EXPECT_NO_THROW(validate(s));
  BalanceSpec edge;
  edge.ks = {0, 2};
  edge.m = 2;
  EXPECT_EQ(kind_of([&] { validate(edge); }), ErrorKind::kParameter);
  edge.ks = {1};
  edge.m = 2;  // kbar = m - 1 on the line is rejected
  EXPECT_EQ(kind_of([&] { validate(edge); }), ErrorKind::kParameter);
  edge.mode = DomainMode::kBounded;
  EXPECT_NO_THROW(validate(edge));
}

TEST(Balance, AlphaSmallWindowAsymptotics) {
  // alpha ~ |v(x)|^{1/kappa} 2^{1/(q kappa)} h^{kbar}
  auto g = sample(AnalyticFunction::bump_chi(), {0.0, 1.0}, 16385, 3);
  struct Case {
    BalanceSpec spec;
    double x;
  };
  for (const auto& c : {Case{spec02(), 0.5}, Case{cor7_spec(), 0.3}, Case{cor7_spec(), 0.7}}) {
    BalanceProfile prof(g, c.spec);
    const double h = 1e-3;
    double kappa = c.spec.kappa();
    double expect = std::pow(std::fabs(prof.v_at(c.x)), 1.0 / kappa) *
                    std::pow(2.0, 1.0 / (c.spec.q.value() * kappa)) * std::pow(h, c.spec.kbar());
    EXPECT_NEAR(balance_alpha(prof, c.x, h), expect, 0.05 * expect) << c.x;
  }
}

TEST(Balance, BetaBoundedBySupNorm) {
  auto f = corpus_function("sine_bump_3");
  auto g = sample(f, {0.0, 1.0}, 8193, 3);
  for (auto r : {Exponent::infinity(), Exponent(2)}) {
    auto s = cor7_spec();
    s.r = r;
    BalanceProfile prof(g, s);
    double sup = 0.0;
    for (double v : g.derivative(3)) sup = std::max(sup, std::fabs(v));
    // the window has length 2h, hence the 2^{1/r}
    double bound = std::pow(2.0, r.reciprocal().value()) * sup * (1 + 1e-12);
    for (double x : {0.2, 0.5, 0.8})
      for (double h : {1e-3, 1e-2, 5e-2}) EXPECT_LE(balance_beta(prof, x, h), std::pow(h, 3) * bound);
  }
}

TEST(Balance, AlphaVanishesWhereProductDoes) {
  auto g = sample(AnalyticFunction::plateau(0.1, 0.9, 0.2), {0.0, 1.0}, 4097, 3);
  BalanceProfile prof(g, cor7_spec());
  EXPECT_EQ(balance_alpha(prof, 0.5, 0.1), 0.0);
  EXPECT_GT(balance_alpha(prof, 0.2, 0.05), 0.0);
}

TEST(Balance, NonPositiveRadiusIsParameterError) {
  auto g = sample(AnalyticFunction::bump_chi(), {0.0, 1.0}, 257, 3);
  BalanceProfile prof(g, cor7_spec());
  EXPECT_EQ(kind_of([&] { balance_alpha(prof, 0.3, 0.0); }), ErrorKind::kParameter);
  EXPECT_EQ(kind_of([&] { balance_beta(prof, 0.3, -1.0); }), ErrorKind::kParameter);
}

TEST(Balance, BoundedModeUsesClippedWindow) {
  auto g = sample(corpus_function("sine_bump_1"), {0.0, 1.0}, 4097, 3);
  BalanceProfile line(g, cor7_spec());
  BalanceProfile box(g, cor7_spec(DomainMode::kBounded));
  // windows inside (0,1) agree up to the weight convention |J| = 2h
  double a_line = line.alpha(0.5, 0.1), a_box = box.alpha(0.5, 0.1);
  EXPECT_NEAR(a_box / a_line, std::pow(2.0, 1.0 - 1.0 / 6), 1e-12);
  // near the boundary the bounded window is cut to (0, x + h)
  double cut = box.beta(0.05, 0.2), same = box.beta(0.125, 0.125);
  EXPECT_NEAR(cut, same, 1e-12 * same);
}

TEST(CriticalRadius, BalancedAndBracketedByDenseScan) {
  auto g = sample(AnalyticFunction::bump_chi(), {0.0, 1.0}, 8193, 3);
  BalanceProfile prof(g, cor7_spec());
  for (double x : {0.3, 0.2, 0.65}) {
    auto cr = critical_radius(prof, x);
    EXPECT_LE(cr.residual, 1e-6) << x;
    // first crossing on a 10^5-point geometric h grid
    const double h0 = 2 * g.spacing(), h1 = 10.0;
    double prev = h0;
    double found = -1.0;
    for (int i = 1; i <= 100000; ++i) {
      double h = h0 * std::pow(h1 / h0, i / 100000.0);
      if (prof.alpha(x, h) <= prof.beta(x, h)) {
        found = h;
        break;
      }
      prev = h;
    }
    ASSERT_GT(found, 0.0);
    EXPECT_GE(cr.radius, prev * (1 - 1e-12)) << x;
    EXPECT_LE(cr.radius, found * (1 + 1e-12)) << x;
  }
}

TEST(CriticalRadius, DilationRescalesRadius) {
  auto f = corpus_function("sine_bump_1");
  BalanceProfile base(sample(f, {0.0, 1.0}, 8193, 3), cor7_spec());
  for (double lambda : {2.0, 0.5}) {
    auto fl = f.dilated(lambda);
    BalanceProfile dil(sample(fl, fl.support(), 8193, 3), cor7_spec());
    for (double x : {0.3, 0.62}) {
      double r = critical_radius(base, x).radius;
      double rl = critical_radius(dil, x / lambda).radius;
      EXPECT_NEAR(rl, r / lambda, 0.02 * r / lambda) << lambda << " " << x;
    }
  }
}

TEST(CriticalRadius, PointOutsideEIsDomainError) {
  auto g = sample(AnalyticFunction::bump_chi(), {0.0, 1.0}, 4097, 3);
  BalanceProfile prof(g, cor7_spec());
  // chi'(1/2) = 0, so v = u u' u'' vanishes at the centre
  EXPECT_FALSE(in_E(prof, 0.5));
  EXPECT_EQ(kind_of([&] { critical_radius(prof, 0.5); }), ErrorKind::kDomain);
  EXPECT_EQ(kind_of([&] { critical_radius(prof, 0.0); }), ErrorKind::kDomain);
  EXPECT_TRUE(in_E(prof, 0.3));
}

TEST(CriticalRadius, Deterministic) {
  auto g = sample(corpus_function("perturbed_plateau"), {0.0, 1.0}, 4097, 3);
  BalanceProfile prof(g, cor7_spec());
  auto a = critical_radius(prof, 0.41);
  auto b = critical_radius(prof, 0.41);
  EXPECT_EQ(a.radius, b.radius);
  EXPECT_EQ(a.alpha, b.alpha);
}

TEST(Besicovitch, DisjointIntervalsAllSelected) {
  std::vector<double> c{0.2, 0.5, 0.8}, r(3, 0.05);
  auto sel = besicovitch_select(c, r);
  EXPECT_EQ(sel, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(overlap_at_probes(c, r, {0, 1}, 10000), 1);
  EXPECT_EQ(overlap_exact(c, r), 1);
}

TEST(Besicovitch, SinglePoint) {
  auto sel = besicovitch_select({0.4}, {0.1});
  EXPECT_EQ(sel, (std::vector<std::size_t>{0}));
}

TEST(Besicovitch, RejectsBadInput) {
  EXPECT_EQ(kind_of([] { besicovitch_select({0.1, 0.2}, {0.1}); }), ErrorKind::kParameter);
  EXPECT_EQ(kind_of([] { besicovitch_select({0.1}, {0.0}); }), ErrorKind::kParameter);
}

TEST(Besicovitch, RandomCollectionsCoverAndOverlapAtMostFour) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + rng() % 200;
    std::vector<double> c(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = U(rng);
      r[i] = std::pow(10.0, -3.0 * U(rng));
    }
    auto sel = besicovitch_select(c, r);
    std::vector<double> sc, sr;
    for (auto i : sel) {
      sc.push_back(c[i]);
      sr.push_back(r[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      bool covered = false;
      for (std::size_t k = 0; k < sc.size(); ++k) covered |= std::fabs(c[i] - sc[k]) < sr[k];
      EXPECT_TRUE(covered);
    }
    EXPECT_LE(overlap_exact(sc, sr), 4);
    EXPECT_LE(overlap_at_probes(sc, sr, {-1, 2}, 10000), overlap_exact(sc, sr));
  }
}

TEST(Besicovitch, CriticalRadiiOnBumpChi) {
  auto g = sample(AnalyticFunction::bump_chi(), {0.0, 1.0}, 8193, 3);
  BalanceProfile prof(g, cor7_spec());
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> c, r;
  while (c.size() < 200) {
    double x = U(rng);
    if (!in_E(prof, x)) continue;
    c.push_back(x);
    r.push_back(critical_radius(prof, x).radius);
  }
  auto sel = besicovitch_select(c, r);
  std::vector<double> sc, sr;
  for (auto i : sel) {
    sc.push_back(c[i]);
    sr.push_back(r[i]);
  }
  EXPECT_LE(overlap_at_probes(sc, sr, {0, 1}, 10000), 4);
}

TEST(Cover, ZeroFunctionGivesEmptyCover) {
  auto g = sample(AnalyticFunction::polynomial({0.0}), {0.0, 1.0}, 257, 3);
  auto rep = build_cover(BalanceProfile(g, cor7_spec()));
  EXPECT_TRUE(rep.centers.empty());
  EXPECT_EQ(rep.deficit, 0.0);
  EXPECT_EQ(rep.e_points, 0u);
}

TEST(Cover, BumpChiGuarantees) {
  auto g = sample(AnalyticFunction::bump_chi(), {0.0, 1.0}, 8193, 3);
  auto rep = build_cover(BalanceProfile(g, cor7_spec()));
  EXPECT_LE(rep.max_overlap_probe, 4);
  EXPECT_LE(rep.max_overlap_exact, 4);
  EXPECT_LE(rep.max_residual, 1e-6);
  EXPECT_TRUE(rep.balanced);
  EXPECT_LE(rep.uncovered, 2u);
  for (double r : rep.radii) EXPECT_GT(r, 0.0);
  auto csv = rep.to_csv();
  EXPECT_EQ(csv.size(), rep.centers.size());
  EXPECT_EQ(rep.to_json()["intervals"].size(), rep.centers.size());
}

TEST(Cover, DeficitNonIncreasingUnderRefinement) {
  auto g = sample(corpus_function("perturbed_poly_plateau"), {0.0, 1.0}, 4097, 3);
  BalanceProfile prof(g, cor7_spec());
  std::size_t prev = g.size();
  for (std::size_t res : {257u, 1025u, 4097u}) {
    CoverOptions opts;
    opts.e_resolution = res;
    auto rep = build_cover(prof, opts);
    EXPECT_LE(rep.uncovered, prev) << res;
    prev = rep.uncovered;
  }
  EXPECT_LE(prev, 2u);
}

TEST(Cover, ResolutionMustDivideGrid) {
  auto g = sample(AnalyticFunction::bump_chi(), {0.0, 1.0}, 1025, 3);
  CoverOptions opts;
  opts.e_resolution = 1000;
  EXPECT_EQ(kind_of([&] { build_cover(BalanceProfile(g, cor7_spec()), opts); }), ErrorKind::kParameter);
}

TEST(Cover, BoundedHypothesisFailureIsNoCrossing) {
  // D^3 u = 0 while v = u u' stays positive: beta never catches alpha
  auto g = sample(AnalyticFunction::polynomial({1.0, 1.0}), {0.0, 1.0}, 513, 3);
  BalanceSpec s;
  s.ks = {0, 1};
  s.q = Exponent(2);
  s.m = 3;
  s.r = Exponent::infinity();
  s.mode = DomainMode::kBounded;
  EXPECT_EQ(kind_of([&] { build_cover(BalanceProfile(g, s)); }), ErrorKind::kNoCrossing);
}

TEST(Cover, IndependentOfWorkerCount) {
  auto g = sample(corpus_function("sine_bump_3"), {0.0, 1.0}, 2049, 3);
  BalanceProfile prof(g, cor7_spec());
  set_max_jobs(1);
  auto a = build_cover(prof);
  set_max_jobs(4);
  auto b = build_cover(prof);
  set_max_jobs(0);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}
