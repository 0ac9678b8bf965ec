#include "gnlab/corpus.hpp"

#include "gnlab/error.hpp"

namespace gnlab {

namespace {

constexpr double kPerturbation = 1e-2;

AnalyticFunction polynomial_plateau() {
  // (t - 1/2)^2 on a plateau: polynomial on [0.3, 0.7]
  auto poly = AnalyticFunction::polynomial({0.25, -1.0, 1.0});
  return poly * AnalyticFunction::plateau(0.2, 0.8, 0.1);
}

}  // namespace

std::vector<CorpusEntry> standard_corpus() {
  std::vector<CorpusEntry> out;
  out.push_back({"bumpchi", AnalyticFunction::bump_chi()});
  out.push_back({"sine_bump_1", AnalyticFunction::sine_bump(1.0)});
  out.push_back({"sine_bump_3", AnalyticFunction::sine_bump(3.0)});
  out.push_back({"sine_bump_7", AnalyticFunction::sine_bump(7.0)});
  out.push_back({"spline_bump",
                 AnalyticFunction::spline_bump({1.0, 0.6, -0.4, 0.9, 1.3, -0.5, 0.7, 1.1},
                                               {0, 0, 0, 0, 0.2, 0.4, 0.6, 0.8, 1, 1, 1, 1})});
  out.push_back({"perturbed_poly_plateau", perturb_nowhere_polynomial(polynomial_plateau(), kPerturbation)});
  out.push_back({"perturbed_plateau",
                 perturb_nowhere_polynomial(AnalyticFunction::plateau(0.25, 0.75, 0.15), kPerturbation)});
  return out;
}

AnalyticFunction corpus_function(const std::string& id) {
  for (auto& e : standard_corpus())
    if (e.id == id) return e.function;
  fail(ErrorKind::kParameter, "unknown corpus function '" + id + "'");
}

}  // namespace gnlab
