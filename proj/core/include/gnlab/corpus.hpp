#pragma once

#include <string>
#include <vector>

#include "gnlab/funcspace.hpp"

namespace gnlab {

struct CorpusEntry {
  std::string id;
  AnalyticFunction function;
};

/// The seven standard test functions, all supported in [0,1]:
/// bumpchi, sine bumps with frequencies 1, 3, 7, a spline bump, and two
/// nowhere-polynomial perturbations (eps = 1e-2) of functions that are
/// polynomial on open sets.
std::vector<CorpusEntry> standard_corpus();

/// Entry by id; parameter error when unknown.
AnalyticFunction corpus_function(const std::string& id);

}  // namespace gnlab
