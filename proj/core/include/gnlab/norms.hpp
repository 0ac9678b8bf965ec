#pragma once

#include <span>
#include <vector>

#include "gnlab/exact.hpp"
#include "gnlab/funcspace.hpp"

namespace gnlab {

struct NormSpec {
  Exponent p;
  int order = 0;
  Interval domain;
};

struct ProductSpec {
  std::vector<int> orders;  // ascending, non-empty
  Exponent q;
  Interval domain;
};

/// L^p norm over `domain` of samples living on the uniform grid `grid`.
/// Finite p uses composite Simpson on (|f|/max)^p; p = inf is the maximum of
/// the linear interpolant.
double lp_norm(std::span<const double> f, const Interval& grid, const Interval& domain, const Exponent& p);

/// ||D^j u||_{L^p(domain)}.
double lebesgue_norm(const GridFunction& g, const NormSpec& spec);

/// ||D^{k_1}u ... D^{k_kappa}u||_{L^q(domain)}.
double product_norm(const GridFunction& g, const ProductSpec& spec);

/// Pointwise product of the requested derivative rows.
std::vector<double> derivative_product(const GridFunction& g, std::span<const int> orders);

/// Gagliardo seminorm of D^order u,
///   ( integral over R x R of |f(x)-f(y)|^p / |x-y|^{1+sp} )^{1/p},
/// for f supported in the grid interval. Node-centred cells on the padded
/// domain [lo-h/2, hi+h/2], diagonal cells skipped, and the exterior part
/// (one point outside the padded domain, where f = 0) added in closed form.
double gagliardo_seminorm(const GridFunction& g, double s, double p, int order = 0);

}  // namespace gnlab
