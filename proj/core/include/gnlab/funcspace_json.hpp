#pragma once

#include <nlohmann/json.hpp>

#include "gnlab/exact.hpp"
#include "gnlab/funcspace.hpp"

namespace gnlab {

/// {"family": name, "params": {...}, "support": [lo, hi]}.
/// Families: bumpchi, scaled_bump{a,b}, polynomial{coeffs}, sine_bump{frequency},
/// spline_bump{coeffs,knots}, plateau{a,b,ramp}, sum{terms:[{weight,function}]},
/// product{factors}, dilation{base,scale,shift}. "support" is read only for
/// polynomial; it is always written.
nlohmann::json to_json(const AnalyticFunction& f);
AnalyticFunction function_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Interval& i);
Interval interval_from_json(const nlohmann::json& j);

/// Infinity is the string "inf"; exact rationals that are not integers are
/// written as "a/b" strings, everything else as numbers.
nlohmann::json to_json(const Exponent& e);
Exponent exponent_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scalar& s);
Scalar scalar_from_json(const nlohmann::json& j);

}  // namespace gnlab
