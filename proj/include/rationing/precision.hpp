#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rationing/poisson.hpp"

namespace rationing {

using Wide = boost::multiprecision::cpp_bin_float_100;

// Closed-form realization factors with eta and every product carried at 100 digits.
inline RealizationFactors realization_factors_closed_form_wide(const SystemParams& p, const Policy& d) {
  const Wide eta = average_profit<Wide>(p, d);
  const auto wide = realization_factors_closed_form<Wide>(p, d, eta);
  RealizationFactors out{{}, offset_b(p)};
  for (const Wide& x : wide.g_diff) out.g_diff.push_back(static_cast<double>(x));
  return out;
}

}  // namespace rationing
