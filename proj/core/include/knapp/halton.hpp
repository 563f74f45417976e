#pragma once

#include <cstdint>

#include "knapp/linalg.hpp"

namespace knapp {

// Radical-inverse (van der Corput) value of `index` in the given base.
inline double radical_inverse(std::uint64_t index, std::uint32_t base) {
  double result = 0.0;
  double digit_weight = 1.0 / base;
  while (index != 0) {
    result += static_cast<double>(index % base) * digit_weight;
    index /= base;
    digit_weight /= base;
  }
  return result;
}

inline constexpr std::uint32_t kHaltonBases[8] = {2, 3, 5, 7, 11, 13, 17, 19};

// dim-dimensional Halton point in [0,1)^dim; index starts at 1.
inline VecN halton_point(std::uint64_t index, int dim) {
  VecN p(dim);
  for (int j = 0; j < dim; ++j) p[j] = radical_inverse(index, kHaltonBases[j]);
  return p;
}

}  // namespace knapp
