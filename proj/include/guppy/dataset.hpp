#ifndef GUPPY_DATASET_HPP
#define GUPPY_DATASET_HPP

#include "guppy/types.hpp"

namespace guppy {

// Column-sum slack for the bundled dataset: the published conjunction
// column sums to 1.001 after 3-decimal rounding.
inline constexpr double bundled_column_tolerance = 2e-3;

// The bundled 16-exemplar Furniture / Household Appliances study data:
// good-example probabilities for both concepts and their conjunction,
// exactly as published (3 decimals).
ProbabilityTable load_bundled_dataset();

} // namespace guppy

#endif
