#pragma once

#include "core/linalg.hpp"

namespace mpk {

/// Matrix exponential by scaling-and-squaring with a (13,13) Pade
/// approximant, degree chosen from the 1-norm thresholds.
Matrix expm(const Matrix& a);

}  // namespace mpk
