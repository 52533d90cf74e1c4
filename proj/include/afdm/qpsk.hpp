// qpsk.hpp - Gray-mapped unit-energy QPSK

#pragma once

#include "afdm/types.hpp"

#include <vector>

namespace afdm {

/// Bit pair (b1, b2) -> ((1-2*b1) + j*(1-2*b2)) / sqrt(2).
ComplexVec map_qpsk(const std::vector<int>& bits);

/// Hard decisions: b1 = (Re < 0), b2 = (Im < 0); exact zeros decide 0.
std::vector<int> demap_qpsk_hard(const ComplexVec& x_hat);

}  // namespace afdm
