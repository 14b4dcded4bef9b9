#pragma once

#include <cstddef>
#include <vector>

#include "momentkit/moment_sequence.hpp"

namespace momentkit {

// Moments of the point mass at c: s_alpha = c^alpha (exact).
MomentSequence dirac_sequence(const std::vector<Rational>& c, int max_degree);

// Characteristic function exp(-|z|^2): s_{2k} = (2k)!/k! per coordinate, odd entries 0.
MomentSequence gaussian_cf_sequence(std::size_t n, int max_degree);

// Characteristic function exp(-sum z_j^4): s_{4k} = (-1)^k (4k)!/k! per coordinate, else 0.
MomentSequence quartic_cf_sequence(std::size_t n, int max_degree);

// (1, 0, 1, 0, ...): characteristic function cos z, measure (delta_{-1} + delta_1)/2.
MomentSequence cosine_sequence(int max_degree);

}  // namespace momentkit
