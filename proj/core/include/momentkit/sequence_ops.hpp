#pragma once

#include <span>
#include <vector>

#include "momentkit/moment_sequence.hpp"

namespace momentkit {

// Distributional derivative: (d^beta s)_alpha = (-1)^|beta| alpha!/(alpha-beta)! s_{alpha-beta},
// zero unless beta <= alpha. Keeps the max degree.
MomentSequence derivative_seq(const MomentSequence& s, const MultiIndex& beta);

// Moments of the pushforward under x -> a + b*x (coordinatewise).
MomentSequence affine_pushforward(const MomentSequence& s, std::span<const Rational> a, std::span<const Rational> b);
// Exact sequences stay exact (a and b are converted exactly).
MomentSequence affine_pushforward(const MomentSequence& s, std::span<const double> a, std::span<const double> b);

// Flips the sign of coordinates with sigma_j = -1.
MomentSequence mirror_seq(const MomentSequence& s, std::span<const int> sigma);

}  // namespace momentkit
