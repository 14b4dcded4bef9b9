#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "momentkit/density.hpp"
#include "momentkit/moment_sequence.hpp"
#include "momentkit/richter.hpp"

namespace momentkit {

// Sequence format:
//   { "dimension": n, "max_degree": D, "exact": bool,
//     "entries":   [ { "alpha": [..], "re": r, "im": i } ],       (im optional)
//     "rationals": [ { "alpha": [..], "num": p, "den": q } ] }     (exact only)
// num/den are JSON integers or decimal strings for values beyond int64.
// Parse errors raise ParseError naming the offending field, e.g.
// "$.rationals[3].den: must be nonzero".
std::string sequence_to_json(const MomentSequence& s, int indent = 2);
MomentSequence sequence_from_json(std::string_view text);

// Density format: { "kind": "indicator" | "piecewise" | "gaussian" |
// "closed-form" | "mixture", ... }; see README for the fields of each kind.
// Rational fields accept integers, decimals (read exactly) or "p/q" strings.
DensitySpec density_from_json(std::string_view text);

// Command-line shorthand: "indicator:a,b", "gaussian:mean,variance[,half-width]",
// "polynomial:c0,c1,...@a,b", "bump", "semicircle".
DensitySpec density_from_shorthand(std::string_view text);

// Functional format:
//   { "domain": { "lower": [..], "upper": [..] },
//     "basis": [ { "polynomial": [c0, c1, ..] } | { "polynomial": { "terms": [..] } }
//                | { "builtin": "discontinuous_f2" }, optional "overrides": [ { "at": [..], "value": v } ] ],
//     "values": [..] }
TruncatedFunctional functional_from_json(std::string_view text);

// { "atoms": [ { "x": [..], "weight": w } ], "residual": r }
std::string atomic_to_json(const AtomicRepresentation& r, int indent = 2);
AtomicRepresentation atomic_from_json(std::string_view text);

// { "points": [ [..], .. ] } or a bare array of points.
std::vector<std::vector<double>> points_from_json(std::string_view text);

}  // namespace momentkit
