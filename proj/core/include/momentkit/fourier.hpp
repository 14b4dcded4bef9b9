#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "momentkit/moment_sequence.hpp"

namespace momentkit {

enum class Damping { kNone, kFejer };

std::string_view damping_name(Damping d) noexcept;
Damping parse_damping(std::string_view name);

struct ReconstructionOptions {
  double R = 3.0;      // frequency cutoff per coordinate
  double tol = 1e-8;   // series stopping tolerance, relative to max(|partial|, |s_0|)
  Damping damping = Damping::kNone;
  double imag_threshold = 1e-8;
  std::size_t node_budget = 4'000'000;  // total tensor nodes
  unsigned threads = 0;
};

struct ReconstructionDiagnostics {
  double max_imag_residue = 0.0;
  double max_cancellation = 1.0;
  double tail_proxy = 0.0;  // largest |last shell| over the nodes
  int precision_bits = 53;
  std::size_t nodes = 0;
  bool reliable = true;
};

struct ReconstructionResult {
  std::vector<std::vector<double>> grid;
  std::vector<double> values;
  std::vector<double> imag_residue;
  double R = 0.0;
  int degree_used = 0;
  int quadrature_points_per_unit = 0;
  Damping damping = Damping::kNone;
  ReconstructionDiagnostics diagnostics;
  bool clean = true;
};

// g(x) ~ (2pi)^-n int_{[-R,R]^n} e^{-i<x,z>} f_D(z) w(z) dz on a shared tensor
// Gauss-Legendre node set, w = 1 or prod_j (1 - |z_j|/R).
ReconstructionResult reconstruct_density(const MomentSequence& s, const std::vector<std::vector<double>>& grid,
                                         const ReconstructionOptions& opts = {});

// Regular 1-d grid lo, lo + step, ..., up to hi (inclusive within step/2).
std::vector<std::vector<double>> linear_grid(double lo, double hi, double step);

struct NonnegativityVerdict {
  bool nonnegative = true;
  double min_value = 0.0;
  std::vector<double> argmin;
  std::size_t index = 0;
};

NonnegativityVerdict nonnegativity_check(const ReconstructionResult& r, double tol);

struct MassResult {
  double value = 0.0;
  double imag_residue = 0.0;
  std::size_t nodes = 0;
  int degree_used = 0;
  int precision_bits = 53;
  double frequency = 0.0;  // oscillation frequency the panels resolve
};

struct LevyOptions {
  double tol = 1e-8;
  unsigned threads = 0;
};

// mu({a})/2 + mu((a,b)) + mu({b})/2 by Levy inversion truncated at |t| <= T.
MassResult levy_interval_mass(const MomentSequence& s, double a, double b, double T, const LevyOptions& opts = {});

struct TestMassOptions {
  double tol = 1e-8;
  std::size_t node_budget = 4'000'000;
  unsigned threads = 0;
};

// mu(phi) for phi the N(x0, sigma^2 I) density, integrating
// e^{-i<x0,z> - sigma^2 |z|^2 / 2} f(z) over [-R,R]^n.
MassResult gaussian_test_mass(const MomentSequence& s, const std::vector<double>& x0, double sigma, double R,
                              const TestMassOptions& opts = {});

}  // namespace momentkit
