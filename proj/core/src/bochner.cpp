#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <string>

#include "momentkit/charfn.hpp"
#include "momentkit/error.hpp"
#include "momentkit/parallel.hpp"

namespace momentkit {

double hermitian_min_eigenvalue(std::size_t d, const std::vector<double>& re, const std::vector<double>& im) {
  if (d == 0) return 0.0;
  const auto m = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd big(2 * m, 2 * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const double a = re[static_cast<std::size_t>(j * m + k)];
      const double b = im[static_cast<std::size_t>(j * m + k)];
      big(j, k) = a;
      big(j + m, k + m) = a;
      big(j, k + m) = -b;
      big(j + m, k) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(big, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

BochnerReport bochner_test(const MomentSequence& s, const std::vector<std::vector<double>>& points,
                           const BochnerOptions& opts) {
  const std::size_t n = s.dimension();
  for (const auto& p : points) {
    if (p.size() != n) raise(ErrorCode::kDimensionMismatch, "point has wrong dimension");
  }
  BochnerReport rep;
  rep.points = points;
  rep.s0 = s.value_at(0).real();
  MomentSequence seq = s;
  const bool normalized = std::abs(s.value_at(0) - 1.0) <= 1e-12;
  if (!normalized) {
    if (!opts.rescale || s.value_at(0) == 0.0 || s.value_at(0).imag() != 0.0) {
      raise(ErrorCode::kNotNormalized, "s_0 = " + format_number(rep.s0) + " (expected 1)");
    }
    seq = s.is_exact() ? s.scale(Rational(1) / s.exact_at(0)) : s.scale(1.0 / rep.s0);
    rep.rescaled = true;
  }
  const std::size_t d = points.size();
  rep.threshold = -opts.tol * static_cast<double>(d);
  if (d == 0) return rep;

  std::vector<double> zmax(n, 0.0);
  for (const auto& a : points) {
    for (const auto& b : points) {
      for (std::size_t j = 0; j < n; ++j) zmax[j] = std::max(zmax[j], std::abs(a[j] - b[j]));
    }
  }
  const CharSeries series(seq);
  SeriesOptions so;
  so.tol = opts.series_tol;
  so.adaptive = true;
  const SeriesEvaluator ev(series, zmax, so);
  rep.precision_bits = ev.precision_bits();

  std::vector<SeriesValue> vals(d * d);
  parallel_for(
      d * d,
      [&](std::size_t idx) {
        const std::size_t j = idx / d, k = idx % d;
        std::vector<double> z(n);
        for (std::size_t c = 0; c < n; ++c) z[c] = points[j][c] - points[k][c];
        vals[idx] = ev.evaluate(z);
        if (!vals[idx].diag.converged) {
          raise(ErrorCode::kNotConverged, "series for f(z_" + std::to_string(j) + " - z_" + std::to_string(k) +
                                              ") did not converge by degree " + std::to_string(seq.max_degree()));
        }
      },
      opts.threads);

  std::vector<double> fre(d * d), fim(d * d), ere(d * d), eim(d * d), dre(d * d), dim(d * d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      const SeriesValue& a = vals[j * d + k];
      const SeriesValue& b = vals[k * d + j];
      rep.max_degree_used = std::max(rep.max_degree_used, a.diag.degree_used);
      rep.hermitian_defect = std::max(rep.hermitian_defect, std::abs(a.total() - std::conj(b.total())));
      rep.hermitian_defect = std::max(rep.hermitian_defect, std::abs(a.even - std::conj(b.even)));
      rep.hermitian_defect = std::max(rep.hermitian_defect, std::abs(a.odd - std::conj(b.odd)));
      // symmetrize: (M + M^H) / 2
      const std::complex<double> f = 0.5 * (a.total() + std::conj(b.total()));
      const std::complex<double> e = 0.5 * (a.even + std::conj(b.even));
      const std::complex<double> o = 0.5 * (a.odd + std::conj(b.odd));
      fre[j * d + k] = f.real();
      fim[j * d + k] = f.imag();
      ere[j * d + k] = e.real();
      eim[j * d + k] = e.imag();
      dre[j * d + k] = (e - o).real();
      dim[j * d + k] = (e - o).imag();
    }
  }
  rep.min_eigenvalue_full = hermitian_min_eigenvalue(d, fre, fim);
  rep.min_eigenvalue_even = hermitian_min_eigenvalue(d, ere, eim);
  rep.min_eigenvalue_diff = hermitian_min_eigenvalue(d, dre, dim);
  rep.psd_full = rep.min_eigenvalue_full >= rep.threshold;
  rep.psd_even = rep.min_eigenvalue_even >= rep.threshold;
  rep.psd_diff = rep.min_eigenvalue_diff >= rep.threshold;
  return rep;
}

std::vector<std::vector<double>> random_points(std::size_t count, std::size_t n, double lo, double hi,
                                               std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::vector<double>> pts(count, std::vector<double>(n));
  // Explicit affine map of 53 random bits so output does not depend on the
  // standard library's distribution implementation.
  for (auto& p : pts) {
    for (auto& v : p) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      v = lo + (hi - lo) * u;
    }
  }
  return pts;
}

}  // namespace momentkit
