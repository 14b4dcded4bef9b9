#include <cmath>
#include <string>

#include "momentkit/charfn.hpp"
#include "momentkit/error.hpp"

namespace momentkit {

std::string_view trend_name(Trend t) noexcept { return t == Trend::kConverging ? "converging" : "diverging"; }

RadiusEstimate radius_estimate(const MomentSequence& s, int k_min, int k_max) {
  const int D = s.max_degree();
  if (k_max == 0) k_max = D / 2;
  if (k_min < 1 || k_max < k_min) raise(ErrorCode::kInvalidArgument, "need 1 <= k_min <= k_max");
  if (2 * k_max > D) {
    raise(ErrorCode::kDegreeExceeded, "k = " + std::to_string(k_max) + " needs degree " + std::to_string(2 * k_max));
  }
  s.require_real("radius_estimate");
  const std::size_t n = s.dimension();

  RadiusEstimate est;
  for (int k = k_min; k <= k_max; ++k) est.ks.push_back(k);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> vals;
    for (int k : est.ks) {
      MultiIndex idx(n);
      idx[j] = 2 * k;
      double log_v;
      bool negative;
      if (s.is_exact()) {
        const Rational& q = s.exact_value(idx);
        negative = q < 0;
        log_v = log_abs(q);
      } else {
        const double v = s.value(idx).real();
        negative = v < 0.0;
        log_v = v == 0.0 ? -INFINITY : std::log(std::abs(v));
      }
      if (negative) {
        raise(ErrorCode::kNegativeEvenMoment, "s_" + idx.to_string() + " < 0: not a moment sequence");
      }
      vals.push_back(log_v == -INFINITY ? 0.0 : std::exp(log_v / (2.0 * k)));
    }
    double mx = 0.0;
    for (double v : vals) mx = std::max(mx, v);

    // log-log slope over the last half of ks
    std::vector<double> lx, ly;
    for (std::size_t i = vals.size() / 2; i < vals.size(); ++i) {
      if (vals[i] > 0.0) {
        lx.push_back(std::log(static_cast<double>(est.ks[i])));
        ly.push_back(std::log(vals[i]));
      }
    }
    double slope = 0.0;
    if (lx.size() >= 2) {
      const double m = static_cast<double>(lx.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
      }
      const double den = m * sxx - sx * sx;
      if (den != 0.0) slope = (m * sxy - sx * sy) / den;
    }
    est.values.push_back(vals);
    est.max_value.push_back(mx);
    est.tail_slope.push_back(slope);
    est.trend.push_back(slope >= 0.25 ? Trend::kDiverging : Trend::kConverging);
    est.c_hat = std::max(est.c_hat, vals.back());
  }
  est.note = "c_hat is the last computed root (s_{2k e_j})^(1/2k); limits are extrapolations from finite data";
  return est;
}

}  // namespace momentkit
