#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sgaudit/approximants.hpp"
#include "sgaudit/defects.hpp"
#include "sgaudit/families.hpp"

namespace sgaudit {

struct RatePoint {
  double n = 0.0;
  double value = 0.0;
};

struct PowerFit {
  double exponent = 0.0;   // p in value ~ c * n^{-p}
  double prefactor = 0.0;  // c
  double residual = 0.0;   // rms residual in log space
};

// Least squares on (log n, log value).  Points with value <= kFitFloor are
// dropped as noise; fewer than 3 usable points raise FitError.
inline constexpr double kFitFloor = 1e-14;
PowerFit fit_power(std::span<const RatePoint> pts);

struct RateReport {
  std::vector<RatePoint> points;
  bool fit_defined = false;
  PowerFit fit;
  double n_min_used = 0.0;
  double n_max_used = 0.0;
};

// Evaluates defect_at over the grid (strictly increasing, entries >= 1) and
// fits; fit_defined stays false when too few points are usable.
RateReport sweep(const std::function<double(double)>& defect_at,
                 std::span<const double> grid);

std::vector<double> dyadic_grid(double lo, double hi);
std::vector<long> dyadic_grid_long(long lo, long hi);

// Convenience sweeps.
RateReport sweep_chernoff(const Mat& c, std::span<const double> grid);
// Per-grid-point maximum of the defect over the corpus.
RateReport sweep_chernoff_envelope(std::span<const GeneratedOperator> ops,
                                   std::span<const double> grid);
RateReport sweep_trotter(const Mat& a, const Mat& b, double t,
                         std::span<const double> grid,
                         TrotterOrder order = TrotterOrder::AB);
RateReport sweep_euler(const Mat& a, double t, std::span<const double> grid);
RateReport sweep_euler_envelope(std::span<const GeneratedOperator> ops, double t,
                                std::span<const double> grid);
// Points at n = 1/s for each step s; the defect is the direct-route value.
RateReport sweep_resolvent(const Mat& a, Complex zeta, std::span<const double> s_grid);

}  // namespace sgaudit
