#include "sgaudit/rates.hpp"

#include <algorithm>
#include <cmath>

namespace sgaudit {

namespace {

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw InputError("sweep wants a non-empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 1.0) || !std::isfinite(grid[i]))
      throw InputError("sweep grid entries must be finite and >= 1");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw InputError("sweep grid must be strictly increasing");
  }
}

long as_count(double n) { return static_cast<long>(std::llround(n)); }

}  // namespace

PowerFit fit_power(std::span<const RatePoint> pts) {
  std::vector<RatePoint> usable;
  for (const auto& p : pts)
    if (std::isfinite(p.value) && p.value > kFitFloor && p.n >= 1.0)
      usable.push_back(p);
  if (usable.size() < 3)
    throw FitError("power fit wants at least 3 points above the noise floor");
  // Least squares for log v = log c - p log n.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(usable.size());
  for (const auto& p : usable) {
    const double x = std::log(p.n);
    const double y = std::log(p.value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = m * sxx - sx * sx;
  if (!(std::abs(det) > 0.0))
    throw FitError("power fit is degenerate (all n equal)");
  const double slope = (m * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / m;
  PowerFit fit;
  fit.exponent = -slope;
  fit.prefactor = std::exp(intercept);
  double rss = 0;
  for (const auto& p : usable) {
    const double r = std::log(p.value) - (intercept + slope * std::log(p.n));
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / m);
  return fit;
}

RateReport sweep(const std::function<double(double)>& defect_at,
                 std::span<const double> grid) {
  require_grid(grid);
  RateReport report;
  report.points.reserve(grid.size());
  for (double n : grid) report.points.push_back({n, defect_at(n)});
  std::vector<RatePoint> usable;
  for (const auto& p : report.points)
    if (std::isfinite(p.value) && p.value > kFitFloor) usable.push_back(p);
  if (usable.size() >= 3) {
    report.fit = fit_power(usable);
    report.fit_defined = true;
    report.n_min_used = usable.front().n;
    report.n_max_used = usable.back().n;
  }
  return report;
}

std::vector<double> dyadic_grid(double lo, double hi) {
  if (!(lo >= 1.0) || !(hi >= lo)) throw InputError("dyadic grid wants 1 <= lo <= hi");
  std::vector<double> out;
  for (double n = lo; n <= hi; n *= 2.0) out.push_back(n);
  return out;
}

std::vector<long> dyadic_grid_long(long lo, long hi) {
  if (lo < 1 || hi < lo) throw InputError("dyadic grid wants 1 <= lo <= hi");
  std::vector<long> out;
  for (long n = lo; n <= hi; n *= 2) out.push_back(n);
  return out;
}

RateReport sweep_chernoff(const Mat& c, std::span<const double> grid) {
  return sweep([&](double n) { return chernoff_defect_norm(c, as_count(n)); }, grid);
}

RateReport sweep_chernoff_envelope(std::span<const GeneratedOperator> ops,
                                   std::span<const double> grid) {
  if (ops.empty()) throw InputError("envelope sweep wants at least one operator");
  return sweep(
      [&](double n) {
        double worst = 0.0;
        for (const auto& g : ops)
          worst = std::max(worst, chernoff_defect_norm(g.op, as_count(n)));
        return worst;
      },
      grid);
}

RateReport sweep_trotter(const Mat& a, const Mat& b, double t,
                         std::span<const double> grid, TrotterOrder order) {
  const Mat target = exact_semigroup(a + b, t);
  return sweep(
      [&](double n) { return opnorm(trotter_approx(a, b, t, as_count(n), order) - target); },
      grid);
}

RateReport sweep_euler(const Mat& a, double t, std::span<const double> grid) {
  const Mat target = exact_semigroup(a, t);
  return sweep(
      [&](double n) { return opnorm(euler_approx(a, t, as_count(n)) - target); }, grid);
}

RateReport sweep_euler_envelope(std::span<const GeneratedOperator> ops, double t,
                                std::span<const double> grid) {
  if (ops.empty()) throw InputError("envelope sweep wants at least one operator");
  std::vector<Mat> targets;
  targets.reserve(ops.size());
  for (const auto& g : ops) targets.push_back(exact_semigroup(g.op, t));
  return sweep(
      [&](double n) {
        double worst = 0.0;
        for (std::size_t i = 0; i < ops.size(); ++i)
          worst = std::max(
              worst, opnorm(euler_approx(ops[i].op, t, as_count(n)) - targets[i]));
        return worst;
      },
      grid);
}

RateReport sweep_resolvent(const Mat& a, Complex zeta, std::span<const double> s_grid) {
  if (s_grid.empty()) throw InputError("sweep wants a non-empty grid");
  std::vector<double> inv;
  inv.reserve(s_grid.size());
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid[i];
    if (!(s > 0.0) || !(s <= 1.0)) throw InputError("resolvent steps must lie in (0, 1]");
    if (i > 0 && s >= s_grid[i - 1])
      throw InputError("resolvent step grid must be strictly decreasing");
    inv.push_back(std::round(1.0 / s));
  }
  return sweep(
      [&, s_grid, zeta](double n) {
        // recover the step from its position; n is round(1/s)
        for (std::size_t i = 0; i < inv.size(); ++i)
          if (inv[i] == n) return resolvent_defect(a, s_grid[i], zeta).direct;
        return resolvent_defect(a, 1.0 / n, zeta).direct;
      },
      inv);
}

}  // namespace sgaudit
