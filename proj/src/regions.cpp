#include "sgaudit/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sgaudit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAlphaCap = kPi / 2 - 1e-6;
constexpr double kBisectTol = 1e-6;

// Distance to the circular sector {|arg w| <= alpha, |w| <= radius} with
// vertex at 0 and axis along +Re.  radius = +inf gives the plain sector.
double sector_patch_distance(Complex w, double alpha, double radius) {
  const double r = std::abs(w);
  if (r == 0.0) return 0.0;
  const double phi = std::abs(arg_principal(w));
  if (phi <= alpha) return std::max(0.0, r - radius);
  // Outside the wedge: project onto the nearer bounding ray segment.
  const double c = std::cos(phi - alpha);
  double t = std::clamp(r * c, 0.0, radius);
  double d2 = r * r + t * t - 2.0 * r * t * c;
  return std::sqrt(std::max(0.0, d2));
}

}  // namespace

SemiAngle::SemiAngle(double r) : radians(r) {
  if (!(r >= 0.0) || !(r < kPi / 2))
    throw InputError("semi-angle must lie in [0, pi/2)");
}

double arg_principal(Complex z) {
  if (z.real() == 0.0 && z.imag() == 0.0) return 0.0;
  return std::arg(z);
}

double membership_tol(Complex z) { return 1e-9 * (1.0 + std::abs(z)); }

double drop_region_distance(Complex z, SemiAngle alpha) {
  const double a = alpha.radians;
  const double disc = std::max(0.0, std::abs(z) - std::sin(a));
  const double cap = sector_patch_distance(1.0 - z, a, std::cos(a));
  return std::min(disc, cap);
}

bool in_drop_region(Complex z, SemiAngle alpha, double tol) {
  return drop_region_distance(z, alpha) <= tol;
}

double sector_distance(Complex z, SemiAngle alpha) {
  return sector_patch_distance(z, alpha.radians,
                               std::numeric_limits<double>::infinity());
}

bool in_sector(Complex z, SemiAngle alpha, double tol) {
  return sector_distance(z, alpha) <= tol;
}

NumericalRangeBoundary numerical_range_boundary(const Mat& m, int n_angles) {
  require_valid(m);
  if (n_angles < 64) throw InputError("numerical range sweep wants at least 64 angles");
  NumericalRangeBoundary out;
  out.angles.reserve(n_angles);
  out.points.reserve(n_angles);
  Eigen::SelfAdjointEigenSolver<Mat> es;
  for (int j = 0; j < n_angles; ++j) {
    const double theta = 2.0 * kPi * j / n_angles;
    const Complex rot = std::polar(1.0, theta);
    es.compute(herm_part(rot * m));
    if (es.info() != Eigen::Success)
      throw ComputationError("eigensolver failed during numerical range sweep");
    const Vec v = es.eigenvectors().col(m.rows() - 1);
    const Complex z = v.dot(m * v);  // Eigen's dot conjugates the left factor
    out.angles.push_back(theta);
    out.points.push_back(z);
  }
  return out;
}

namespace {

template <typename DistFn>
std::optional<double> min_semi_angle_impl(const std::vector<Complex>& pts, DistFn dist,
                                          bool cap_zone_is_failure) {
  auto all_in = [&](double a) {
    for (Complex z : pts)
      if (dist(z, a) > membership_tol(z)) return false;
    return true;
  };
  if (!all_in(kAlphaCap)) return std::nullopt;
  if (all_in(0.0)) return 0.0;
  double lo = 0.0, hi = kAlphaCap;
  while (hi - lo > kBisectTol) {
    const double mid = 0.5 * (lo + hi);
    if (all_in(mid))
      hi = mid;
    else
      lo = mid;
  }
  if (cap_zone_is_failure && hi > kDropCapZone) return std::nullopt;
  return hi;
}

}  // namespace

std::optional<double> min_drop_semi_angle(const Mat& m, int n_angles) {
  if (opnorm(m) > 1.0 + 1e-10)
    throw InputError("drop-region classification wants a contraction");
  const auto nr = numerical_range_boundary(m, n_angles);
  return min_semi_angle_impl(
      nr.points,
      [](Complex z, double a) { return drop_region_distance(z, SemiAngle(a)); },
      /*cap_zone_is_failure=*/true);
}

std::optional<double> min_sector_semi_angle(const Mat& m, int n_angles) {
  const auto nr = numerical_range_boundary(m, n_angles);
  return min_semi_angle_impl(
      nr.points, [](Complex z, double a) { return sector_distance(z, SemiAngle(a)); },
      /*cap_zone_is_failure=*/false);
}

SectorialCert classify_contraction(const Mat& m, int n_angles) {
  SectorialCert cert;
  const double nn = opnorm(m);
  cert.is_contraction = nn <= 1.0 + 1e-10;
  cert.contraction_slack = 1.0 - nn;
  cert.region_checked = Region::Drop;
  cert.n_angles = n_angles;
  if (cert.is_contraction) cert.semi_angle_min = min_drop_semi_angle(m, n_angles);
  return cert;
}

SectorialCert classify_generator(const Mat& m, int n_angles) {
  SectorialCert cert;
  const double nn = opnorm(m);
  cert.is_contraction = nn <= 1.0 + 1e-10;
  cert.contraction_slack = 1.0 - nn;
  cert.region_checked = Region::Sector;
  cert.n_angles = n_angles;
  cert.semi_angle_min = min_sector_semi_angle(m, n_angles);
  return cert;
}

std::string to_string(Region r) { return r == Region::Drop ? "drop" : "sector"; }

}  // namespace sgaudit
