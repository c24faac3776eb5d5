#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgaudit/linalg.hpp"

namespace sgaudit {

// Half-angle in [0, pi/2).
struct SemiAngle {
  explicit SemiAngle(double r);
  double radians;
};

// Principal argument in (-pi, pi], with arg(0) = 0.
double arg_principal(Complex z);

// Default membership tolerance at a point.
double membership_tol(Complex z);

// Drop region: convex hull of the disc of radius sin(alpha) about 0 and the
// point 1.  Equivalently |z| <= sin(alpha), or |arg(1 - z)| <= alpha together
// with |z - 1| <= cos(alpha); z = 1 belongs by convention.  Closed set.
double drop_region_distance(Complex z, SemiAngle alpha);
bool in_drop_region(Complex z, SemiAngle alpha, double tol);

// Sector |arg z| <= alpha (closed, contains 0).
double sector_distance(Complex z, SemiAngle alpha);
bool in_sector(Complex z, SemiAngle alpha, double tol);

struct NumericalRangeBoundary {
  std::vector<double> angles;    // sweep angles theta_j = 2*pi*j/K
  std::vector<Complex> points;   // v_j^* M v_j at the top eigenvector of Re(e^{i theta_j} M)
};

// Boundary samples of the numerical range by the supporting-direction sweep.
// n_angles >= 64.
NumericalRangeBoundary numerical_range_boundary(const Mat& m, int n_angles = 512);

// Least alpha with every boundary sample inside the drop region at the
// membership tolerance, by bisection to 1e-6.  Input must be a contraction
// (opnorm <= 1 + 1e-10).  nullopt: not quasi-sectorial at this resolution.
// Angles above kDropCapZone certify nothing (the membership tolerance can no
// longer separate the drop region from the unit disc there) and also report
// nullopt.
std::optional<double> min_drop_semi_angle(const Mat& m, int n_angles = 512);

// Same bisection against the sector; for (generator) matrices with numerical
// range in the closed right half-plane.  nullopt: not sectorial.
std::optional<double> min_sector_semi_angle(const Mat& m, int n_angles = 512);

inline constexpr double kDropCapZone = 1.5706963267948966;  // pi/2 - 1e-4

enum class Region { Drop, Sector };

struct SectorialCert {
  bool is_contraction = false;
  double contraction_slack = 0.0;  // 1 - opnorm
  std::optional<double> semi_angle_min;
  Region region_checked = Region::Drop;
  int n_angles = 0;
};

// Certificate for a candidate contraction (drop region test).
SectorialCert classify_contraction(const Mat& m, int n_angles = 512);
// Certificate for a candidate generator (sector test).
SectorialCert classify_generator(const Mat& m, int n_angles = 512);

std::string to_string(Region r);

}  // namespace sgaudit
