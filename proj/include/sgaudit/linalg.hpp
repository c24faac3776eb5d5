#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "sgaudit/errors.hpp"

namespace sgaudit {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr int kMaxDim = 512;

// Throws InputError unless m is square, 1 <= dim <= kMaxDim, all entries finite.
void require_valid(const Mat& m, const char* what = "matrix");
void require_valid(const Vec& v, const char* what = "vector");

// Operator norm (largest singular value), via a full SVD.
double opnorm(const Mat& m);

// Matrix exponential by scaling and squaring with a truncated Taylor series;
// the scaled 1-norm is brought at or below 1/2 first.
Mat expm(const Mat& m);

// Integer matrix power, n >= 0, by binary exponentiation.
Mat powm(const Mat& m, long n);

// (zeta*I + A)^{-1} by partial-pivot LU.  Throws SingularityError when the
// reciprocal condition estimate drops below 1e-12, ComputationError when the
// normalized residual ||(zeta*I + A)R - I|| / (1 + ||zeta*I + A||*||R||)
// exceeds 1e-10 (1-norms).
Mat resolvent(const Mat& a, Complex zeta);

// (min, max) eigenvalue of a Hermitian matrix.  The input must be Hermitian
// within 1e-12 relative to its largest entry; it is symmetrized internally.
std::pair<double, double> herm_eig_extremes(const Mat& h);

// Hermitian part (m + m^*)/2.
Mat herm_part(const Mat& m);

// Largest absolute entry.
double max_abs(const Mat& m);

// 1-norm (maximum absolute column sum).
double norm1(const Mat& m);

}  // namespace sgaudit
