#include "sgaudit/linalg.hpp"

#include <cmath>
#include <string>

namespace sgaudit {

void require_valid(const Mat& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols())
    throw InputError(std::string(what) + " must be square and non-empty");
  if (m.rows() > kMaxDim)
    throw InputError(std::string(what) + " dimension exceeds the supported maximum of " +
                     std::to_string(kMaxDim));
  if (!m.allFinite())
    throw InputError(std::string(what) + " has non-finite entries");
}

void require_valid(const Vec& v, const char* what) {
  if (v.size() < 1)
    throw InputError(std::string(what) + " must be non-empty");
  if (v.size() > kMaxDim)
    throw InputError(std::string(what) + " dimension exceeds the supported maximum of " +
                     std::to_string(kMaxDim));
  if (!v.allFinite())
    throw InputError(std::string(what) + " has non-finite entries");
}

double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double norm1(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().colwise().sum().maxCoeff();
}

Mat herm_part(const Mat& m) {
  return 0.5 * (m + m.adjoint());
}

double opnorm(const Mat& m) {
  require_valid(m);
  if (m.rows() == 1) return std::abs(m(0, 0));
  // Jacobi is more accurate on small problems; divide-and-conquer scales.
  if (m.rows() <= 16) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

Mat expm(const Mat& m) {
  require_valid(m);
  const auto d = m.rows();
  const double n1 = norm1(m);
  int s = 0;
  if (n1 > 0.5) s = static_cast<int>(std::ceil(std::log2(n1 / 0.5)));
  if (s > 62)
    throw ComputationError("matrix norm too large for the exponential scaling schedule");
  Mat x = m / std::exp2(s);
  Mat sum = Mat::Identity(d, d) + x;
  Mat term = x;
  for (int k = 2; k <= 64; ++k) {
    term = (term * x) / static_cast<double>(k);
    sum += term;
    if (norm1(term) <= 0x1p-53 * norm1(sum)) break;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

Mat powm(const Mat& m, long n) {
  require_valid(m);
  if (n < 0) throw InputError("matrix power wants a non-negative exponent");
  const auto d = m.rows();
  Mat result = Mat::Identity(d, d);
  Mat base = m;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

Mat resolvent(const Mat& a, Complex zeta) {
  require_valid(a);
  const auto d = a.rows();
  Mat b = a;
  b.diagonal().array() += zeta;
  Eigen::PartialPivLU<Mat> lu(b);
  const double rc = lu.rcond();
  if (!(rc > 1e-12)) {
    const double cond = rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    throw SingularityError("resolvent solve rejected: reciprocal condition estimate " +
                               std::to_string(rc),
                           cond);
  }
  Mat r = lu.solve(Mat::Identity(d, d));
  const double resid = norm1(b * r - Mat::Identity(d, d));
  if (resid > 1e-10 * (1.0 + norm1(b) * norm1(r)))
    throw ComputationError("resolvent residual check failed");
  return r;
}

std::pair<double, double> herm_eig_extremes(const Mat& h) {
  require_valid(h);
  if (max_abs(h - h.adjoint()) > 1e-12 * (1.0 + max_abs(h)))
    throw InputError("matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(h), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ComputationError("Hermitian eigensolver failed to converge");
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

}  // namespace sgaudit
