#include "sgaudit/approximants.hpp"

#include <cmath>
#include <utility>

namespace sgaudit {

namespace {

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw InputError("time argument must be finite and >= 0");
}

void require_count(long n) {
  if (n < 1) throw InputError("iteration count n must be >= 1");
}

}  // namespace

Mat ChernoffFamily::eval(double t) const {
  require_time(t);
  if (!map) throw InputError("family \"" + label + "\" has no map");
  Mat v = map(t);
  require_valid(v, "family value");
  if (v.rows() != dim)
    throw FamilyContractError("family \"" + label + "\" changed dimension at t = " +
                              std::to_string(t));
  const double nn = opnorm(v);
  if (nn > 1.0 + 1e-10)
    throw FamilyContractError("family \"" + label + "\" is not a contraction at t = " +
                              std::to_string(t) + " (norm " + std::to_string(nn) + ")");
  if (t == 0.0 && max_abs(v - Mat::Identity(dim, dim)) > 1e-12)
    throw FamilyContractError("family \"" + label + "\" does not start at the identity");
  return v;
}

ChernoffFamily exact_family(Mat a) {
  require_valid(a);
  const long d = a.rows();
  return {"exact", d, [a = std::move(a)](double t) { return expm(-t * a); }};
}

ChernoffFamily euler_family(Mat a) {
  require_valid(a);
  const long d = a.rows();
  return {"euler", d, [a = std::move(a)](double t) { return resolvent(t * a, 1.0); }};
}

ChernoffFamily trotter_family(Mat a, Mat b, TrotterOrder order) {
  require_valid(a);
  require_valid(b);
  if (a.rows() != b.rows()) throw InputError("Trotter factors must share a dimension");
  const long d = a.rows();
  return {"trotter", d,
          [a = std::move(a), b = std::move(b), order](double t) {
            Mat ea = expm(-t * a);
            Mat eb = expm(-t * b);
            return order == TrotterOrder::AB ? Mat(ea * eb) : Mat(eb * ea);
          }};
}

Mat chernoff_iterate(const ChernoffFamily& f, double t, long n) {
  require_time(t);
  require_count(n);
  return powm(f.eval(t / static_cast<double>(n)), n);
}

Mat generator_approx(const ChernoffFamily& f, double s, long n) {
  if (!(s > 0.0) || !std::isfinite(s)) throw InputError("step s must be finite and > 0");
  require_count(n);
  const double h = s / static_cast<double>(n);
  Mat v = f.eval(h);
  return (Mat::Identity(v.rows(), v.cols()) - v) / h;
}

Mat trotter_approx(const Mat& a, const Mat& b, double t, long n, TrotterOrder order) {
  require_valid(a);
  require_valid(b);
  if (a.rows() != b.rows()) throw InputError("Trotter factors must share a dimension");
  require_time(t);
  require_count(n);
  const double h = t / static_cast<double>(n);
  Mat ea = expm(-h * a);
  Mat eb = expm(-h * b);
  return powm(order == TrotterOrder::AB ? Mat(ea * eb) : Mat(eb * ea), n);
}

Mat euler_approx(const Mat& a, double t, long n) {
  require_valid(a);
  require_time(t);
  require_count(n);
  const double h = t / static_cast<double>(n);
  return powm(resolvent(h * a, 1.0), n);
}

Mat exact_semigroup(const Mat& a, double t) {
  require_valid(a);
  require_time(t);
  return expm(-t * a);
}

ResolventDefect resolvent_defect(const Mat& a, double s, Complex zeta) {
  require_valid(a);
  if (!(s > 0.0) || !std::isfinite(s)) throw InputError("step s must be finite and > 0");
  Mat phi = resolvent(s * a, 1.0);       // (1 + sA)^{-1}
  Mat xs = a * phi;                      // (1 - (1+sA)^{-1})/s in cancellation-free form
  Mat ra = resolvent(a, zeta);
  ResolventDefect out;
  out.direct = opnorm(resolvent(xs, zeta) - ra);
  Mat shifted = resolvent((1.0 + zeta * s) * a, zeta);   // (zeta + A + zeta s A)^{-1}
  out.product_form = s * opnorm(Mat(a * shifted) * Mat(a * ra));
  return out;
}

}  // namespace sgaudit
