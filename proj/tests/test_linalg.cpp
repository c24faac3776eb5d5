#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "sgaudit/linalg.hpp"

using namespace sgaudit;

namespace {

Mat diag2(Complex a, Complex b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("require_valid rejects malformed input") {
  CHECK_THROWS_AS(require_valid(Mat(Mat::Zero(2, 3))), InputError);
  CHECK_THROWS_AS(require_valid(Mat(0, 0)), InputError);
  CHECK_THROWS_AS(require_valid(Mat(Mat::Zero(513, 513))), InputError);
  Mat bad = Mat::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(require_valid(bad), InputError);
  CHECK_NOTHROW(require_valid(Mat(Mat::Identity(512, 512))));
}

TEST_CASE("opnorm on known matrices") {
  CHECK(opnorm(Mat::Identity(4, 4)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(opnorm(diag2(3.0, -4.0)) == doctest::Approx(4.0).epsilon(1e-14));
  // Jordan block: singular values are 1 and 0.
  Mat j = Mat::Zero(2, 2);
  j(0, 1) = 1.0;
  CHECK(opnorm(j) == doctest::Approx(1.0).epsilon(1e-14));
  // rank-one uv^*: norm = ||u|| ||v||
  Vec u(3), v(3);
  u << Complex(1, 1), Complex(0, 2), Complex(-1, 0);
  v << Complex(2, 0), Complex(0, -1), Complex(1, 1);
  Mat r = u * v.adjoint();
  CHECK(opnorm(r) == doctest::Approx(u.norm() * v.norm()).epsilon(1e-13));
  // unitary invariance on a larger matrix exercises the divide-and-conquer path
  Mat big = Mat::Zero(40, 40);
  for (int i = 0; i < 40; ++i) big(i, i) = Complex(0.1 * i, 0.05 * i);
  CHECK(opnorm(big) == doctest::Approx(std::abs(big(39, 39))).epsilon(1e-13));
}

TEST_CASE("expm closed forms") {
  // nilpotent: exp([[0,1],[0,0]]) = [[1,1],[0,1]] exactly
  Mat n = Mat::Zero(2, 2);
  n(0, 1) = 1.0;
  Mat en = expm(n);
  CHECK(std::abs(en(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(en(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(en(1, 0)) < 1e-15);
  CHECK(std::abs(en(1, 1) - 1.0) < 1e-15);

  // diagonal
  Mat d = diag2(-1.0, Complex(0.0, 1.0));
  Mat ed = expm(d);
  CHECK(std::abs(ed(0, 0) - std::exp(-1.0)) < 1e-15);
  CHECK(std::abs(ed(1, 1) - std::polar(1.0, 1.0)) < 1e-14);
  CHECK(std::abs(ed(0, 1)) < 1e-16);

  // rotation generator: exp(t[[0,-1],[1,0]]) = [[cos t, -sin t],[sin t, cos t]]
  Mat g = Mat::Zero(2, 2);
  g(0, 1) = -1.0;
  g(1, 0) = 1.0;
  const double t = 2.31;
  Mat rot = expm(t * g);
  CHECK(std::abs(rot(0, 0) - std::cos(t)) < 1e-14);
  CHECK(std::abs(rot(1, 0) - std::sin(t)) < 1e-14);

  // large norm exercises the scaling schedule: exp(-100)
  Mat big(1, 1);
  big(0, 0) = -100.0;
  CHECK(std::abs(expm(big)(0, 0)) ==
        doctest::Approx(3.7200759760208361e-44).epsilon(1e-12));

  // zero matrix
  Mat z = expm(Mat::Zero(3, 3));
  CHECK(max_abs(z - Mat::Identity(3, 3)) == 0.0);
}

TEST_CASE("expm of skew-Hermitian is unitary") {
  Mat h(3, 3);
  h << Complex(0, 1), Complex(2, 3), Complex(-1, 0.5),
       Complex(-2, 3), Complex(0, -2), Complex(0.5, 1),
       Complex(1, 0.5), Complex(-0.5, 1), Complex(0, 0.7);
  // force skew-Hermitian: (h - h^*)/2
  Mat s = 0.5 * (h - h.adjoint());
  Mat u = expm(s);
  CHECK(max_abs(u * u.adjoint() - Mat::Identity(3, 3)) < 1e-14);
}

TEST_CASE("powm agrees with repeated multiplication") {
  Mat m(2, 2);
  m << Complex(0.3, 0.1), Complex(0.2, -0.4), Complex(-0.1, 0.2), Complex(0.5, 0.0);
  Mat naive = Mat::Identity(2, 2);
  for (int i = 0; i < 13; ++i) naive = naive * m;
  CHECK(max_abs(powm(m, 13) - naive) < 1e-14);
  CHECK(max_abs(powm(m, 0) - Mat::Identity(2, 2)) == 0.0);
  CHECK(max_abs(powm(m, 1) - m) == 0.0);
  CHECK_THROWS_AS(powm(m, -1), InputError);
}

TEST_CASE("resolvent inverts and guards") {
  Mat a = diag2(1.0, 3.0);
  Mat r = resolvent(a, 1.0);  // (1 + A)^{-1} = diag(1/2, 1/4)
  CHECK(std::abs(r(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(r(1, 1) - 0.25) < 1e-15);

  // complex shift
  Mat rc = resolvent(a, Complex(0.0, 2.0));
  CHECK(std::abs(rc(0, 0) - 1.0 / Complex(1.0, 2.0)) < 1e-15);

  // exact pole: zeta = -1 on the d=1 operator [1]
  Mat one(1, 1);
  one(0, 0) = 1.0;
  CHECK_THROWS_AS(resolvent(one, -1.0), SingularityError);
  try {
    resolvent(one, -1.0);
  } catch (const SingularityError& e) {
    CHECK(e.condition_estimate > 1e12);
  }

  // near-singular rejection
  Mat near = diag2(1.0, 1e-14);
  CHECK_THROWS_AS(resolvent(near, 0.0), SingularityError);

  // residual quality on a well-conditioned dense system
  Mat b(3, 3);
  b << Complex(2, 1), Complex(0.3, -0.2), Complex(0.1, 0),
       Complex(-0.4, 0.5), Complex(3, -1), Complex(0.2, 0.2),
       Complex(0.0, 0.1), Complex(0.5, 0), Complex(1.5, 2);
  Mat rb = resolvent(b, 0.7);
  Mat shifted = b;
  shifted.diagonal().array() += Complex(0.7);
  CHECK(max_abs(shifted * rb - Mat::Identity(3, 3)) < 1e-10);
}

TEST_CASE("herm_eig_extremes") {
  Mat h = diag2(-2.0, 5.0);
  auto [lo, hi] = herm_eig_extremes(h);
  CHECK(lo == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(hi == doctest::Approx(5.0).epsilon(1e-14));

  Mat offdiag(2, 2);
  offdiag << 0.0, Complex(0, 1), Complex(0, -1), 0.0;  // eigenvalues +-1
  auto [lo2, hi2] = herm_eig_extremes(offdiag);
  CHECK(lo2 == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(hi2 == doctest::Approx(1.0).epsilon(1e-14));

  Mat nh = diag2(1.0, 2.0);
  nh(0, 1) = 1e-6;  // far beyond the Hermiticity tolerance
  CHECK_THROWS_AS(herm_eig_extremes(nh), InputError);
}
