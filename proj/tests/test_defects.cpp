#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sgaudit/defects.hpp"

using namespace sgaudit;

namespace {

Mat diag_mat(std::initializer_list<Complex> entries) {
  Mat m = Mat::Zero((int)entries.size(), (int)entries.size());
  int i = 0;
  for (Complex e : entries) m(i, i) = e, ++i;
  return m;
}

}  // namespace

TEST_CASE("verdict boundary") {
  CHECK(verdict_for(1.0, 1.0) == Verdict::Holds);
  CHECK(verdict_for(0.0, 1.0) == Verdict::Holds);
  // just inside the relative slack
  double rhs = 2.0;
  CHECK(verdict_for(rhs + 0.5e-9 * (1 + rhs), rhs) == Verdict::Holds);
  CHECK(verdict_for(rhs + 3.0e-9 * (1 + rhs), rhs) == Verdict::Violated);
  CHECK(to_string(Verdict::Holds) == "holds");
  CHECK(to_string(Verdict::Violated) == "violated");
  CHECK(to_string(Verdict::OutOfRegime) == "out_of_regime");
}

TEST_CASE("bound id tokens") {
  for (BoundId id : {BoundId::SqrtN, BoundId::Split, BoundId::TwoTerm,
                     BoundId::QuasiSectorial})
    CHECK(bound_id_from_string(to_string(id)) == id);
  CHECK(to_string(BoundId::SqrtN) == "sqrt_n");
  CHECK(to_string(BoundId::Split) == "lemma2");
  CHECK(to_string(BoundId::TwoTerm) == "thm22");
  CHECK(to_string(BoundId::QuasiSectorial) == "quasi_sectorial");
  CHECK_THROWS_AS(bound_id_from_string("nope"), InputError);

  CHECK(bound_is_asserted(BoundId::SqrtN));
  CHECK(bound_is_asserted(BoundId::TwoTerm));
  CHECK(bound_is_asserted(BoundId::QuasiSectorial));
  CHECK_FALSE(bound_is_asserted(BoundId::Split));
}

TEST_CASE("defect of a diagonal contraction has the closed form") {
  Mat c = diag_mat({0.3, 0.9});
  const long n = 7;
  Mat d = chernoff_defect_matrix(c, n);
  auto expect = [&](double lam) {
    return std::pow(lam, (double)n) - std::exp((double)n * (lam - 1.0));
  };
  CHECK(std::abs(d(0, 0) - expect(0.3)) < 1e-12);
  CHECK(std::abs(d(1, 1) - expect(0.9)) < 1e-12);
  CHECK(std::abs(d(0, 1)) < 1e-15);
  CHECK(chernoff_defect_norm(c, n) ==
        doctest::Approx(std::max(std::abs(expect(0.3)), std::abs(expect(0.9))))
            .epsilon(1e-12));

  Vec e0 = Vec::Zero(2);
  e0(0) = 1.0;
  auto vd = chernoff_defect_vec(c, e0, n);
  CHECK(vd.lhs == doctest::Approx(std::abs(expect(0.3))).epsilon(1e-12));
  CHECK(vd.drive == doctest::Approx(0.7).epsilon(1e-14));

  CHECK_THROWS_AS(chernoff_defect_matrix(diag_mat({2.0}), 3), InputError);
  CHECK_THROWS_AS(chernoff_defect_matrix(c, 0), InputError);
  Vec wrong = Vec::Zero(3);
  CHECK_THROWS_AS(chernoff_defect_vec(c, wrong, 1), InputError);
}

TEST_CASE("scalar rotation probe against frozen references") {
  Mat c = diag_mat({std::polar(1.0, 1e-3)});
  Vec x = Vec::Ones(1);
  auto vd = chernoff_defect_vec(c, x, 1000000);
  CHECK(vd.lhs == doctest::Approx(0.3934693364248956).epsilon(1e-7));
  CHECK(vd.drive == doctest::Approx(0.00099999995833333385).epsilon(1e-13));
  CHECK(vd.lhs / vd.drive == doctest::Approx(393.46935281945176).epsilon(1e-7));
  // comfortably below sqrt(n) = 1000
  CHECK(vd.lhs <= bound_sqrt_n(1000000, vd.drive));
}

TEST_CASE("right-hand side formulas") {
  CHECK(bound_sqrt_n(4, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bound_split(16, 0.0, 1.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(bound_two_term(16, 0.0, 2.0, 1.0) == doctest::Approx(8.0).epsilon(1e-15));
  // at delta = 1/6 the generic form collapses to the cube-root form
  CHECK(bound_ritt(64, 1.0 / 6.0, 0.5) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(bound_ritt_cbrt(64, 0.5) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("regime guard") {
  CHECK(central_step_in_regime(4, 0.0));
  CHECK_FALSE(central_step_in_regime(4, 0.45));   // floor(4^0.95) = 3 > 2.5
  CHECK(central_step_in_regime(1000, 1.0 / 6.0));
  CHECK(central_step_in_regime(8, 1.0 / 6.0));
}

TEST_CASE("Ritt constant on a dense [0,1] spectrum") {
  const int d = 101;
  Mat c = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) c(k, k) = (double)k / (d - 1);
  auto est = ritt_constant(c, 32);
  // (n+1) max_k lambda^n (1 - lambda) peaks at n = 1, lambda = 1/2
  CHECK(est.k_hat == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(est.argmax_n == 1);
  CHECK(est.n_max == 32);
  CHECK_FALSE(est.max_at_end);

  CHECK_THROWS_AS(ritt_constant(c, 15), InputError);
}

TEST_CASE("vector audits over an n grid") {
  Mat c = diag_mat({0.8, Complex(0.1, 0.3), 0.5});
  Vec x(3);
  x << Complex(0.5, 0.2), Complex(-0.3, 0.4), Complex(0.1, -0.6);
  x.normalize();
  std::vector<long> grid{1, 2, 4, 8, 16};

  auto sq = audit_vector_bound(c, x, grid, 0.0, BoundId::SqrtN);
  REQUIRE(sq.audits.size() == grid.size());
  CHECK(sq.violations == 0);
  CHECK(sq.out_of_regime == 0);
  CHECK(sq.min_margin >= 0.0);
  for (const auto& a : sq.audits) {
    CHECK(a.verdict == Verdict::Holds);
    CHECK(a.margin == doctest::Approx(a.rhs - a.lhs));
    CHECK(a.context.bound == BoundId::SqrtN);
  }

  auto tt = audit_vector_bound(c, x, grid, 1.0 / 6.0, BoundId::TwoTerm);
  CHECK(tt.violations == 0);

  // high delta at tiny n falls out of the admissible regime
  std::vector<long> tiny{4};
  auto oor = audit_vector_bound(c, x, tiny, 0.45, BoundId::Split);
  CHECK(oor.out_of_regime == 1);
  CHECK(oor.violations == 0);
  CHECK(oor.audits[0].verdict == Verdict::OutOfRegime);

  CHECK_THROWS_AS(audit_vector_bound(c, x, grid, 0.0, BoundId::QuasiSectorial),
                  InputError);
  std::vector<long> dup{4, 4};
  CHECK_THROWS_AS(audit_vector_bound(c, x, dup, 0.0, BoundId::SqrtN), InputError);
  std::vector<long> unsorted{8, 4};
  CHECK_THROWS_AS(audit_vector_bound(c, x, unsorted, 0.0, BoundId::SqrtN), InputError);
  std::vector<long> zero{0};
  CHECK_THROWS_AS(audit_vector_bound(c, x, zero, 0.0, BoundId::SqrtN), InputError);
}

TEST_CASE("norm audit with a honest Ritt constant holds") {
  Mat c = diag_mat({0.9, 0.5, 0.2, 0.05});
  auto est = ritt_constant(c, 256);
  std::vector<long> grid{8, 16, 32, 64, 128, 256, 512, 1024};
  auto sweep = audit_norm_bound(c, grid, 1.0 / 6.0, est);
  REQUIRE(sweep.audits.size() == grid.size());
  CHECK(sweep.violations == 0);
  CHECK(sweep.out_of_regime == 0);
  for (const auto& a : sweep.audits) CHECK(a.context.bound == BoundId::QuasiSectorial);
}
