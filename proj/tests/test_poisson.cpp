#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "sgaudit/poisson.hpp"

using namespace sgaudit;

namespace {

// reference pmf values computed with 40-digit arithmetic
struct PmfCase {
  long m;
  long n;
  double value;
};
constexpr PmfCase kPmfCases[] = {
    {0, 1, 0.36787944117144232},
    {1, 1, 0.36787944117144232},
    {3, 1, 0.061313240195240387},
    {100, 100, 0.039860996809147135},
    {121, 100, 0.0045959213938123976},
    {79, 100, 0.0041582833007841443},
    {950, 1000, 0.0036296190663045958},
    {10000, 10000, 0.0039893895589628256},
    {10465, 10000, 9.2661885999194169e-8},
    {9535, 10000, 6.9416433869542694e-8},
};

double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

}  // namespace

TEST_CASE("pmf matches high-precision references") {
  for (const auto& c : kPmfCases) {
    INFO("m=", c.m, " n=", c.n);
    CHECK(rel_err(poisson_pmf(c.m, c.n), c.value) < 1e-14);
  }
  CHECK(poisson_pmf(0, 100) == doctest::Approx(std::exp(-100.0)).epsilon(1e-14));
}

TEST_CASE("pmf input guards") {
  CHECK_THROWS_AS(poisson_pmf(-1, 10), InputError);
  CHECK_THROWS_AS(poisson_pmf(0, 0), InputError);
  CHECK_THROWS_AS(poisson_pmf(0, kPoissonMaxN + 1), InputError);
  CHECK_NOTHROW(poisson_pmf(kPoissonMaxN, kPoissonMaxN));
}

TEST_CASE("window covers the mass") {
  for (long n : {1L, 10L, 100L, 10000L}) {
    auto w = poisson_pmf_window(n);
    REQUIRE(w.m_hi >= w.m_lo);
    REQUIRE((long)w.weights.size() == w.m_hi - w.m_lo + 1);
    CHECK(w.m_lo >= 0);
    double total = 0.0;
    for (double p : w.weights) total += p;
    CHECK(std::abs(total - 1.0) < 1e-13);
  }
}

TEST_CASE("variance sum reproduces n") {
  for (long n : {1L, 10L, 100L, 1000L, 10000L}) {
    INFO("n=", n);
    CHECK(rel_err(poisson_var_sum(n), (double)n) < 1e-12);
  }
}

TEST_CASE("first absolute moment against the closed form") {
  // E|X - n| = 2 e^{-n} n^{n+1} / n!
  CHECK(rel_err(poisson_abs_moment(1), 0.73575888234288464) < 1e-13);
  CHECK(rel_err(poisson_abs_moment(4), 1.5629345185053167) < 1e-13);
  CHECK(rel_err(poisson_abs_moment(100), 7.972199361829427) < 1e-13);
  CHECK(rel_err(poisson_abs_moment(8192), 72.215532075996059) < 1e-12);
  // and the moment is dominated by the Cauchy-Schwarz cap sqrt(n)
  for (long n : {1L, 7L, 100L, 8192L})
    CHECK(poisson_abs_moment(n) <= std::sqrt((double)n));
}

TEST_CASE("central/tail split at n = 1, delta = 0") {
  auto s = poisson_split(1, 0.0);
  CHECK(s.epsilon == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel_err(s.central_abs, 0.55181916175716348) < 1e-13);
  CHECK(rel_err(s.tail_abs, 0.18393972058572116) < 1e-13);
  CHECK(rel_err(s.tail_prob, 0.080301397071394196) < 1e-13);
  // split halves recombine into the full moment
  CHECK(rel_err(s.central_abs + s.tail_abs, poisson_abs_moment(1)) < 1e-14);
}

TEST_CASE("central/tail split at n = 100, delta = 1/6") {
  auto s = poisson_split(100, 1.0 / 6.0);
  CHECK(rel_err(s.epsilon, 21.544346900318837) < 1e-15);
  CHECK(rel_err(s.central_abs, 7.1841028416862399) < 1e-13);
  CHECK(rel_err(s.tail_abs, 0.78809652014318715) < 1e-13);
  CHECK(rel_err(s.tail_prob, 0.03136644690003158) < 1e-13);
  CHECK(rel_err(s.var_sum, 100.0) < 1e-12);
}

TEST_CASE("tail claim audit verdicts") {
  // n = 100: the claimed one-factor bound fails...
  auto bad = tail_claim_audit(100, 1.0 / 6.0);
  CHECK(rel_err(bad.claim_rhs, 0.21544346900318837) < 1e-15);
  CHECK_FALSE(bad.claim_holds);
  CHECK(bad.claim_margin < 0.0);
  // ...while the two-factor safe form still fails here (tail_abs ~ 0.788 > 0.43)
  CHECK_FALSE(bad.safe_holds);

  // n = 10^4: both hold comfortably
  auto good = tail_claim_audit(10000, 1.0 / 6.0);
  CHECK(rel_err(good.tail_abs, 0.0016638709756769939) < 1e-12);
  CHECK(rel_err(good.tail_prob, 3.4345063619793547e-6) < 1e-11);
  CHECK(rel_err(good.claim_rhs, 0.046415888336127789) < 1e-15);
  CHECK(good.claim_holds);
  CHECK(good.claim_margin > 0.0);
  CHECK(good.safe_holds);
  CHECK(good.safe_rhs == doctest::Approx(2.0 * good.claim_rhs).epsilon(1e-15));
}

TEST_CASE("range validation on split and audit") {
  CHECK_THROWS_AS(poisson_split(0, 0.0), InputError);
  CHECK_THROWS_AS(poisson_split(10, 0.51), InputError);
  CHECK_THROWS_AS(poisson_split(10, -0.51), InputError);
  CHECK_THROWS_AS(tail_claim_audit(-5, 0.0), InputError);
  CHECK_NOTHROW(poisson_split(10, 0.5));
  CHECK_NOTHROW(poisson_split(10, -0.5));
}
