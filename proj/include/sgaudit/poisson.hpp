#pragma once

#include <vector>

#include "sgaudit/errors.hpp"

namespace sgaudit {

inline constexpr long kPoissonMaxN = 1000000;

// P(X = m) for X ~ Poisson(n), to near-full double relative accuracy
// (saddle-point form, not a naive log-gamma difference).
double poisson_pmf(long m, long n);

struct PmfWindow {
  long m_lo = 0;
  long m_hi = 0;                 // inclusive
  std::vector<double> weights;   // weights[i] = P(X = m_lo + i)
};

// Window [max(0, n - w), n + w] with w = max(60, 12*sqrt(n)); the mass
// outside is below 1e-20 and is ignored by the moment sums.
PmfWindow poisson_pmf_window(long n);

// sum (m - n)^2 * pmf over the window; equals the variance n up to
// truncation, compensated summation inside.
double poisson_var_sum(long n);

// sum |m - n| * pmf over the window.
double poisson_abs_moment(long n);

struct PoissonSplit {
  long n = 0;
  double delta = 0.0;
  double epsilon = 0.0;      // n^{delta + 1/2}
  double central_abs = 0.0;  // sum over |m - n| <= epsilon of |m - n| * pmf
  double tail_abs = 0.0;     // sum over |m - n| >  epsilon of |m - n| * pmf
  double tail_prob = 0.0;    // mass of the strict tail
  double var_sum = 0.0;
};

// Central/tail split of the first absolute moment at epsilon = n^{delta+1/2}.
// Wants n >= 1 and delta in [-1/2, 1/2].
PoissonSplit poisson_split(long n, double delta);

struct TailClaimAudit {
  long n = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  double tail_abs = 0.0;
  double tail_prob = 0.0;
  double claim_rhs = 0.0;    // n^{-2 delta}
  double claim_margin = 0.0;
  bool claim_holds = false;
  double safe_rhs = 0.0;     // 2 n^{-2 delta}, the Chebyshev-backed form
  double safe_margin = 0.0;
  bool safe_holds = false;
};

// Audits the claimed tail estimate tail_abs <= n^{-2 delta} and the weaker
// two-factor form that Chebyshev actually yields.
TailClaimAudit tail_claim_audit(long n, double delta);

}  // namespace sgaudit
