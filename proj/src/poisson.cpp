#include "sgaudit/poisson.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace sgaudit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ln(m!) - ln(sqrt(2 pi m) (m/e)^m).  Small arguments come from a table so
// the saddle-point form stays accurate to the last bit; the asymptotic
// series takes over where it converges fast.
double stirlerr(long m) {
  static const auto table = [] {
    std::array<double, 16> t{};
    for (int k = 1; k < 16; ++k) {
      const long double kk = k;
      t[k] = static_cast<double>(std::lgamma(kk + 1.0L) -
                                 0.5L * std::log(2.0L * std::numbers::pi_v<long double> * kk) -
                                 kk * (std::log(kk) - 1.0L));
    }
    return t;
  }();
  if (m < 16) return table[m];
  const double n = static_cast<double>(m);
  const double nn = n * n;
  constexpr double S0 = 1.0 / 12.0, S1 = 1.0 / 360.0, S2 = 1.0 / 1260.0,
                   S3 = 1.0 / 1680.0, S4 = 1.0 / 1188.0;
  if (n > 500.0) return (S0 - S1 / nn) / n;
  if (n > 80.0) return (S0 - (S1 - S2 / nn) / nn) / n;
  if (n > 35.0) return (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n;
  return (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n;
}

// x*log(x/np) + np - x, stable when x is close to np.
double bd0(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v = v * v;
    for (int j = 1;; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / np) + np - x;
}

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

void require_n(long n) {
  if (n < 1 || n > kPoissonMaxN)
    throw InputError("Poisson parameter out of range 1.." + std::to_string(kPoissonMaxN));
}

}  // namespace

double poisson_pmf(long m, long n) {
  require_n(n);
  if (m < 0) throw InputError("Poisson pmf wants m >= 0");
  if (m == 0) return std::exp(-static_cast<double>(n));
  const double md = static_cast<double>(m);
  return std::exp(-stirlerr(m) - bd0(md, static_cast<double>(n))) / std::sqrt(kTwoPi * md);
}

PmfWindow poisson_pmf_window(long n) {
  require_n(n);
  const double w = std::max(60.0, 12.0 * std::sqrt(static_cast<double>(n)));
  PmfWindow out;
  out.m_lo = std::max(0L, static_cast<long>(std::floor(n - w)));
  out.m_hi = static_cast<long>(std::ceil(n + w));
  out.weights.reserve(out.m_hi - out.m_lo + 1);
  for (long m = out.m_lo; m <= out.m_hi; ++m) out.weights.push_back(poisson_pmf(m, n));
  return out;
}

double poisson_var_sum(long n) {
  const PmfWindow win = poisson_pmf_window(n);
  KahanSum sum;
  for (long m = win.m_lo; m <= win.m_hi; ++m) {
    const double d = static_cast<double>(m - n);
    sum.add(d * d * win.weights[m - win.m_lo]);
  }
  return sum.s;
}

double poisson_abs_moment(long n) {
  const PmfWindow win = poisson_pmf_window(n);
  KahanSum sum;
  for (long m = win.m_lo; m <= win.m_hi; ++m)
    sum.add(std::abs(static_cast<double>(m - n)) * win.weights[m - win.m_lo]);
  return sum.s;
}

PoissonSplit poisson_split(long n, double delta) {
  require_n(n);
  if (!(delta >= -0.5 && delta <= 0.5))
    throw InputError("split exponent delta must lie in [-1/2, 1/2]");
  const PmfWindow win = poisson_pmf_window(n);
  PoissonSplit out;
  out.n = n;
  out.delta = delta;
  out.epsilon = std::pow(static_cast<double>(n), delta + 0.5);
  KahanSum central, tail, tail_p, var;
  for (long m = win.m_lo; m <= win.m_hi; ++m) {
    const double d = static_cast<double>(m - n);
    const double w = win.weights[m - win.m_lo];
    var.add(d * d * w);
    if (std::abs(d) <= out.epsilon) {
      central.add(std::abs(d) * w);
    } else {
      tail.add(std::abs(d) * w);
      tail_p.add(w);
    }
  }
  out.central_abs = central.s;
  out.tail_abs = tail.s;
  out.tail_prob = tail_p.s;
  out.var_sum = var.s;
  return out;
}

TailClaimAudit tail_claim_audit(long n, double delta) {
  const PoissonSplit split = poisson_split(n, delta);
  TailClaimAudit out;
  out.n = n;
  out.delta = delta;
  out.epsilon = split.epsilon;
  out.tail_abs = split.tail_abs;
  out.tail_prob = split.tail_prob;
  out.claim_rhs = std::pow(static_cast<double>(n), -2.0 * delta);
  out.claim_margin = out.claim_rhs - out.tail_abs;
  out.claim_holds = out.claim_margin >= -1e-9 * (1.0 + out.claim_rhs);
  out.safe_rhs = 2.0 * out.claim_rhs;
  out.safe_margin = out.safe_rhs - out.tail_abs;
  out.safe_holds = out.safe_margin >= -1e-9 * (1.0 + out.safe_rhs);
  return out;
}

}  // namespace sgaudit
