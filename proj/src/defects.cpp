#include "sgaudit/defects.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgaudit/matrix_io.hpp"

namespace sgaudit {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::OutOfRegime: return "out_of_regime";
  }
  return "violated";
}

Verdict verdict_for(double lhs, double rhs) {
  return (rhs - lhs >= -1e-9 * (1.0 + rhs)) ? Verdict::Holds : Verdict::Violated;
}

std::string to_string(BoundId id) {
  switch (id) {
    case BoundId::SqrtN: return "sqrt_n";
    case BoundId::Split: return "lemma2";
    case BoundId::TwoTerm: return "thm22";
    case BoundId::QuasiSectorial: return "quasi_sectorial";
  }
  return "sqrt_n";
}

BoundId bound_id_from_string(const std::string& token) {
  if (token == "sqrt_n") return BoundId::SqrtN;
  if (token == "lemma2") return BoundId::Split;
  if (token == "thm22") return BoundId::TwoTerm;
  if (token == "quasi_sectorial") return BoundId::QuasiSectorial;
  throw InputError("unknown bound id \"" + token + "\"");
}

bool bound_is_asserted(BoundId id) { return id != BoundId::Split; }

namespace {

void require_contraction(const Mat& c) {
  if (opnorm(c) > 1.0 + 1e-10)
    throw InputError("defect evaluation wants a contraction");
}

void require_count(long n) {
  if (n < 1) throw InputError("iteration count n must be >= 1");
}

}  // namespace

Mat chernoff_defect_matrix(const Mat& c, long n) {
  require_valid(c);
  require_count(n);
  require_contraction(c);
  const auto d = c.rows();
  Mat gen = static_cast<double>(n) * (c - Mat::Identity(d, d));
  return powm(c, n) - expm(gen);
}

double chernoff_defect_norm(const Mat& c, long n) {
  return opnorm(chernoff_defect_matrix(c, n));
}

VecDefect chernoff_defect_vec(const Mat& c, const Vec& x, long n) {
  require_valid(c);
  require_valid(x);
  if (x.size() != c.rows()) throw InputError("vector length does not match the operator");
  require_count(n);
  require_contraction(c);
  const auto d = c.rows();
  VecDefect out;
  out.drive = ((c - Mat::Identity(d, d)) * x).norm();
  out.lhs = (chernoff_defect_matrix(c, n) * x).norm();
  return out;
}

double bound_sqrt_n(long n, double drive) {
  return std::sqrt(static_cast<double>(n)) * drive;
}

double bound_split(long n, double delta, double drive) {
  const double nd = static_cast<double>(n);
  return (std::pow(nd, -2.0 * delta) + std::pow(nd, delta + 0.5)) * drive;
}

double bound_two_term(long n, double delta, double x_norm, double drive) {
  const double nd = static_cast<double>(n);
  return 2.0 * std::pow(nd, -2.0 * delta) * x_norm + std::pow(nd, delta + 0.5) * drive;
}

double bound_ritt(long n, double delta, double k) {
  const double nd = static_cast<double>(n);
  return 2.0 * std::pow(nd, -2.0 * delta) + 2.0 * k * std::pow(nd, delta - 0.5);
}

double bound_ritt_cbrt(long n, double k) {
  return (2.0 * k + 2.0) / std::cbrt(static_cast<double>(n));
}

bool central_step_in_regime(long n, double delta) {
  const double eps = std::pow(static_cast<double>(n), delta + 0.5);
  return std::floor(eps) <= 0.5 * (static_cast<double>(n) + 1.0);
}

RittEstimate ritt_constant(const Mat& c, long n_max) {
  require_valid(c);
  require_contraction(c);
  if (n_max < 16) throw InputError("Ritt sweep wants n_max >= 16");
  const auto d = c.rows();
  const Mat imc = Mat::Identity(d, d) - c;
  RittEstimate out;
  out.n_max = n_max;
  Mat p = c;
  for (long n = 1; n <= n_max; ++n) {
    const double v = static_cast<double>(n + 1) * opnorm(p * imc);
    if (v > out.k_hat) {
      out.k_hat = v;
      out.argmax_n = n;
    }
    if (n < n_max) p = p * c;
  }
  out.max_at_end = out.argmax_n == n_max;
  return out;
}

namespace {

void require_grid(std::span<const long> ns) {
  if (ns.empty()) throw InputError("audit wants a non-empty n grid");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) throw InputError("audit n grid entries must be >= 1");
    if (i > 0 && ns[i] <= ns[i - 1])
      throw InputError("audit n grid must be strictly increasing");
  }
}

void finalize(AuditSweep& sweep) {
  sweep.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& a : sweep.audits) {
    if (a.verdict == Verdict::OutOfRegime) {
      ++sweep.out_of_regime;
      continue;
    }
    if (a.verdict == Verdict::Violated) ++sweep.violations;
    sweep.min_margin = std::min(sweep.min_margin, a.margin);
  }
  if (!std::isfinite(sweep.min_margin)) sweep.min_margin = 0.0;
}

}  // namespace

AuditSweep audit_vector_bound(const Mat& c, const Vec& x, std::span<const long> ns,
                              double delta, BoundId id) {
  if (id == BoundId::QuasiSectorial)
    throw InputError("the quasi_sectorial bound is a norm bound, not a vector bound");
  require_grid(ns);
  const std::string fp = fingerprint(c);
  const double x_norm = x.norm();
  AuditSweep sweep;
  sweep.audits.reserve(ns.size());
  for (long n : ns) {
    const VecDefect vd = chernoff_defect_vec(c, x, n);
    BoundAudit a;
    a.lhs = vd.lhs;
    a.context = {n, delta, id, fp};
    const bool needs_regime = id == BoundId::Split || id == BoundId::TwoTerm;
    switch (id) {
      case BoundId::SqrtN: a.rhs = bound_sqrt_n(n, vd.drive); break;
      case BoundId::Split: a.rhs = bound_split(n, delta, vd.drive); break;
      case BoundId::TwoTerm: a.rhs = bound_two_term(n, delta, x_norm, vd.drive); break;
      case BoundId::QuasiSectorial: break;
    }
    a.margin = a.rhs - a.lhs;
    a.verdict = (needs_regime && !central_step_in_regime(n, delta))
                    ? Verdict::OutOfRegime
                    : verdict_for(a.lhs, a.rhs);
    sweep.audits.push_back(std::move(a));
  }
  finalize(sweep);
  return sweep;
}

AuditSweep audit_norm_bound(const Mat& c, std::span<const long> ns, double delta,
                            const RittEstimate& ritt) {
  require_grid(ns);
  const std::string fp = fingerprint(c);
  AuditSweep sweep;
  sweep.audits.reserve(ns.size());
  for (long n : ns) {
    BoundAudit a;
    a.lhs = chernoff_defect_norm(c, n);
    a.rhs = bound_ritt(n, delta, ritt.k_hat);
    a.margin = a.rhs - a.lhs;
    a.context = {n, delta, BoundId::QuasiSectorial, fp};
    a.verdict = central_step_in_regime(n, delta) ? verdict_for(a.lhs, a.rhs)
                                                 : Verdict::OutOfRegime;
    sweep.audits.push_back(std::move(a));
  }
  finalize(sweep);
  return sweep;
}

}  // namespace sgaudit
