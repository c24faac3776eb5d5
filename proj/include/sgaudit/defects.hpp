#pragma once

#include <span>
#include <string>
#include <vector>

#include "sgaudit/linalg.hpp"

namespace sgaudit {

enum class Verdict { Holds, Violated, OutOfRegime };

std::string to_string(Verdict v);

// holds iff rhs - lhs >= -1e-9 * (1 + rhs)
Verdict verdict_for(double lhs, double rhs);

enum class BoundId { SqrtN, Split, TwoTerm, QuasiSectorial };

// Serialized tokens: sqrt_n, lemma2, thm22, quasi_sectorial.
std::string to_string(BoundId id);
BoundId bound_id_from_string(const std::string& token);

// True when the bound is asserted to hold (violations are failures); the
// lemma2 form is audited only, violations there are expected findings.
bool bound_is_asserted(BoundId id);

struct AuditContext {
  long n = 0;
  double delta = 0.0;
  BoundId bound = BoundId::SqrtN;
  std::string fingerprint;
};

struct BoundAudit {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  Verdict verdict = Verdict::Holds;
  AuditContext context;
};

// C^n - exp(n(C - 1)).  C must be a contraction (opnorm <= 1 + 1e-10).
Mat chernoff_defect_matrix(const Mat& c, long n);
double chernoff_defect_norm(const Mat& c, long n);

struct VecDefect {
  double lhs = 0.0;    // ||(C^n - exp(n(C-1))) x||
  double drive = 0.0;  // ||(C - 1) x||
};
VecDefect chernoff_defect_vec(const Mat& c, const Vec& x, long n);

// Right-hand sides.  drive = ||(C-1)x||, x_norm = ||x||, k = Ritt constant.
double bound_sqrt_n(long n, double drive);                              // sqrt(n) * drive
double bound_split(long n, double delta, double drive);                 // (n^{-2d} + n^{d+1/2}) drive
double bound_two_term(long n, double delta, double x_norm, double drive);  // 2 n^{-2d} ||x|| + n^{d+1/2} drive
double bound_ritt(long n, double delta, double k);                      // 2 n^{-2d} + 2 k n^{d-1/2}
double bound_ritt_cbrt(long n, double k);                               // (2k + 2) / n^{1/3}

// Central-step regime guard for the split-based bounds:
// floor(n^{delta+1/2}) <= (n+1)/2.
bool central_step_in_regime(long n, double delta);

struct RittEstimate {
  double k_hat = 0.0;
  long n_max = 0;
  long argmax_n = 0;
  bool max_at_end = false;  // suspicious: the sweep may not have converged
};

// max over 1 <= n <= n_max of (n+1) * ||C^n (1 - C)||.  n_max >= 16.
RittEstimate ritt_constant(const Mat& c, long n_max);

struct AuditSweep {
  std::vector<BoundAudit> audits;
  double min_margin = 0.0;
  int violations = 0;
  int out_of_regime = 0;
};

// Vector-form audits (sqrt_n, lemma2, thm22) of one operator and probe
// vector over an n grid.
AuditSweep audit_vector_bound(const Mat& c, const Vec& x, std::span<const long> ns,
                              double delta, BoundId id);

// Norm-form audit (quasi_sectorial only) against a Ritt estimate.
AuditSweep audit_norm_bound(const Mat& c, std::span<const long> ns, double delta,
                            const RittEstimate& ritt);

}  // namespace sgaudit
