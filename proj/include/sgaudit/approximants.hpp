#pragma once

#include <functional>
#include <string>

#include "sgaudit/linalg.hpp"

namespace sgaudit {

// A map t -> F(t) with F(0) = 1 and ||F(t)|| <= 1; both requirements are
// re-checked on every evaluation (F(0) within 1e-12, contraction within
// 1e-10) and failures raise FamilyContractError.
struct ChernoffFamily {
  std::string label;
  long dim = 0;
  std::function<Mat(double)> map;

  Mat eval(double t) const;
};

ChernoffFamily exact_family(Mat a);                 // t -> exp(-tA)
ChernoffFamily euler_family(Mat a);                 // t -> (1 + tA)^{-1}

enum class TrotterOrder { AB, BA };
ChernoffFamily trotter_family(Mat a, Mat b, TrotterOrder order = TrotterOrder::AB);

// F(t/n)^n
Mat chernoff_iterate(const ChernoffFamily& f, double t, long n);

// (1 - F(s/n)) / (s/n), the generator approximation at step s/n.
Mat generator_approx(const ChernoffFamily& f, double s, long n);

// (exp(-tA/n) exp(-tB/n))^n, directly (no contraction requirement).
Mat trotter_approx(const Mat& a, const Mat& b, double t, long n,
                   TrotterOrder order = TrotterOrder::AB);

// (1 + tA/n)^{-n}
Mat euler_approx(const Mat& a, double t, long n);

// exp(-tA)
Mat exact_semigroup(const Mat& a, double t);

struct ResolventDefect {
  double direct = 0.0;        // ||(zeta + X(s))^{-1} - (zeta + A)^{-1}||
  double product_form = 0.0;  // s ||A (zeta + A + zeta s A)^{-1} A (zeta + A)^{-1}||
};

// Defect between the resolvent of the Euler generator approximation
// X(s) = (1 - (1 + sA)^{-1})/s and the resolvent of A itself.  The two
// routes are algebraically equal; both are reported.
ResolventDefect resolvent_defect(const Mat& a, double s, Complex zeta);

}  // namespace sgaudit
