#pragma once

#include <array>

#include "ekc/arith.hpp"

namespace ekc {

struct BoundParams {
  double R = 9.645908801;  // zero-free region constant
  double alpha = 0;        // free parameter of the S bound
  double D = 0;
  double log_y = 0;  // y itself overflows for large q
  double W = 0;
  // S bound with alpha_1 at its cap log(alpha)/log 4 and the optional second term kept
  bool uniform_S = true;
};

// Defaults for q: alpha = 10 log q (clamped to q - 1), D = 3.125 min(2 pi, log q / 2),
// log y = 1.44 R log^2 q, W = sqrt(log y / R).
BoundParams default_params(u64 q);

struct SBound {
  std::array<double, 5> terms{};
  std::array<bool, 5> used{};
  double total = 0;
  int count() const;
};

// Explicit upper bound for S(m, q), m | (q-1)/2, 3 <= alpha <= q - 1.
// uniform: ignore the 2-adic and odd-factor refinements (a weaker bound).
SBound upper_bound_S(u64 m, u64 q, double alpha, bool uniform = false);

// Certified bound on the sum over p > x of log p/(p^2 - 1).
double tail_bound_primesum(double x);

// Unconditional lower bound for gamma_{r,q}; valid for q >= 10^4, q = 1 mod 2r.
double gamma_lower_bound(u64 r, u64 q, const BoundParams& params);
double gamma_lower_bound(u64 r, u64 q);

struct Q0Result {
  bool found = false;
  u64 q0 = 0;              // smallest admissible prime with every admissible q in [q0, q_max] passing
  u64 largest_failing = 0;  // 0 when no admissible prime in [10^4, q_max] fails
};

Q0Result find_q0(u64 r, u64 q_max);

}  // namespace ekc
