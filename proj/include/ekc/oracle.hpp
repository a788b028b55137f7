#pragma once

#include <vector>

#include "ekc/arith.hpp"

namespace ekc {

constexpr u64 kOracleCountLimit = 100'000'000;
constexpr u64 kOracleFactorLimit = 100'000'000'000'000;  // trial division up to 10^7

// sigma_k(n) mod q by factoring n.
u64 sigma_k_mod(u64 n, u64 k, u64 q);
// sigma_k(p^a) mod q = 1 + p^k + ... + p^{ak} mod q.
u64 sigma_k_prime_power_mod(u64 p, u64 a, u64 k, u64 q);

struct CountResult {
  u64 x = 0;
  u64 count = 0;
  u64 k = 0;
  u64 q = 0;
  bool prime_variant = false;
};

// Number of n <= x with q not dividing sigma_k(n) (prime_variant: n sigma_k(n)).
CountResult count_S(u64 x, u64 k, u64 q, bool prime_variant = false);

struct TrendPoint {
  u64 x = 0;
  u64 count = 0;
  double ratio = 0;         // count log^{1/h}(x)/x
  double rel_to_C = 0;      // ratio/C - 1
  double second_order = 0;  // (count - C x/log^{1/h} x) h log x/(C x/log^{1/h} x)
};

struct TrendReport {
  u64 k = 0, q = 0, h = 0;
  bool prime_variant = false;
  double C = 0;       // C_{k,q}, or C'_{k,q} for the prime variant
  double gamma = 0;   // gamma_{k,q}, or gamma'_{k,q}
  std::vector<TrendPoint> points;
  int steps_toward_C = 0;  // consecutive grid steps where |ratio - C| shrinks
};

// Needs (q-1)/gcd(k, q-1) even.
TrendReport fit_first_order(const std::vector<u64>& x_grid, u64 k, u64 q, bool prime_variant = false,
                            u64 P = 1'000'000);

}  // namespace ekc
