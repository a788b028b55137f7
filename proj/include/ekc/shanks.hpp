#pragma once

#include "ekc/arith.hpp"

namespace ekc {

struct ShanksConfig {
  unsigned levels_b = 8;  // ladder depth for K, in [1, 16]
  unsigned levels_c = 8;  // ladder depth for c, in [1, 16]
  u64 residual_P = 1'000'000;
  // take L'/L(1, chi_-4) from digamma/Stieltjes values instead of the Gamma(1/4) closed form
  bool stieltjes_route = false;
};

struct LandauRamanujanResult {
  double K = 0;
  double log_K = 0;
  double err = 0;       // absolute, on K
  double residual = 0;  // 2^{-J} sum_{p = 3 mod 4, p <= P} -log(1 - p^{-2^{J+1}})
  unsigned levels = 0;
};

struct ShanksCResult {
  double c = 0;
  double gamma_SB = 0;    // 1 - 2c
  double prime_sum = 0;   // sum over p = 3 mod 4 of log p/(p^2 - 1)
  double logderiv_at1 = 0;  // L'/L(1, chi_-4) as used
  double err = 0;
  double residual = 0;  // sum_{p = 3 mod 4, p <= P} log p/(p^{2^{J+1}} - 1)
  unsigned levels = 0;
};

LandauRamanujanResult landau_ramanujan_K(const ShanksConfig& cfg = {});
ShanksCResult shanks_c(const ShanksConfig& cfg = {});

// (log 3) 4^{1 - 2^J}/3, the size estimate for the level-J residual
double shanks_residual_estimate(unsigned J);

}  // namespace ekc
