#include "ekc/shanks.hpp"

#include <cmath>
#include <limits>

#include "ekc/errors.hpp"
#include "ekc/lfunctions.hpp"
#include "ekc/numeric.hpp"
#include "ekc/primesums.hpp"

namespace ekc {

namespace {

void check(const ShanksConfig& cfg) {
  if (cfg.levels_b < 1 || cfg.levels_b > 16 || cfg.levels_c < 1 || cfg.levels_c > 16)
    throw DomainError("shanks: levels must lie in [1, 16]");
  if (cfg.residual_P < 3) throw DomainError("shanks: residual_P must be at least 3");
}

// sum over p = 3 mod 4, p <= P, of f(log p); stops once p^K underflows
template <class F>
double sum_3mod4(u64 P, double K, F f) {
  CompensatedSum s;
  PrimeSieve sieve(P);
  u64 p;
  while (sieve.next(p)) {
    if (p % 4 != 3) continue;
    double lp = std::log(static_cast<double>(p));
    if (K * lp > 745.0) break;
    s.add(f(lp));
  }
  return s.value();
}

// log of lambda(s)/beta(s), lambda(s) = sum over odd n of n^{-s} = (1 - 2^{-s}) zeta(s),
// beta(s) = L(s, chi_-4); both written as 1 + small to keep large s exact
double log_lambda_over_beta(double s) {
  double lam = progression_pair(s, 2.0, 3.0).zeta;
  double beta = progression_pair(s, 4.0, 5.0).zeta - progression_pair(s, 4.0, 3.0).zeta;
  return std::log1p(lam) - std::log1p(beta);
}

}  // namespace

double shanks_residual_estimate(unsigned J) {
  return std::log(3.0) * std::pow(4.0, 1.0 - std::ldexp(1.0, static_cast<int>(J))) / 3.0;
}

LandauRamanujanResult landau_ramanujan_K(const ShanksConfig& cfg) {
  check(cfg);
  // B(s) = sum_{p = 3 mod 4} -log(1 - p^{-s}) satisfies 2 B(s) - B(2s) = log(lambda(s)/beta(s))
  const unsigned J = cfg.levels_b;
  CompensatedSum B;
  double err = 0;
  for (unsigned j = 1; j <= J; ++j) {
    double s = std::ldexp(1.0, static_cast<int>(j));
    double t = log_lambda_over_beta(s);
    B.add(std::ldexp(t, -static_cast<int>(j - 1)) / 2.0);
    err += std::ldexp(1e-15 * std::fabs(t) + 1e-17, -static_cast<int>(j));
  }
  const double K2 = std::ldexp(1.0, static_cast<int>(J) + 1);
  double res = sum_3mod4(cfg.residual_P, K2, [&](double lp) { return -std::log1p(-std::exp(-K2 * lp)); });
  res = std::ldexp(res, -static_cast<int>(J));
  B.add(res);
  const double Pd = static_cast<double>(cfg.residual_P);
  // primes beyond P: -log(1 - x) <= 2x, and sum_{n > P} n^{-K2} <= P^{1-K2}/(K2 - 1)
  err += std::ldexp(2.0 * std::exp((1.0 - K2) * std::log(Pd)) / (K2 - 1.0), -static_cast<int>(J));
  LandauRamanujanResult r;
  r.levels = J;
  r.residual = res;
  r.log_K = -0.5 * kLog2 + 0.5 * B.value();
  r.K = std::exp(r.log_K);
  r.err = r.K * (0.5 * err + 4 * std::numeric_limits<double>::epsilon());
  return r;
}

ShanksCResult shanks_c(const ShanksConfig& cfg) {
  check(cfg);
  const unsigned J = cfg.levels_c;
  ShanksCResult r;
  r.levels = J;
  PrimeSumResult A = accel_quadratic_sums(-4, -1, 2, J, cfg.residual_P);
  r.prime_sum = A.value;
  const double K2 = std::ldexp(1.0, static_cast<int>(J) + 1);
  r.residual = sum_3mod4(cfg.residual_P, K2, [&](double lp) { return lp / std::expm1(K2 * lp); });
  if (cfg.stieltjes_route) {
    double L = -(digamma(0.25) - digamma(0.75)) / 4.0;
    double Lp = -std::log(4.0) * L - (stieltjes1(0.25) - stieltjes1(0.75)) / 4.0;
    r.logderiv_at1 = Lp / L;
  } else {
    r.logderiv_at1 = chi_minus4_logderiv_at1();
  }
  CompensatedSum c;
  c.add(0.5);
  c.add(kLog2 / 4);
  c.add(-kEulerGamma / 4);
  c.add(-r.logderiv_at1 / 4);
  c.add(r.prime_sum / 2);
  r.c = c.value();
  r.gamma_SB = 1.0 - 2.0 * r.c;
  r.err = A.tail_bound / 2 + 1e-15;
  return r;
}

}  // namespace ekc
