#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "ekc/characters.hpp"

namespace ekc {

double digamma(double x);

// First generalized Stieltjes constant gamma_1(x), 0 < x <= 1.
double stieltjes1(double x, unsigned N = 10000);

struct ZetaPair {
  double zeta = 0.0;
  double dzeta = 0.0;  // derivative in s
};

// zeta(s, x) and d/ds zeta(s, x), s >= 2, 0 < x <= 1.
ZetaPair hurwitz_zeta_pair(double s, double x);

// sum over n >= 0 of (q n + a)^{-s} and of -log(q n + a) (q n + a)^{-s}; s > 1, q, a > 0.
ZetaPair progression_pair(double s, double q, double a);

double log_gamma(double x);  // Lanczos kernel, x > 0
double agm(double a, double b);
double log_gamma_quarter_agm();

double zeta_logderiv(double s);

struct LValueRecord {
  CharacterId character;
  double s = 1.0;
  std::complex<double> L;
  std::complex<double> Lprime;
  std::complex<double> logderiv;
  double abs_err = 0.0;  // on logderiv
  double L_err = 0.0;    // on L
};

// Per-q cache of psi(a/q) and gamma_1(a/q), stored in discrete-log order
// (entry t belongs to a = g^t mod q).
struct AtOneData {
  u64 q = 0;
  std::vector<double> psi, gamma1, psi_err, gamma1_err;
  // folded over a <-> q - a: index k < (q-1)/2 holds f(g^k) +- f(q - g^k)
  std::vector<double> psi_even, psi_odd, gamma1_even, gamma1_odd;
};

std::shared_ptr<const AtOneData> at_one_data(const CharacterTable& t);

LValueRecord L_logderiv_at1(const CharacterTable& t, u64 j);
LValueRecord L_logderiv_at1(const CharacterTable& t, const AtOneData& d, u64 j);

// Records for every listed character, evaluated in parallel, returned in input order.
std::vector<LValueRecord> L_logderiv_at1_sweep(const CharacterTable& t, const std::vector<u64>& js);

LValueRecord L_logderiv_at(double s, const CharacterTable& t, u64 j);

// L'/L(s, chi) for a real character given by its values chi[0..N-1] mod N.
double real_character_logderiv(double s, const std::vector<int>& chi);

std::vector<int> chi_minus4_values();
std::vector<int> legendre_values(u64 q);

double chi_minus4_logderiv_at1();

}  // namespace ekc
