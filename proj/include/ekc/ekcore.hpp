#pragma once

#include <string>
#include <utility>

#include "ekc/arith.hpp"

namespace ekc {

struct Estimate {
  double value = 0.0;
  double err = 0.0;
};

// gamma_{K_m} for the subfield of Q(zeta_q) cut out by X_m = {chi : chi^{(q-1)/m} = 1}.
// The companion fields are filled from the same character sweep.
struct FieldConstants {
  u64 q = 0;
  u64 m = 0;
  Estimate gamma_Km;
  Estimate gamma_K2m;       // only when 2m | q - 1
  bool has_2m = false;
  double parity_log_L = 0;  // sum over nonprincipal chi in X_m of chi(-1) log|L(1, chi)|
  double parity_log_L_err = 0;
};

FieldConstants field_constants(u64 q, u64 m);
Estimate gamma_Km(u64 q, u64 m);

enum class Verdict { Landau, Ramanujan, Undecided, NotApplicable };
std::string to_string(Verdict v);

// Landau iff value - err > 1/2, Ramanujan iff value + err < 1/2
Verdict verdict_from(const Estimate& g);

constexpr u64 kDefaultP = 10'000'000;

struct EkReport {
  DivisorContext context;
  double gamma_Kr = 0;
  double gamma_K2r = 0;
  PrimeSumResult S_rq;
  double gamma_kq = 0;
  double gamma_prime_kq = 0;
  double C_kq = 0;
  double C_prime_kq = 0;
  double delta = 0;
  double err = 0;
  Verdict verdict = Verdict::Undecided;
  Verdict verdict_prime = Verdict::Undecided;
  bool quadratic_path = false;
};

// Even h only; accel switches the r = (q-1)/2 case to the accelerated quadratic formula.
EkReport gamma_kq(const DivisorContext& ctx, u64 P = kDefaultP, bool accel = false,
                  unsigned accel_levels = 8);

struct QTwoReport {
  double gamma = 0;
  double gamma_prime = 0;
};
QTwoReport gamma_q2();
u64 count_S_k2(u64 x);        // #{n <= x : n = 2^e * odd^2}
u64 count_S_prime_k2(u64 x);  // #{n <= x : n = odd^2}

struct OddHReport {
  DivisorContext context;
  PrimeSumResult log_D1;
  double D1 = 0;  // density of n with q not dividing sigma_k(n)
  PrimeSumResult dlog_D1;
  double gamma_kq = 0;
  double gamma_prime_kq = 0;
  double err = 0;
};
OddHReport gamma_oddh(const DivisorContext& ctx, u64 P = kDefaultP);

struct TypeIIReport {
  u64 q = 0;
  double gamma = 0;  // via the direct three-set formula
  double err = 0;
  double gamma_alt = 0;  // via gamma_{(q-1)/2,q} and the S_2 correction
  double err_alt = 0;
};
TypeIIReport gamma_typeii(u64 q, u64 P = kDefaultP, unsigned accel_levels = 0);

std::pair<Verdict, Verdict> decide(u64 k, u64 q, u64 P = kDefaultP);

// -log q/(q-1) + log x - ((q-1)/m) sum_{n <= x, n^m = 1 mod q} Lambda(n)/n
double ek_slow_estimate(u64 q, u64 m, u64 x);

}  // namespace ekc
