#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "ekc/arith.hpp"

namespace ekc {

// Coefficients of a q-expansion reduced mod a prime, index 0 = constant term.
struct SeriesModQ {
  u64 q = 0;
  std::vector<u32> coeffs;
};

struct SeriesExact {
  std::vector<mpz_class> coeffs;
};

constexpr u64 kExactSeriesLimit = 10'000;
constexpr u64 kModSeriesLimit = 200'000;

// Delta = x prod (1 - x^m)^24 up to x^N.
SeriesExact eta24_exact(u64 N);
SeriesModQ eta24_mod(u64 N, u64 q);

bool is_cusp_weight(int w);
// Delta times the Eisenstein factors of weight w - 12 (Q = E4, R = E6).
SeriesExact tau_w_series_exact(int w, u64 N);
SeriesModQ tau_w_series_mod(int w, u64 N, u64 q);

SeriesModQ reduce(const SeriesExact& s, u64 q);

// sigma_k(n) mod q for n = 0..N (entry 0 unused).
std::vector<u32> sigma_table_mod(u64 k, u64 N, u64 q);

struct TypeIRow {
  int w = 0;
  u64 q = 0;
  int v = 0;
};

// Exceptional primes of type (i); nullopt when (w, q) is not exceptional.
std::optional<int> type_i_v(int w, u64 q);
const std::vector<TypeIRow>& type_i_rows();
// r = gcd(w - 1 - 2v, q - 1)
u64 type_i_r(int w, u64 q);

struct Violation {
  u64 n = 0;
  u64 lhs = 0;  // tau_w(n) mod q
  u64 rhs = 0;  // predicted residue
  std::string rule;
};

struct TypeIReport {
  int w = 0;
  u64 q = 0;
  int v = 0;
  u64 r = 0;
  u64 N = 0;
  u64 tau_q = 0;  // tau_w(q) mod q
  u64 coprime_checked = 0;
  u64 all_checked = 0;
  std::vector<Violation> violations;
};

// tau_w(n) = n^v sigma_{w-1-2v}(n) mod q for gcd(n, q) = 1, and for all n <= N the lifted forms
// tau_w(n) = n^{max(1,v)} sigma_{w-1-2v}(n) (q < w) or sigma_{w-1}(n) (q > w), together with
// q | tau_w(n) <=> q | n^{max(1,v)} sigma_r(n) (sigma_r for q > w).
TypeIReport verify_type_i(int w, u64 q, int v, u64 N);

struct CuspTypeIIReport {
  int w = 0;
  u64 q = 0;
  u64 N = 0;
  u64 primes_checked = 0;
  u64 prime_powers_checked = 0;
  u64 class_counts[3] = {0, 0, 0};  // S1, S2, S3
  std::vector<Violation> violations;
};

// Residue of tau_w(p^e) mod q predicted for each class: index 0 for p = q, then S1, S2, S3.
u64 typeii_power_residue(int row, u64 e, u64 q);

CuspTypeIIReport verify_type_ii(int w, u64 q, u64 N);

struct HeckeReport {
  int w = 0;
  u64 N = 0;
  u64 coprime_pairs = 0;
  u64 recurrence_checks = 0;
  u64 deligne_checks = 0;
  std::vector<std::string> failures;
};

HeckeReport check_hecke_and_deligne(int w, u64 N_exact);

}  // namespace ekc
