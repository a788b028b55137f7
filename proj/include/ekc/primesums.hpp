#pragma once

#include <string>
#include <vector>

#include "ekc/arith.hpp"

namespace ekc {

struct SumSpec {
  u64 q = 0;
  u64 m = 0;
  u64 truncation_P = 10'000'000;
  unsigned accel_levels = 0;
};

// Every family needed for one divisor m of q-1, from a single prime pass.
struct ProfileSums {
  u64 m = 0;
  u64 h = 0;
  PrimeSumResult S;      // S(m, q); meaningful only when h is even
  PrimeSumResult log_c;  // log of the local-factor product; h even
  PrimeSumResult log_D;  // log D(1) over primes with g_p != 2
  PrimeSumResult dlog_D; // D'/D(1) over primes with g_p != 2
};

std::vector<ProfileSums> profile_sums(u64 q, const std::vector<u64>& ms, u64 P);

PrimeSumResult S_mq(const SumSpec& spec);
PrimeSumResult local_factor_c(u64 r, u64 q, u64 P);

// q* = (-1|q) q for an odd prime q.
i64 quadratic_discriminant(u64 q);

// Sum over primes p with (D|p) = sign of log p/(p^k - 1), using `levels`
// rounds of exponent doubling before truncating at P. D is -4 or q*.
PrimeSumResult accel_quadratic_sums(i64 D, int sign, u64 k, unsigned levels, u64 P);

enum class TypeIIClass { S1, S2, S3 };
std::string to_string(TypeIIClass c);

struct BinaryForm {
  i64 a = 0, b = 0, c = 0;
  bool operator==(const BinaryForm&) const = default;
};

BinaryForm reduce_form(BinaryForm f);

// Square root of n modulo an odd prime p (n a nonzero square).
u64 sqrt_mod_prime(u64 n, u64 p);

TypeIIClass classify_prime_typeii(u64 p, u64 q);

struct TypeIISums {
  PrimeSumResult s1, s2, s3;
  // S_2 primes weighted as in S3, for the route through gamma_{(q-1)/2,q}
  PrimeSumResult s2_quadratic;
};

TypeIISums typeii_sums(u64 q, u64 P, unsigned accel_levels = 0);

// Optional on-disk cache of per-(q, m, P) partial sums; empty path disables it.
void set_sum_cache_dir(const std::string& dir);
std::string sum_cache_dir();

}  // namespace ekc
