#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ekc {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u32 = std::uint32_t;

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}
u64 powmod(u64 a, u64 e, u64 m);
u64 gcd_u64(u64 a, u64 b);

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(u64 n);

// Distinct prime factors by trial division, increasing.
std::vector<u64> prime_factors(u64 n);

// Largest sieve limit accepted before a CapacityError (default 10^10).
void set_sieve_capacity(u64 limit);
u64 sieve_capacity();

constexpr u64 kDefaultSegment = u64{1} << 20;

// Segmented sieve of Eratosthenes yielding primes <= limit in order.
// Memory stays O(segment_size + sqrt(limit)).
class PrimeSieve {
 public:
  explicit PrimeSieve(u64 limit, u64 segment_size = kDefaultSegment);
  // Writes the next prime to p; false once exhausted.
  bool next(u64& p);

 private:
  void fill_segment();

  u64 limit_;
  u64 segment_;
  std::vector<u32> base_;      // odd sieving primes up to sqrt(limit)
  std::vector<u64> next_mult_; // next odd multiple per base prime
  std::vector<unsigned char> composite_;
  u64 low_ = 0;  // segment covers odd numbers low_ + 2i
  std::size_t pos_ = 0;
  std::size_t seg_len_ = 0;
  bool emitted_two_ = false;
  bool done_ = false;
};

std::vector<u64> sieve_primes(u64 limit, u64 segment_size = kDefaultSegment);

// Shared read-only list of all primes up to at least `limit`, kept in memory
// for reuse by repeated prime-sum passes. Limit must fit in 32 bits.
std::shared_ptr<const std::vector<u32>> cached_primes(u64 limit);

u64 mult_order(i64 a, u64 q);

struct OrderProfile {
  u64 p = 0;
  u64 f_p = 0;
  u64 g_p = 0;
  u64 mu_p = 0;
};

OrderProfile order_profile(u64 p, u64 q, u64 m);

int kronecker_symbol(i64 a, i64 n);

u64 primitive_root(u64 q);

enum class Case { QisTwo, OddH, EvenH };
std::string to_string(Case c);

struct DivisorContext {
  u64 k = 0;
  u64 q = 0;
  u64 r = 0;
  u64 h = 0;
  Case kind = Case::EvenH;
};

DivisorContext make_context(u64 k, u64 q);

struct PrimeSumResult {
  double value = 0.0;
  double tail_bound = 0.0;  // certified
  u64 truncation_P = 0;
  u64 terms_used = 0;
  double heuristic_tail = 0.0;
};

// Order of every residue class mod an odd prime q: table[a] = ord_q(a), table[0] = 0.
std::vector<u32> order_table(u64 q);

}  // namespace ekc
