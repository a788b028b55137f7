#include "ekc/arith.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>

#include "ekc/errors.hpp"

namespace ekc {

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {
std::atomic<u64> g_sieve_capacity{10'000'000'000ULL};
}

void set_sieve_capacity(u64 limit) { g_sieve_capacity = limit; }
u64 sieve_capacity() { return g_sieve_capacity.load(); }

PrimeSieve::PrimeSieve(u64 limit, u64 segment_size)
    : limit_(limit), segment_(segment_size) {
  if (limit < 2) throw DomainError("sieve limit must be >= 2");
  if (segment_size < 2) throw DomainError("segment size must be >= 2");
  if (limit > sieve_capacity()) throw CapacityError("sieve limit exceeds configured capacity");
  u64 root = static_cast<u64>(std::sqrt(static_cast<double>(limit)));
  while (root * root > limit) --root;
  while ((root + 1) * (root + 1) <= limit) ++root;
  // small sieve for base primes
  std::vector<unsigned char> small(root + 1, 1);
  for (u64 i = 3; i * i <= root; i += 2)
    if (small[i])
      for (u64 j = i * i; j <= root; j += 2 * i) small[j] = 0;
  for (u64 i = 3; i <= root; i += 2)
    if (small[i]) {
      base_.push_back(static_cast<u32>(i));
      next_mult_.push_back(i * i);
    }
  low_ = 3;
  composite_.resize(segment_);
  if (limit_ >= 3) fill_segment();
}

void PrimeSieve::fill_segment() {
  // odd numbers low_, low_+2, ..., below min(low_ + 2*segment_, limit_ + 1)
  u64 high = std::min(low_ + 2 * segment_, limit_ + 1);
  if (low_ >= high) {
    seg_len_ = 0;
    done_ = true;
    return;
  }
  seg_len_ = (high - low_ + 1) / 2;
  std::fill(composite_.begin(), composite_.begin() + seg_len_, 0);
  for (std::size_t i = 0; i < base_.size(); ++i) {
    u64 p = base_[i];
    u64 m = next_mult_[i];
    if (m >= high) continue;
    for (; m < high; m += 2 * p) composite_[(m - low_) / 2] = 1;
    next_mult_[i] = m;
  }
  pos_ = 0;
}

bool PrimeSieve::next(u64& p) {
  if (!emitted_two_) {
    emitted_two_ = true;
    p = 2;
    return true;
  }
  while (!done_) {
    while (pos_ < seg_len_) {
      std::size_t i = pos_++;
      if (!composite_[i]) {
        p = low_ + 2 * i;
        return true;
      }
    }
    low_ += 2 * seg_len_;
    if (low_ > limit_) {
      done_ = true;
      break;
    }
    fill_segment();
  }
  return false;
}

std::vector<u64> sieve_primes(u64 limit, u64 segment_size) {
  PrimeSieve s(limit, segment_size);
  std::vector<u64> out;
  u64 p;
  while (s.next(p)) out.push_back(p);
  return out;
}

std::shared_ptr<const std::vector<u32>> cached_primes(u64 limit) {
  static std::mutex mu;
  static std::shared_ptr<const std::vector<u32>> cache;
  static u64 cached_limit = 0;
  if (limit > 0xFFFFFFFFULL) throw CapacityError("cached prime list limited to 32-bit primes");
  std::lock_guard<std::mutex> lock(mu);
  if (!cache || cached_limit < limit) {
    u64 target = std::max<u64>(limit, 2);
    auto v = std::make_shared<std::vector<u32>>();
    v->reserve(static_cast<std::size_t>(1.1 * target / std::max(1.0, std::log(double(target))) + 16));
    PrimeSieve s(target);
    u64 p;
    while (s.next(p)) v->push_back(static_cast<u32>(p));
    cache = std::move(v);
    cached_limit = target;
  }
  return cache;
}

u64 mult_order(i64 a, u64 q) {
  if (q < 2) throw DomainError("modulus must be a prime >= 2");
  i64 r = a % static_cast<i64>(q);
  if (r < 0) r += static_cast<i64>(q);
  u64 ar = static_cast<u64>(r);
  if (std::gcd(ar, q) != 1) throw DomainError("mult_order: gcd(a, q) != 1");
  u64 f = q - 1;
  for (u64 l : prime_factors(q - 1)) {
    while (f % l == 0 && powmod(ar, f / l, q) == 1) f /= l;
  }
  return f;
}

OrderProfile order_profile(u64 p, u64 q, u64 m) {
  if (p == q) throw DomainError("order_profile: p == q");
  if (m == 0) throw DomainError("order_profile: m must be positive");
  OrderProfile o;
  o.p = p;
  o.f_p = mult_order(static_cast<i64>(p % q), q);
  o.g_p = o.f_p / std::gcd(o.f_p, m);
  o.mu_p = o.g_p == 1 ? q : o.g_p;
  return o;
}

int kronecker_symbol(i64 a, i64 n) {
  if (n == 0) throw DomainError("kronecker_symbol: n == 0");
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  // factor out 2 from n
  int v = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++v;
  }
  if (v > 0) {
    if ((a & 1) == 0) return 0;
    i64 a8 = ((a % 8) + 8) % 8;
    if ((v & 1) && (a8 == 3 || a8 == 5)) result = -result;
  }
  // Jacobi symbol (a | n), n odd positive
  a %= n;
  if (a < 0) a += n;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      i64 n8 = n % 8;
      if (n8 == 3 || n8 == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

u64 primitive_root(u64 q) {
  if (q == 2) return 1;
  if (q < 3 || !is_prime(q)) throw DomainError("primitive_root: q must be an odd prime");
  auto fac = prime_factors(q - 1);
  for (u64 g = 2; g < q; ++g) {
    bool ok = true;
    for (u64 l : fac)
      if (powmod(g, (q - 1) / l, q) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw DomainError("primitive_root: none found");
}

std::string to_string(Case c) {
  switch (c) {
    case Case::QisTwo: return "QisTwo";
    case Case::OddH: return "OddH";
    case Case::EvenH: return "EvenH";
  }
  return "?";
}

DivisorContext make_context(u64 k, u64 q) {
  if (k == 0) throw DomainError("k must be positive");
  if (!is_prime(q)) throw DomainError("q must be prime");
  DivisorContext c;
  c.k = k;
  c.q = q;
  c.r = std::gcd(k, q - 1);
  c.h = (q - 1) / c.r;
  if (q == 2)
    c.kind = Case::QisTwo;
  else if (c.h % 2 == 1)
    c.kind = Case::OddH;
  else
    c.kind = Case::EvenH;
  return c;
}

std::vector<u32> order_table(u64 q) {
  if (q < 3 || !is_prime(q)) throw DomainError("order_table: q must be an odd prime");
  std::vector<u32> ord(q, 0);
  u64 g = primitive_root(q);
  // ord(g^t) = (q-1)/gcd(t, q-1)
  u64 a = 1;
  for (u64 t = 0; t < q - 1; ++t) {
    ord[a] = static_cast<u32>((q - 1) / std::gcd(t, q - 1));
    a = a * g % q;
  }
  return ord;
}

}  // namespace ekc
