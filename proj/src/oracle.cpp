#include "ekc/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "ekc/ekcore.hpp"
#include "ekc/errors.hpp"
#include "ekc/parallel.hpp"

namespace ekc {

namespace {

void check_q(u64 q) {
  if (q < 2 || !is_prime(q)) throw DomainError("oracle: q must be prime");
}

}  // namespace

u64 sigma_k_prime_power_mod(u64 p, u64 a, u64 k, u64 q) {
  check_q(q);
  const u64 pk = powmod(p % q, k, q);
  u64 s = 1 % q, term = 1 % q;
  for (u64 i = 0; i < a; ++i) {
    term = mulmod(term, pk, q);
    s = (s + term) % q;
  }
  return s;
}

u64 sigma_k_mod(u64 n, u64 k, u64 q) {
  check_q(q);
  if (n == 0) throw DomainError("sigma_k_mod: n must be positive");
  if (n > kOracleFactorLimit) throw CapacityError("sigma_k_mod: n too large to factor");
  u64 s = 1 % q;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    u64 a = 0;
    while (n % p == 0) {
      n /= p;
      ++a;
    }
    s = mulmod(s, sigma_k_prime_power_mod(p, a, k, q), q);
  }
  if (n > 1) s = mulmod(s, sigma_k_prime_power_mod(n, 1, k, q), q);
  return s;
}

CountResult count_S(u64 x, u64 k, u64 q, bool prime_variant) {
  check_q(q);
  if (x < 1) throw DomainError("count_S: x must be positive");
  if (x > kOracleCountLimit) throw CapacityError("count_S: x above 10^8");
  // q | sigma_k(n) iff some p^a || n, p != q, has a = -1 mod mu_p
  auto primes = x >= 2 ? sieve_primes(x) : std::vector<u64>{};
  std::vector<u32> mu(primes.size(), 0);
  std::vector<u64> mu_by_residue(q <= 10'000'000 ? q : 0, 0);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    u64 p = primes[i];
    if (p == q) continue;
    u64 r = p % q;
    u64 m;
    if (!mu_by_residue.empty() && mu_by_residue[r]) {
      m = mu_by_residue[r];
    } else {
      m = order_profile(p, q, k).mu_p;
      if (!mu_by_residue.empty()) mu_by_residue[r] = m;
    }
    mu[i] = static_cast<u32>(std::min<u64>(m, 64));  // p^{mu-1} > x once mu > 64
  }
  const u64 width = u64{1} << 22;
  const u64 segs = (x + width) / width;  // segment s covers [s*width, (s+1)*width)
  std::vector<u64> good(segs, 0);
  parallel_for(segs, [&](std::size_t s) {
    const u64 lo = s * width, hi = std::min(x + 1, lo + width);
    std::vector<unsigned char> bad(hi - lo, 0);
    if (lo == 0) bad[0] = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const u64 p = primes[i];
      if (p == q) continue;
      const u64 m = mu[i];
      // exact exponents a = m-1, 2m-1, ...
      u64 pa = 1;
      bool over = false;
      for (u64 e = 0; e < m - 1; ++e) {
        if (pa > x / p) {
          over = true;
          break;
        }
        pa *= p;
      }
      if (over) continue;
      for (;;) {
        const u64 step = pa;
        const bool next_fits = pa <= x / p;
        for (u64 n = (lo + step - 1) / step * step; n < hi; n += step)
          if (!next_fits || (n / step) % p != 0) bad[n - lo] = 1;
        // advance to exponent a + m
        bool done = false;
        for (u64 e = 0; e < m; ++e) {
          if (pa > x / p) {
            done = true;
            break;
          }
          pa *= p;
        }
        if (done) break;
      }
      if (p > hi) break;
    }
    if (prime_variant)
      for (u64 n = (lo + q - 1) / q * q; n < hi; n += q) bad[n - lo] = 1;
    good[s] = static_cast<u64>(std::count(bad.begin(), bad.end(), 0));
  });
  CountResult r;
  r.x = x;
  r.k = k;
  r.q = q;
  r.prime_variant = prime_variant;
  for (u64 g : good) r.count += g;
  return r;
}

TrendReport fit_first_order(const std::vector<u64>& x_grid, u64 k, u64 q, bool prime_variant, u64 P) {
  DivisorContext ctx = make_context(k, q);
  if (ctx.kind != Case::EvenH) throw DispatchError("fit_first_order needs (q-1)/gcd(k, q-1) even");
  if (x_grid.empty()) throw DomainError("fit_first_order: empty grid");
  EkReport ek = gamma_kq(ctx, P);
  TrendReport t;
  t.k = k;
  t.q = q;
  t.h = ctx.h;
  t.prime_variant = prime_variant;
  t.C = prime_variant ? ek.C_prime_kq : ek.C_kq;
  t.gamma = prime_variant ? ek.gamma_prime_kq : ek.gamma_kq;
  const double hd = static_cast<double>(ctx.h);
  for (u64 x : x_grid) {
    if (x < 3) throw DomainError("fit_first_order: grid points must be at least 3");
    CountResult c = count_S(x, k, q, prime_variant);
    const double xd = static_cast<double>(x), lx = std::log(xd);
    const double landau = t.C * xd / std::pow(lx, 1.0 / hd);
    TrendPoint pt;
    pt.x = x;
    pt.count = c.count;
    pt.ratio = static_cast<double>(c.count) * std::pow(lx, 1.0 / hd) / xd;
    pt.rel_to_C = pt.ratio / t.C - 1.0;
    pt.second_order = (static_cast<double>(c.count) - landau) * hd * lx / landau;
    t.points.push_back(pt);
  }
  for (std::size_t i = 1; i < t.points.size(); ++i)
    if (std::fabs(t.points[i].rel_to_C) < std::fabs(t.points[i - 1].rel_to_C)) ++t.steps_toward_C;
  return t;
}

}  // namespace ekc
