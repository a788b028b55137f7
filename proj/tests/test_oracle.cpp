#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ekc/ekcore.hpp"
#include "ekc/errors.hpp"
#include "ekc/oracle.hpp"
#include "ekc/parallel.hpp"

using namespace ekc;

namespace {

// sigma_k(n) mod q summing d^k over all divisors
u64 sigma_brute(u64 n, u64 k, u64 q) {
  u64 s = 0;
  for (u64 d = 1; d <= n; ++d)
    if (n % d == 0) s = (s + powmod(d % q, k, q)) % q;
  return s;
}

u64 count_brute(u64 x, u64 k, u64 q, bool prime_variant) {
  u64 c = 0;
  for (u64 n = 1; n <= x; ++n) {
    if (prime_variant && n % q == 0) continue;
    if (sigma_brute(n, k, q) != 0) ++c;
  }
  return c;
}

}  // namespace

TEST_CASE("sigma_k_mod small values") {
  CHECK(sigma_k_mod(2, 1, 3) == 0);
  CHECK(sigma_k_mod(2, 11, 691) == 667);
  CHECK(667 == 691 - 24);
  CHECK(sigma_k_mod(1, 5, 7) == 1);
  for (u64 n = 1; n <= 600; ++n)
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 691ULL})
      for (u64 k : {1ULL, 3ULL, 11ULL}) CHECK(sigma_k_mod(n, k, q) == sigma_brute(n, k, q));
  // n with a large prime factor
  CHECK(sigma_k_mod(2 * 1000003ULL, 1, 7) == (3 * (1000004 % 7)) % 7);
}

TEST_CASE("sigma_k_mod errors") {
  CHECK_THROWS_AS(sigma_k_mod(0, 1, 3), DomainError);
  CHECK_THROWS_AS(sigma_k_mod(10, 1, 4), DomainError);
  CHECK_THROWS_AS(sigma_k_mod(kOracleFactorLimit + 1, 1, 3), CapacityError);
}

TEST_CASE("q | sigma_k(p^a) iff a = -1 mod mu_p") {
  for (u64 q = 2; q < 50; ++q) {
    if (!is_prime(q)) continue;
    for (u64 p = 2; p < 50; ++p) {
      if (!is_prime(p) || p == q) continue;
      for (u64 k : {1ULL, 2ULL, 3ULL, 5ULL}) {
        u64 mu = order_profile(p, q, k).mu_p;
        // plain geometric sum as the reference
        u64 s = 0, t = 1 % q;
        for (u64 a = 0; a <= 3 * q; ++a) {
          s = (s + t) % q;
          t = t * powmod(p % q, k, q) % q;
          CHECK(sigma_k_prime_power_mod(p, a, k, q) == s);
          CHECK(((s == 0) == ((a + 1) % mu == 0)));
        }
      }
    }
  }
}

TEST_CASE("q | sigma_k(p) iff p^r = -1 mod q") {
  for (u64 q = 3; q <= 100; ++q) {
    if (!is_prime(q)) continue;
    for (u64 k : {1ULL, 2ULL, 3ULL, 5ULL, 11ULL}) {
      u64 r = gcd_u64(k, q - 1);
      int bad = 0;
      for (u64 p : sieve_primes(100000)) {
        if (p == q) continue;
        bool divides = sigma_k_mod(p, k, q) == 0;
        bool split = powmod(p % q, r, q) == q - 1;
        if (divides != split) ++bad;
      }
      CHECK_MESSAGE(bad == 0, "q = " << q << " k = " << k);
    }
  }
}

TEST_CASE("count_S small cases") {
  CHECK(count_S(10, 1, 3).count == 5);
  CHECK(count_S(10, 1, 3, true).count == 3);
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 13ULL})
    for (u64 k : {1ULL, 2ULL, 3ULL, 6ULL})
      for (bool pv : {false, true}) {
        CHECK_MESSAGE(count_S(3000, k, q, pv).count == count_brute(3000, k, q, pv),
                      "q = " << q << " k = " << k << " prime = " << pv);
      }
  for (u64 x : {1ULL, 2ULL, 3ULL, 4ULL, 1000ULL}) CHECK(count_S(x, 1, 3).count <= x);
}

TEST_CASE("count_S across segment boundaries") {
  const u64 x = (u64{1} << 22) + 5000;
  // brute force on the tail window only, using the head count from the shorter run
  u64 head = count_S(x - 10000, 1, 5).count;
  u64 tail = 0;
  for (u64 n = x - 9999; n <= x; ++n)
    if (sigma_k_mod(n, 1, 5) != 0) ++tail;
  CHECK(count_S(x, 1, 5).count == head + tail);
}

TEST_CASE("count_S gcd invariance") {
  const u64 x = 100000;
  struct KQ {
    u64 k, q;
  };
  for (KQ c : {KQ{11, 691}, KQ{13, 7}, KQ{25, 11}}) {
    u64 r = gcd_u64(c.k, c.q - 1);
    CHECK(count_S(x, c.k, c.q).count == count_S(x, r, c.q).count);
    CHECK(count_S(x, c.k, c.q, true).count == count_S(x, r, c.q, true).count);
  }
}

TEST_CASE("count_S for q = 2 matches the closed form") {
  for (u64 x : {10ULL, 1000ULL, 123457ULL, 10000000ULL}) {
    u64 c = count_S(x, 1, 2).count;
    CHECK(c == count_S_k2(x));
    CHECK(count_S(x, 1, 2, true).count == count_S_prime_k2(x));
    double main = (1.0 + 1.0 / std::sqrt(2.0)) * std::sqrt(static_cast<double>(x));
    CHECK(std::fabs(static_cast<double>(c) - main) <= 2 + std::log2(static_cast<double>(x)));
  }
}

TEST_CASE("count_S errors and thread independence") {
  CHECK_THROWS_AS(count_S(kOracleCountLimit + 1, 1, 3), CapacityError);
  CHECK_THROWS_AS(count_S(0, 1, 3), DomainError);
  CHECK_THROWS_AS(count_S(100, 1, 9), DomainError);
  unsigned saved = thread_count();
  set_thread_count(1);
  u64 a = count_S(20'000'000, 3, 7).count;
  set_thread_count(4);
  u64 b = count_S(20'000'000, 3, 7).count;
  set_thread_count(saved);
  CHECK(a == b);
}

TEST_CASE("non-divisibility indicator is multiplicative") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<u64> dist(1, 100000);
  int checked = 0;
  while (checked < 10000) {
    u64 m = dist(rng), n = dist(rng);
    if (gcd_u64(m, n) != 1) continue;
    for (u64 q : {3ULL, 7ULL}) {
      bool t_mn = sigma_k_mod(m * n, 1, q) != 0;
      bool t_m = sigma_k_mod(m, 1, q) != 0, t_n = sigma_k_mod(n, 1, q) != 0;
      CHECK(t_mn == (t_m && t_n));
    }
    ++checked;
  }
}

TEST_CASE("first-order trend for (k, q) = (1, 3)") {
  TrendReport t = fit_first_order({10000, 100000, 1000000, 10000000}, 1, 3);
  CHECK(t.h == 2);
  CHECK(t.points.size() == 4);
  CHECK(t.steps_toward_C >= 2);
  CHECK(std::fabs(t.points.back().rel_to_C) < 0.05);
  for (const auto& p : t.points) CHECK(p.count == count_S(p.x, 1, 3).count);
  // second-order diagnostic: (count - Landau) h log x/Landau against 1 - gamma, loosely
  CHECK(t.points.back().second_order == doctest::Approx(1.0 - t.gamma).epsilon(0.25));
}

TEST_CASE("first-order trend for (k, q) = (1, 5)") {
  TrendReport t = fit_first_order({10000, 100000, 1000000, 10000000}, 1, 5);
  CHECK(t.h == 4);
  CHECK(t.steps_toward_C >= 2);
  CHECK(std::fabs(t.points.back().rel_to_C) < 0.10);
  // the prime variant follows C' = (1 - 1/q) C
  TrendReport tp = fit_first_order({1000000, 10000000}, 1, 5, true);
  CHECK(tp.C == doctest::Approx(0.8 * t.C).epsilon(1e-14));
  CHECK(std::fabs(tp.points.back().rel_to_C) < 0.10);
}

TEST_CASE("fit_first_order dispatch") {
  CHECK_THROWS_AS(fit_first_order({1000}, 2, 7), DispatchError);  // h = 3
  CHECK_THROWS_AS(fit_first_order({}, 1, 3), DomainError);
}
