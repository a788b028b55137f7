#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ekc/errors.hpp"
#include "ekc/numeric.hpp"
#include "ekc/shanks.hpp"

using namespace ekc;

namespace {

struct Direct {
  double log_product = 0;  // sum over p = 3 mod 4 of -log(1 - p^-2)
  double prime_sum = 0;    // sum over p = 3 mod 4 of log p/(p^2 - 1)
};

// plain truncated sums over a sieve to 10^8, computed once
const Direct& direct_1e8() {
  static const Direct d = [] {
    CompensatedSum a, b;
    PrimeSieve sieve(100'000'000);
    u64 p;
    while (sieve.next(p)) {
      if (p % 4 != 3) continue;
      double pd = static_cast<double>(p);
      double x = 1.0 / (pd * pd);
      a.add(-std::log1p(-x));
      b.add(std::log(pd) * x / (1.0 - x));
    }
    return Direct{a.value(), b.value()};
  }();
  return d;
}

}  // namespace

TEST_CASE("Landau-Ramanujan constant at J = 8") {
  auto r = landau_ramanujan_K({8, 8});
  CHECK(std::fabs(r.K - 0.7642236535892206) <= 1e-12);
  CHECK(r.err < 1e-14);
  CHECK(r.log_K == doctest::Approx(std::log(r.K)).epsilon(1e-15));
}

TEST_CASE("K ladder depth consistency") {
  auto r4 = landau_ramanujan_K({4, 8});
  auto r8 = landau_ramanujan_K({8, 8});
  CHECK(std::fabs(r4.K - r8.K) <= r4.err + r8.err + shanks_residual_estimate(4));
  for (unsigned J = 1; J <= 16; ++J) {
    auto r = landau_ramanujan_K({J, 8});
    CHECK_MESSAGE(std::fabs(r.K - 0.7642236535892206) <= 1e-12, "J = " << J);
    CHECK(r.residual <= shanks_residual_estimate(J));
  }
}

TEST_CASE("K against the truncated Euler product at 10^8") {
  double direct = std::exp(-0.5 * std::log(2.0) + 0.5 * direct_1e8().log_product);
  CHECK(std::fabs(landau_ramanujan_K().K - direct) <= 1e-7);
}

TEST_CASE("Shanks c: ladder depths agree") {
  auto c6 = shanks_c({8, 6});
  auto c8 = shanks_c({8, 8});
  CHECK(std::fabs(c6.c - c8.c) <= 1e-14);
  CHECK(c8.err < 1e-13);
  for (unsigned J = 1; J <= 16; ++J) {
    auto r = shanks_c({8, J});
    CHECK_MESSAGE(r.residual <= shanks_residual_estimate(J), "J = " << J);
  }
}

TEST_CASE("Shanks c against the direct sieve sum at 10^8") {
  auto c = shanks_c();
  CHECK(std::fabs(c.prime_sum - direct_1e8().prime_sum) <= 1e-7);
  double direct_c = 0.5 + std::log(2.0) / 4 - kEulerGamma / 4 - c.logderiv_at1 / 4 + direct_1e8().prime_sum / 2;
  CHECK(std::fabs(c.c - direct_c) <= 1e-7);
}

TEST_CASE("Shanks c: definitions and the two L'/L routes") {
  auto c = shanks_c();
  CHECK(c.gamma_SB + 2 * c.c == 1.0);
  ShanksConfig s;
  s.stieltjes_route = true;
  auto cs = shanks_c(s);
  CHECK(std::fabs(cs.c - c.c) < 1e-10);
  CHECK(std::fabs(cs.logderiv_at1 - c.logderiv_at1) < 4e-10);
}

TEST_CASE("configuration limits") {
  CHECK_THROWS_AS(landau_ramanujan_K({0, 8}), DomainError);
  CHECK_THROWS_AS(landau_ramanujan_K({17, 8}), DomainError);
  CHECK_THROWS_AS(shanks_c({8, 0}), DomainError);
  CHECK_THROWS_AS(shanks_c({8, 17}), DomainError);
}
