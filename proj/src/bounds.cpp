#include "ekc/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "ekc/errors.hpp"
#include "ekc/numeric.hpp"
#include "ekc/parallel.hpp"

namespace ekc {

namespace {

constexpr u64 kValidityStart = 10000;

// true when h has an odd prime factor p with 2p < alpha
bool has_small_odd_factor(u64 h, double alpha) {
  while (h % 2 == 0) h /= 2;
  for (u64 d = 3; 2.0 * static_cast<double>(d) < alpha && d <= h; d += 2)
    if (h % d == 0) return true;
  return false;
}

}  // namespace

int SBound::count() const { return static_cast<int>(std::count(used.begin(), used.end(), true)); }

BoundParams default_params(u64 q) {
  BoundParams b;
  double lq = std::log(static_cast<double>(q));
  b.alpha = std::min(10.0 * lq, static_cast<double>(q - 1));
  b.D = 3.125 * std::min(2.0 * kPi, lq / 2.0);
  b.log_y = 1.44 * b.R * lq * lq;
  b.W = std::sqrt(b.log_y / b.R);
  return b;
}

SBound upper_bound_S(u64 m, u64 q, double alpha, bool uniform) {
  if (q < 3 || !is_prime(q)) throw DomainError("upper_bound_S: q must be an odd prime");
  if (m == 0 || ((q - 1) / 2) % m != 0 || (q - 1) % (2 * m) != 0)
    throw DomainError("upper_bound_S: m must divide (q-1)/2");
  if (!(alpha >= 3.0 && alpha <= static_cast<double>(q - 1)))
    throw DomainError("upper_bound_S: alpha must lie in [3, q-1]");
  const u64 h = (q - 1) / m;
  const double qd = static_cast<double>(q), md = static_cast<double>(m);
  const double lq = std::log(qd), lq1 = std::log(qd - 1);
  const double nu2 = static_cast<double>(std::countr_zero(h));
  const double cap = std::log(alpha) / std::log(4.0);
  const double alpha1 = uniform ? cap : std::min((nu2 - 1.0) / 2.0, cap);
  SBound b;
  b.terms[0] = alpha1 * lq / std::expm1(lq1 / md);
  b.terms[1] = 8.0 * std::log(md * alpha * alpha) / (7.0 * std::exp(lq / md));
  b.terms[2] = 1.053 / (qd - 2.1);
  b.terms[3] = qd * qd * kLog2 / (2.0 * std::expm1(alpha / 2.0 * kLog2));
  b.terms[4] = lq / std::expm1(2.0 * lq1 / md);
  b.used = {true, uniform || has_small_odd_factor(h, alpha), true, true, m != 1};
  CompensatedSum s;
  for (int i = 0; i < 5; ++i)
    if (b.used[i]) s.add(b.terms[i]);
  b.total = s.value();
  return b;
}

double tail_bound_primesum(double x) {
  if (!(x >= 3.0)) throw DomainError("tail_bound_primesum: x must be at least 3");
  return 1.053 / x;
}

namespace {

double lower_bound_unchecked(u64 r, u64 q, const BoundParams& p) {
  const double qd = static_cast<double>(q), lq = std::log(qd), sq = std::sqrt(qd);
  double t1 = p.log_y / (qd - 1);
  double t2 = 1.015 / (p.D * sq) * std::exp(-p.D * p.log_y / (sq * lq * lq)) * lq * lq;
  double t3 = 8.0 / 9.0 * (2 * p.R * p.W * p.W + (4 * p.R + 1) * p.W + 4 * p.R) * std::exp(-p.W);
  double S = upper_bound_S(r, q, p.alpha, p.uniform_S).total;
  return kEulerGamma - static_cast<double>(r) * (t1 + t2 + t3) - S;
}

}  // namespace

double gamma_lower_bound(u64 r, u64 q, const BoundParams& p) {
  if (q < kValidityStart) throw DomainError("gamma_lower_bound: only valid for q >= 10000");
  if (!is_prime(q)) throw DomainError("gamma_lower_bound: q must be prime");
  if (r == 0 || (q - 1) % (2 * r) != 0) throw DomainError("gamma_lower_bound: need q = 1 mod 2r");
  return lower_bound_unchecked(r, q, p);
}

double gamma_lower_bound(u64 r, u64 q) { return gamma_lower_bound(r, q, default_params(q)); }

Q0Result find_q0(u64 r, u64 q_max) {
  if (r == 0) throw DomainError("find_q0: r must be positive");
  if (q_max < kValidityStart) throw DomainError("find_q0: q_max must be at least 10000");
  if (q_max >= (u64{1} << 40)) throw CapacityError("find_q0: q_max too large");
  const u64 step = 2 * r;
  u64 root = static_cast<u64>(std::sqrt(static_cast<double>(q_max))) + 1;
  auto base = sieve_primes(std::max<u64>(root, 3));
  const u64 width = u64{1} << 22;
  const u64 lo0 = kValidityStart;
  const u64 chunks = (q_max - lo0) / width + 1;
  std::vector<u64> worst(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    u64 lo = lo0 + c * width;
    u64 hi = std::min(q_max + 1, lo + width);  // [lo, hi)
    if (lo >= hi) return;
    std::vector<unsigned char> comp(hi - lo, 0);
    for (u64 p : base) {
      if (p * p >= hi) break;
      u64 start = std::max(p * p, (lo + p - 1) / p * p);
      for (u64 n = start; n < hi; n += p) comp[n - lo] = 1;
    }
    // first admissible n >= lo with n = 1 mod 2r
    u64 n = lo + (step - (lo - 1) % step) % step;
    u64 w = 0;
    for (; n < hi; n += step) {
      if (comp[n - lo]) continue;
      if (lower_bound_unchecked(r, n, default_params(n)) <= 0.5) w = n;
    }
    worst[c] = w;
  });
  Q0Result res;
  res.largest_failing = *std::max_element(worst.begin(), worst.end());
  u64 start = res.largest_failing ? res.largest_failing + step : lo0 + (step - (lo0 - 1) % step) % step;
  for (u64 n = start; n <= q_max; n += step) {
    if (is_prime(n)) {
      res.found = true;
      res.q0 = n;
      break;
    }
  }
  return res;
}

}  // namespace ekc
