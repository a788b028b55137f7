#include "ekc/cuspforms.hpp"

#include <algorithm>

#include "ekc/errors.hpp"
#include "ekc/parallel.hpp"
#include "ekc/primesums.hpp"

namespace ekc {

namespace {

// prod (1 - x^m)^3 = sum_k (-1)^k (2k+1) x^{k(k+1)/2}
std::vector<std::pair<u64, i64>> jacobi_cube(u64 N) {
  std::vector<std::pair<u64, i64>> out;
  for (u64 k = 0; k * (k + 1) / 2 <= N; ++k)
    out.push_back({k * (k + 1) / 2, (k % 2 ? -1 : 1) * static_cast<i64>(2 * k + 1)});
  return out;
}

u32 to_residue(i64 c, u64 q) {
  i64 r = c % static_cast<i64>(q);
  return static_cast<u32>(r < 0 ? r + static_cast<i64>(q) : r);
}

void check_mod(u64 N, u64 q) {
  if (N < 1) throw DomainError("series: N must be at least 1");
  if (q < 2 || q >= (u64{1} << 32) || !is_prime(q)) throw DomainError("series: modulus must be a prime below 2^32");
  if (N > kModSeriesLimit) throw CapacityError("series: N exceeds the mod-q limit");
}

void check_exact(u64 N) {
  if (N < 1) throw DomainError("series: N must be at least 1");
  if (N > kExactSeriesLimit) throw CapacityError("series: exact mode limited to N <= 10^4");
}

void check_weight(int w) {
  if (!is_cusp_weight(w)) throw DomainError("weight must be one of 12, 16, 18, 20, 22, 26");
}

// count of Q and R factors in Delta Q^a R^b
std::pair<int, int> eisenstein_factors(int w) {
  switch (w) {
    case 12: return {0, 0};
    case 16: return {1, 0};
    case 18: return {0, 1};
    case 20: return {2, 0};
    case 22: return {1, 1};
    default: return {2, 1};
  }
}

std::vector<mpz_class> sigma_exact(unsigned k, u64 N) {
  std::vector<mpz_class> s(N + 1, 0);
  mpz_class dk;
  for (u64 d = 1; d <= N; ++d) {
    mpz_ui_pow_ui(dk.get_mpz_t(), d, k);
    for (u64 n = d; n <= N; n += d) s[n] += dk;
  }
  return s;
}

// 1 + c sum sigma_k(n) x^n
std::vector<mpz_class> eisenstein_exact(long c, unsigned k, u64 N) {
  auto s = sigma_exact(k, N);
  s[0] = 1;
  for (u64 n = 1; n <= N; ++n) s[n] *= c;
  return s;
}

std::vector<u32> eisenstein_mod(long c, unsigned k, u64 N, u64 q) {
  auto s = sigma_table_mod(k, N, q);
  s[0] = static_cast<u32>(1 % q);
  u32 cm = to_residue(c, q);
  for (u64 n = 1; n <= N; ++n) s[n] = static_cast<u32>(static_cast<u64>(s[n]) * cm % q);
  return s;
}

std::vector<mpz_class> mul_exact(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  const std::size_t n = a.size();
  std::vector<mpz_class> c(n);
  parallel_for(n, [&](std::size_t i) {
    mpz_class acc = 0;
    for (std::size_t j = 0; j <= i; ++j)
      if (sgn(a[j]) != 0) mpz_addmul(acc.get_mpz_t(), a[j].get_mpz_t(), b[i - j].get_mpz_t());
    c[i] = acc;
  });
  return c;
}

std::vector<u32> mul_mod(const std::vector<u32>& a, const std::vector<u32>& b, u64 q) {
  const std::size_t n = a.size();
  std::vector<u32> c(n);
  // each product is below 2^64; the running sum lives in 128 bits
  parallel_for(n, [&](std::size_t i) {
    unsigned __int128 acc = 0;
    for (std::size_t j = 0; j <= i; ++j) acc += static_cast<u64>(a[j]) * b[i - j];
    c[i] = static_cast<u32>(acc % q);
  });
  return c;
}

}  // namespace

bool is_cusp_weight(int w) { return w == 12 || w == 16 || w == 18 || w == 20 || w == 22 || w == 26; }

SeriesExact eta24_exact(u64 N) {
  check_exact(N);
  auto cube = jacobi_cube(N);
  // P = prod (1 - x^m)^24 up to x^{N-1}, built as eight sparse products
  std::vector<mpz_class> P(N, 0);
  P[0] = 1;
  for (int t = 0; t < 8; ++t) {
    std::vector<mpz_class> next(N, 0);
    parallel_for(N, [&](std::size_t i) {
      mpz_class acc = 0;
      for (const auto& [e, c] : cube) {
        if (e > i) break;
        if (sgn(P[i - e]) == 0) continue;
        if (c > 0)
          mpz_addmul_ui(acc.get_mpz_t(), P[i - e].get_mpz_t(), static_cast<unsigned long>(c));
        else
          mpz_submul_ui(acc.get_mpz_t(), P[i - e].get_mpz_t(), static_cast<unsigned long>(-c));
      }
      next[i] = acc;
    });
    P.swap(next);
  }
  SeriesExact s;
  s.coeffs.assign(N + 1, 0);
  for (u64 n = 1; n <= N; ++n) s.coeffs[n] = P[n - 1];
  return s;
}

SeriesModQ eta24_mod(u64 N, u64 q) {
  check_mod(N, q);
  auto cube = jacobi_cube(N);
  std::vector<std::pair<u64, u32>> cm;
  for (const auto& [e, c] : cube) cm.push_back({e, to_residue(c, q)});
  std::vector<u32> P(N, 0);
  P[0] = static_cast<u32>(1 % q);
  for (int t = 0; t < 8; ++t) {
    std::vector<u32> next(N, 0);
    parallel_for(N, [&](std::size_t i) {
      unsigned __int128 acc = 0;
      for (const auto& [e, c] : cm) {
        if (e > i) break;
        acc += static_cast<u64>(P[i - e]) * c;
      }
      next[i] = static_cast<u32>(acc % q);
    });
    P.swap(next);
  }
  SeriesModQ s;
  s.q = q;
  s.coeffs.assign(N + 1, 0);
  for (u64 n = 1; n <= N; ++n) s.coeffs[n] = P[n - 1];
  return s;
}

SeriesExact tau_w_series_exact(int w, u64 N) {
  check_weight(w);
  SeriesExact s = eta24_exact(N);
  auto [a, b] = eisenstein_factors(w);
  if (a > 0) {
    auto Q = eisenstein_exact(240, 3, N);
    for (int i = 0; i < a; ++i) s.coeffs = mul_exact(Q, s.coeffs);
  }
  if (b > 0) s.coeffs = mul_exact(eisenstein_exact(-504, 5, N), s.coeffs);
  return s;
}

SeriesModQ tau_w_series_mod(int w, u64 N, u64 q) {
  check_weight(w);
  SeriesModQ s = eta24_mod(N, q);
  auto [a, b] = eisenstein_factors(w);
  if (a > 0) {
    auto Q = eisenstein_mod(240, 3, N, q);
    for (int i = 0; i < a; ++i) s.coeffs = mul_mod(Q, s.coeffs, q);
  }
  if (b > 0) s.coeffs = mul_mod(eisenstein_mod(-504, 5, N, q), s.coeffs, q);
  return s;
}

SeriesModQ reduce(const SeriesExact& s, u64 q) {
  if (q < 2 || q >= (u64{1} << 32)) throw DomainError("reduce: modulus out of range");
  SeriesModQ r;
  r.q = q;
  r.coeffs.resize(s.coeffs.size());
  mpz_class t;
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    mpz_fdiv_r_ui(t.get_mpz_t(), s.coeffs[i].get_mpz_t(), static_cast<unsigned long>(q));
    r.coeffs[i] = static_cast<u32>(t.get_ui());
  }
  return r;
}

std::vector<u32> sigma_table_mod(u64 k, u64 N, u64 q) {
  if (q < 2) throw DomainError("sigma_table_mod: modulus must be at least 2");
  std::vector<u64> s(N + 1, 0);
  for (u64 d = 1; d <= N; ++d) {
    u64 dk = powmod(d % q, k, q);
    if (dk == 0) continue;
    for (u64 n = d; n <= N; n += d) {
      s[n] += dk;
      if (s[n] >= q) s[n] -= q;
    }
  }
  return {s.begin(), s.end()};
}

const std::vector<TypeIRow>& type_i_rows() {
  static const std::vector<TypeIRow> rows = {
      // q > w, v = 0
      {12, 691, 0}, {16, 3617, 0}, {18, 43867, 0}, {20, 283, 0}, {20, 617, 0},
      {22, 131, 0}, {22, 593, 0}, {26, 657931, 0},
      // q < w
      {12, 2, 0}, {12, 3, 0}, {12, 5, 1}, {12, 7, 1},
      {16, 2, 0}, {16, 3, 0}, {16, 5, 1}, {16, 7, 1}, {16, 11, 1},
      {18, 2, 0}, {18, 3, 0}, {18, 5, 2}, {18, 7, 1}, {18, 11, 1}, {18, 13, 1},
      {20, 2, 0}, {20, 3, 0}, {20, 5, 1}, {20, 7, 2}, {20, 11, 1}, {20, 13, 1},
      {22, 2, 0}, {22, 3, 0}, {22, 5, 2}, {22, 7, 1}, {22, 13, 1}, {22, 17, 1},
      {26, 2, 0}, {26, 3, 0}, {26, 5, 2}, {26, 7, 2}, {26, 11, 1}, {26, 17, 1}, {26, 19, 1},
  };
  return rows;
}

std::optional<int> type_i_v(int w, u64 q) {
  for (const auto& r : type_i_rows())
    if (r.w == w && r.q == q) return r.v;
  return std::nullopt;
}

u64 type_i_r(int w, u64 q) {
  auto v = type_i_v(w, q);
  if (!v) throw DomainError("type_i_r: (w, q) is not an exceptional pair of type (i)");
  return gcd_u64(static_cast<u64>(w - 1 - 2 * *v), q - 1);
}

TypeIReport verify_type_i(int w, u64 q, int v, u64 N) {
  check_weight(w);
  auto tv = type_i_v(w, q);
  if (!tv) throw DomainError("verify_type_i: (w, q) is not exceptional of type (i)");
  if (*tv != v) throw DomainError("verify_type_i: v does not match the exceptional-prime table");
  if (N < q + 10) throw DomainError("verify_type_i: N must be at least q + 10");
  TypeIReport rep;
  rep.w = w;
  rep.q = q;
  rep.v = v;
  rep.r = type_i_r(w, q);
  rep.N = N;
  SeriesModQ tau = tau_w_series_mod(w, N, q);
  rep.tau_q = tau.coeffs[q];
  const u64 k = static_cast<u64>(w - 1 - 2 * v);
  auto sig = sigma_table_mod(k, N, q);
  auto sig_r = sigma_table_mod(rep.r, N, q);
  const bool small = q < static_cast<u64>(w);
  const u64 lift = small ? static_cast<u64>(std::max(1, v)) : 0;
  for (u64 n = 1; n <= N; ++n) {
    const u64 t = tau.coeffs[n];
    const u64 nm = n % q;
    if (nm != 0) {
      u64 rhs = mulmod(powmod(nm, static_cast<u64>(v), q), sig[n], q);
      ++rep.coprime_checked;
      if (t != rhs) rep.violations.push_back({n, t, rhs, "coprime congruence"});
    }
    const u64 pw = powmod(nm, lift, q);
    u64 rhs = mulmod(pw, sig[n], q);
    ++rep.all_checked;
    if (t != rhs) rep.violations.push_back({n, t, rhs, "lifted congruence"});
    u64 div_r = mulmod(pw, sig_r[n], q);
    if ((t == 0) != (div_r == 0)) rep.violations.push_back({n, t, div_r, "divisibility with sigma_r"});
  }
  return rep;
}

u64 typeii_power_residue(int row, u64 e, u64 q) {
  switch (row) {
    case 0:
      return 1 % q;
    case 1:
      return e % 2 == 0 ? 1 % q : 0;
    case 2: {
      static const int cyc[3] = {1, -1, 0};
      int c = cyc[e % 3];
      return c < 0 ? q - 1 : static_cast<u64>(c);
    }
    case 3:
      return (e + 1) % q;
  }
  throw DomainError("typeii_power_residue: row must be 0..3");
}

CuspTypeIIReport verify_type_ii(int w, u64 q, u64 N) {
  if (!((w == 12 && q == 23) || (w == 16 && q == 31)))
    throw DomainError("verify_type_ii: supported pairs are (12, 23) and (16, 31)");
  if (N < 2) throw DomainError("verify_type_ii: N must be at least 2");
  CuspTypeIIReport rep;
  rep.w = w;
  rep.q = q;
  rep.N = N;
  SeriesModQ tau = tau_w_series_mod(w, N, q);
  for (u64 p : sieve_primes(N)) {
    int row = 0;
    if (p != q) {
      TypeIIClass c = classify_prime_typeii(p, q);
      row = c == TypeIIClass::S1 ? 1 : c == TypeIIClass::S2 ? 2 : 3;
      ++rep.class_counts[row - 1];
    }
    ++rep.primes_checked;
    const u64 t1 = tau.coeffs[p];
    const u64 want1 = typeii_power_residue(row, 1, q);
    if (t1 != want1) rep.violations.push_back({p, t1, want1, "tau(p) class value"});
    // tau(p^{e+1}) = tau(p) tau(p^e) - p^{w-1} tau(p^{e-1}) mod q
    const u64 pw = powmod(p % q, static_cast<u64>(w - 1), q);
    u64 prev = 1 % q, cur = t1;
    u64 pe = p;
    for (u64 e = 1;; ++e) {
      ++rep.prime_powers_checked;
      const u64 want = typeii_power_residue(row, e, q);
      if (tau.coeffs[pe] != want) rep.violations.push_back({pe, tau.coeffs[pe], want, "tau(p^e) table"});
      if (cur != want) rep.violations.push_back({pe, cur, want, "Hecke recurrence"});
      if (pe > N / p) break;
      pe *= p;
      u64 next = (mulmod(t1, cur, q) + q - mulmod(pw, prev, q)) % q;
      prev = cur;
      cur = next;
    }
  }
  return rep;
}

HeckeReport check_hecke_and_deligne(int w, u64 N_exact) {
  check_weight(w);
  check_exact(N_exact);
  HeckeReport rep;
  rep.w = w;
  rep.N = N_exact;
  const u64 N = N_exact;
  SeriesExact s = tau_w_series_exact(w, N);
  const auto& t = s.coeffs;
  for (u64 m = 2; m <= N; ++m)
    for (u64 n = m + 1; m * n <= N; ++n) {
      if (gcd_u64(m, n) != 1) continue;
      ++rep.coprime_pairs;
      if (t[m * n] != t[m] * t[n])
        rep.failures.push_back("multiplicativity at " + std::to_string(m) + " * " + std::to_string(n));
    }
  mpz_class pw, bound;
  for (u64 p : sieve_primes(N)) {
    mpz_ui_pow_ui(pw.get_mpz_t(), p, static_cast<unsigned long>(w - 1));
    // |tau(p)| <= 2 p^{(w-1)/2}  <=>  tau(p)^2 <= 4 p^{w-1}
    ++rep.deligne_checks;
    if (t[p] * t[p] > 4 * pw) rep.failures.push_back("Deligne bound at " + std::to_string(p));
    u64 prev = 1, cur = p;
    while (cur <= N / p) {
      u64 next = cur * p;
      ++rep.recurrence_checks;
      if (t[next] != t[p] * t[cur] - pw * t[prev])
        rep.failures.push_back("recurrence at " + std::to_string(next));
      prev = cur;
      cur = next;
    }
  }
  return rep;
}

}  // namespace ekc
