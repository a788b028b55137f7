#include "ekc/primesums.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "ekc/errors.hpp"
#include "ekc/lfunctions.hpp"
#include "ekc/numeric.hpp"
#include "ekc/parallel.hpp"

namespace ekc {

namespace {

constexpr double kThetaConst = 1.053;       // sum_{p > x} log p/(p^2 - 1) <= 1.053/x
constexpr std::size_t kChunk = 1u << 15;    // primes per reduction chunk
constexpr double kUnderflowExponent = 745;  // exp(-745) is below the smallest subnormal

// log p / (p^e - 1) with lp = log p
inline double lp_over(double lp, double e) {
  double x = e * lp;
  if (x > kUnderflowExponent) return 0.0;
  return lp / std::expm1(x);
}

// log(1 - p^{-e})
inline double log1m_pow(double lp, double e) {
  double x = e * lp;
  if (x > kUnderflowExponent) return 0.0;
  return std::log1p(-std::exp(-x));
}

std::shared_ptr<const std::vector<u32>> primes_upto(u64 P, std::size_t& count) {
  if (P >= (u64{1} << 32)) throw CapacityError("prime sums: truncation P must be below 2^32");
  auto ps = cached_primes(P);
  count = static_cast<std::size_t>(std::upper_bound(ps->begin(), ps->end(), static_cast<u32>(P)) - ps->begin());
  return ps;
}

// Runs body(begin, end, chunk_index) over fixed chunks of the first n primes.
template <class Body>
void for_chunks(std::size_t n, Body&& body) {
  std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) { body(c * kChunk, std::min(n, (c + 1) * kChunk), c); });
}

// ---- disk cache ----

std::mutex g_cache_mu;
std::string g_cache_dir;

using CacheKey = std::tuple<u64, u64, u64, std::string>;

std::string cache_file() { return (std::filesystem::path(g_cache_dir) / "primesums.cache").string(); }

std::string hexfloat(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

std::map<CacheKey, std::pair<double, double>> load_cache_locked() {
  std::map<CacheKey, std::pair<double, double>> out;
  std::ifstream in(cache_file());
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto b = item.find_first_not_of(' ');
      f.push_back(b == std::string::npos ? "" : item.substr(b));
    }
    if (f.size() != 7 || f[0] != "schema=1") continue;
    try {
      CacheKey k{std::stoull(f[1]), std::stoull(f[2]), std::stoull(f[3]), f[4]};
      out[k] = {std::strtod(f[5].c_str(), nullptr), std::strtod(f[6].c_str(), nullptr)};
    } catch (const std::exception&) {
      continue;  // malformed row
    }
  }
  return out;
}

bool cache_lookup(u64 q, u64 m, u64 P, const std::vector<std::string>& families,
                  std::vector<std::pair<double, double>>& out) {
  std::lock_guard<std::mutex> lock(g_cache_mu);
  if (g_cache_dir.empty()) return false;
  auto rows = load_cache_locked();
  out.clear();
  for (auto& fam : families) {
    auto it = rows.find({q, m, P, fam});
    if (it == rows.end()) return false;
    out.push_back(it->second);
  }
  return true;
}

void cache_store(u64 q, u64 m, u64 P, const std::vector<std::string>& families,
                 const std::vector<std::pair<double, double>>& vals) {
  std::lock_guard<std::mutex> lock(g_cache_mu);
  if (g_cache_dir.empty()) return;
  std::filesystem::create_directories(g_cache_dir);
  std::ofstream out(cache_file(), std::ios::app);
  for (std::size_t i = 0; i < families.size(); ++i)
    out << "schema=1, " << q << ", " << m << ", " << P << ", " << families[i] << ", " << hexfloat(vals[i].first)
        << ", " << hexfloat(vals[i].second) << "\n";
}

const std::vector<std::string> kProfileFamilies = {"S", "log_c", "log_D", "dlog_D", "count"};

struct Acc {
  CompensatedSum S, log_c, log_D, dlog_D;
  void merge(const Acc& o) {
    S.merge(o.S);
    log_c.merge(o.log_c);
    log_D.merge(o.log_D);
    dlog_D.merge(o.dlog_D);
  }
};

void check_P(u64 q, u64 P) {
  if (P < q + 2) throw DomainError("prime sums: truncation P must be at least q + 2");
}

}  // namespace

void set_sum_cache_dir(const std::string& dir) {
  std::lock_guard<std::mutex> lock(g_cache_mu);
  g_cache_dir = dir;
}

std::string sum_cache_dir() {
  std::lock_guard<std::mutex> lock(g_cache_mu);
  return g_cache_dir;
}

std::vector<ProfileSums> profile_sums(u64 q, const std::vector<u64>& ms, u64 P) {
  if (q < 3 || !is_prime(q)) throw DomainError("profile_sums: q must be an odd prime");
  check_P(q, P);
  for (u64 m : ms)
    if (m == 0 || (q - 1) % m != 0) throw DomainError("profile_sums: m must divide q - 1");

  std::vector<ProfileSums> out(ms.size());
  std::vector<std::size_t> todo;
  auto ord = order_table(q);
  // class counts of g = 2, 3 and 4 feed the heuristic tail
  std::vector<std::vector<u32>> gtab(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    u64 m = ms[i];
    out[i].m = m;
    out[i].h = (q - 1) / m;
    gtab[i].assign(q, 0);
    for (u64 a = 1; a < q; ++a) gtab[i][a] = static_cast<u32>(ord[a] / gcd_u64(ord[a], m));
    std::vector<std::pair<double, double>> hit;
    if (cache_lookup(q, m, P, kProfileFamilies, hit)) {
      PrimeSumResult* rs[] = {&out[i].S, &out[i].log_c, &out[i].log_D, &out[i].dlog_D};
      for (int f = 0; f < 4; ++f) {
        rs[f]->value = hit[f].first;
        rs[f]->tail_bound = hit[f].second;
      }
      for (auto* r : rs) {
        r->truncation_P = P;
        r->terms_used = static_cast<u64>(hit[4].first);
      }
    } else {
      todo.push_back(i);
    }
  }

  if (!todo.empty()) {
    std::size_t n = 0;
    auto ps = primes_upto(P, n);
    std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::vector<Acc>> part(chunks, std::vector<Acc>(todo.size()));
    const double qd = static_cast<double>(q);
    for_chunks(n, [&](std::size_t b, std::size_t e, std::size_t c) {
      auto& acc = part[c];
      for (std::size_t idx = b; idx < e; ++idx) {
        u64 p = (*ps)[idx];
        if (p == q) continue;
        double lp = std::log(static_cast<double>(p));
        u64 a = p % q;
        for (std::size_t t = 0; t < todo.size(); ++t) {
          u64 g = gtab[todo[t]][a];
          Acc& A = acc[t];
          double gd = static_cast<double>(g);
          if (g == 2) {
            A.S.add(lp_over(lp, 2));
            A.log_c.add(-0.5 * log1m_pow(lp, 2));
            continue;
          }
          double mu = g == 1 ? qd : gd;
          double s_term = -(mu - 1) * lp_over(lp, mu - 1) + mu * lp_over(lp, mu);
          double c_term = log1m_pow(lp, mu - 1) - log1m_pow(lp, mu);
          A.log_D.add(c_term);
          A.dlog_D.add(-s_term);
          if (g >= 4 && g % 2 == 0) {
            double half = 0.5 * gd * lp;
            s_term += half > kUnderflowExponent ? 0.0 : lp / (2.0 * std::sinh(half));
            c_term += half > kUnderflowExponent
                          ? 0.0
                          : (std::log1p(std::exp(-half)) - std::log1p(-std::exp(-half))) / gd;
          }
          A.S.add(s_term);
          A.log_c.add(c_term);
        }
      }
    });
    u64 terms = n - ((q <= P) ? 1 : 0);
    const double Pd = static_cast<double>(P);
    for (std::size_t t = 0; t < todo.size(); ++t) {
      Acc total;
      for (std::size_t c = 0; c < chunks; ++c) total.merge(part[c][t]);
      ProfileSums& ps_out = out[todo[t]];
      double cS = ps_out.h % 3 == 0 ? 2.0 : 1.0;
      PrimeSumResult* rs[] = {&ps_out.S, &ps_out.log_c, &ps_out.log_D, &ps_out.dlog_D};
      double vals[] = {total.S.value(), total.log_c.value(), total.log_D.value(), total.dlog_D.value()};
      double tails[] = {cS * kThetaConst / Pd, 2.0 / Pd, 2.0 / Pd, 2.0 * kThetaConst / Pd};
      for (int f = 0; f < 4; ++f) {
        rs[f]->value = vals[f];
        rs[f]->tail_bound = tails[f];
        rs[f]->truncation_P = P;
        rs[f]->terms_used = terms;
      }
      std::vector<std::pair<double, double>> row;
      for (int f = 0; f < 4; ++f) row.push_back({vals[f], tails[f]});
      row.push_back({static_cast<double>(terms), 0.0});
      cache_store(q, ps_out.m, P, kProfileFamilies, row);
    }
  }

  // heuristic tails: weight the all-prime bound by the density of classes whose terms are O(p^-2)
  for (std::size_t i = 0; i < ms.size(); ++i) {
    double w2 = 0, w3 = 0, w4 = 0;
    for (u64 a = 1; a < q; ++a) {
      u32 g = gtab[i][a];
      w2 += g == 2;
      w3 += g == 3;
      w4 += g == 4;
    }
    double dens = (w2 + 2.0 * w3 + w4) / static_cast<double>(q - 1);
    double dens_c = (0.5 * w2 + w3 + 0.5 * w4) / static_cast<double>(q - 1);
    out[i].S.heuristic_tail = kThetaConst * dens / static_cast<double>(P);
    out[i].log_c.heuristic_tail = 2.0 * dens_c / static_cast<double>(P);
    out[i].log_D.heuristic_tail = out[i].log_D.tail_bound * (w3 / static_cast<double>(q - 1));
    out[i].dlog_D.heuristic_tail = out[i].dlog_D.tail_bound * (w3 / static_cast<double>(q - 1));
  }
  return out;
}

i64 quadratic_discriminant(u64 q) {
  if (q < 3 || !is_prime(q)) throw DomainError("quadratic_discriminant: q must be an odd prime");
  return q % 4 == 1 ? static_cast<i64>(q) : -static_cast<i64>(q);
}

namespace {

struct QuadChar {
  std::vector<int> values;  // chi_D(n) for n mod |D| (mod 4 when D = -4)
  std::vector<u64> divisors;
};

QuadChar quad_char(i64 D) {
  if (D == -4) return {chi_minus4_values(), {2}};
  u64 q = static_cast<u64>(D < 0 ? -D : D);
  if (q < 3 || !is_prime(q) || D != quadratic_discriminant(q))
    throw DomainError("accel_quadratic_sums: D must be -4 or q* for an odd prime q");
  return {legendre_values(q), {q}};
}

// B(k) = sum over p | D of log p/(p^k - 1)
double divisor_sum(const QuadChar& c, double k) {
  double s = 0;
  for (u64 p : c.divisors) s += lp_over(std::log(static_cast<double>(p)), k);
  return s;
}

double direct_quadratic_sum(const QuadChar& c, int sign, double K, u64 P) {
  std::size_t n = 0;
  auto ps = primes_upto(P, n);
  const u64 N = c.values.size();
  std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<CompensatedSum> part(chunks);
  for_chunks(n, [&](std::size_t b, std::size_t e, std::size_t ci) {
    for (std::size_t i = b; i < e; ++i) {
      u64 p = (*ps)[i];
      double lp = std::log(static_cast<double>(p));
      if (K * lp > kUnderflowExponent) break;
      if (c.values[p % N] == sign) part[ci].add(lp_over(lp, K));
    }
  });
  CompensatedSum total;
  for (auto& s : part) total.merge(s);
  return total.value();
}

}  // namespace

PrimeSumResult accel_quadratic_sums(i64 D, int sign, u64 k, unsigned levels, u64 P) {
  if (sign != 1 && sign != -1) throw DomainError("accel_quadratic_sums: sign must be +1 or -1");
  if (k < 2) throw DomainError("accel_quadratic_sums: k must be at least 2");
  if (levels > 40) throw DomainError("accel_quadratic_sums: too many levels");
  QuadChar c = quad_char(D);
  CompensatedSum acc;
  double err = 0;
  double kk = static_cast<double>(k);
  for (unsigned j = 0; j < levels; ++j) {
    double L = real_character_logderiv(kk, c.values);
    double Z = zeta_logderiv(kk);
    double corr, mag = std::fabs(L) + std::fabs(Z);
    if (sign == -1) {
      corr = 0.5 * (L - Z - divisor_sum(c, kk));
    } else {
      double Z2 = zeta_logderiv(2 * kk);
      double Bplus = 0;
      for (u64 p : c.divisors) {
        double lp = std::log(static_cast<double>(p));
        Bplus += kk * lp > kUnderflowExponent ? 0.0 : lp / (std::exp(kk * lp) + 1.0);
      }
      corr = -0.5 * (L + Z - 2.0 * Z2 + Bplus);
      mag += 2.0 * std::fabs(Z2);
    }
    acc.add(corr);
    // L'/L and zeta'/zeta carry a few ulps of relative error each
    err += 1e-14 * mag + 1e-16;
    kk *= 2;
  }
  PrimeSumResult r;
  acc.add(direct_quadratic_sum(c, sign, kk, P));
  r.value = acc.value();
  double Pd = static_cast<double>(P);
  r.tail_bound = 2.0 * kThetaConst * std::exp(-(kk - 1.0) * std::log(Pd)) + err;
  r.heuristic_tail = 0.5 * r.tail_bound;
  r.truncation_P = P;
  std::size_t n = 0;
  primes_upto(P, n);
  r.terms_used = n;
  return r;
}

PrimeSumResult S_mq(const SumSpec& spec) {
  u64 q = spec.q, m = spec.m;
  if (q < 3 || !is_prime(q)) throw DomainError("S_mq: q must be an odd prime");
  if (m == 0 || (q - 1) % m != 0) throw DomainError("S_mq: m must divide q - 1");
  if (((q - 1) / m) % 2 != 0) throw DomainError("S_mq: (q - 1)/m must be even");
  check_P(q, spec.truncation_P);
  if (spec.accel_levels > 0 && 2 * m == q - 1) {
    // g_p = 1 iff (p|q) = 1 and g_p = 2 iff (p|q) = -1
    i64 D = quadratic_discriminant(q);
    unsigned J = spec.accel_levels;
    u64 P = spec.truncation_P;
    auto plus_lo = accel_quadratic_sums(D, 1, q - 1, J, P);
    auto plus_hi = accel_quadratic_sums(D, 1, q, J, P);
    auto minus = accel_quadratic_sums(D, -1, 2, J, P);
    double qd = static_cast<double>(q);
    CompensatedSum v;
    v.add(-(qd - 1) * plus_lo.value);
    v.add(qd * plus_hi.value);
    v.add(minus.value);
    PrimeSumResult r;
    r.value = v.value();
    r.tail_bound = (qd - 1) * plus_lo.tail_bound + qd * plus_hi.tail_bound + minus.tail_bound;
    r.heuristic_tail = (qd - 1) * plus_lo.heuristic_tail + qd * plus_hi.heuristic_tail + minus.heuristic_tail;
    r.truncation_P = P;
    r.terms_used = minus.terms_used;
    return r;
  }
  return profile_sums(q, {m}, spec.truncation_P)[0].S;
}

PrimeSumResult local_factor_c(u64 r, u64 q, u64 P) {
  if (q < 3 || !is_prime(q)) throw DomainError("local_factor_c: q must be an odd prime");
  if (r == 0 || (q - 1) % r != 0 || ((q - 1) / r) % 2 != 0)
    throw DomainError("local_factor_c: (q - 1)/r must be an even integer");
  return profile_sums(q, {r}, P)[0].log_c;
}

std::string to_string(TypeIIClass c) {
  switch (c) {
    case TypeIIClass::S1:
      return "S1";
    case TypeIIClass::S2:
      return "S2";
    case TypeIIClass::S3:
      return "S3";
  }
  return "?";
}

BinaryForm reduce_form(BinaryForm f) {
  if (f.a <= 0 || f.c <= 0 || f.b * f.b - 4 * f.a * f.c >= 0)
    throw DomainError("reduce_form: form must be positive definite");
  const __int128 disc = static_cast<__int128>(f.b) * f.b - static_cast<__int128>(4) * f.a * f.c;
  for (;;) {
    if (f.b > f.a || f.b <= -f.a) {
      // b -> b + 2 a t with t chosen to land in (-a, a]
      i64 two_a = 2 * f.a;
      i64 t = (f.a - f.b) / two_a;
      if ((f.a - f.b) % two_a < 0) --t;
      f.b += two_a * t;
      f.c = static_cast<i64>((static_cast<__int128>(f.b) * f.b - disc) / (4 * static_cast<__int128>(f.a)));
    }
    if (f.a > f.c) {
      std::swap(f.a, f.c);
      f.b = -f.b;
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
  }
}

u64 sqrt_mod_prime(u64 n, u64 p) {
  n %= p;
  if (p == 2) return n;
  if (n == 0) return 0;
  if (powmod(n, (p - 1) / 2, p) != 1) throw DomainError("sqrt_mod_prime: not a quadratic residue");
  u64 Q = p - 1, S = 0;
  while (Q % 2 == 0) {
    Q /= 2;
    ++S;
  }
  u64 z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 M = S, c = powmod(z, Q, p), t = powmod(n, Q, p), R = powmod(n, (Q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + 1 < M - i; ++j) b = mulmod(b, b, p);
    M = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    R = mulmod(R, b, p);
  }
  return R;
}

TypeIIClass classify_prime_typeii(u64 p, u64 q) {
  if (q != 23 && q != 31) throw DomainError("classify_prime_typeii: q must be 23 or 31");
  if (p == q) throw DomainError("classify_prime_typeii: p must differ from q");
  if (!is_prime(p)) throw DomainError("classify_prime_typeii: p must be prime");
  if (kronecker_symbol(static_cast<i64>(p), static_cast<i64>(q)) == -1) return TypeIIClass::S1;
  i64 b;
  if (p == 2) {
    b = 1;  // -q = 1 mod 8 for both supported q
  } else {
    u64 qm = (p - q % p) % p;
    b = static_cast<i64>(sqrt_mod_prime(qm, p));
    if (b % 2 == 0) b = static_cast<i64>(p) - b;
  }
  __int128 num = static_cast<__int128>(b) * b + q;
  i64 c = static_cast<i64>(num / (4 * static_cast<__int128>(p)));
  BinaryForm red = reduce_form({static_cast<i64>(p), b, c});
  if (red.a == 1) return TypeIIClass::S3;
  if (red.a == 2) return TypeIIClass::S2;
  throw DomainError("classify_prime_typeii: unexpected reduced form");
}

TypeIISums typeii_sums(u64 q, u64 P, unsigned accel_levels) {
  if (q != 23 && q != 31) throw DomainError("typeii_sums: q must be 23 or 31");
  if (P < 10000) throw DomainError("typeii_sums: P must be at least 10^4");
  TypeIISums out;
  std::size_t n = 0;
  auto ps = primes_upto(P, n);
  std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::array<CompensatedSum, 4>> part(chunks);
  const double qd = static_cast<double>(q);
  for_chunks(n, [&](std::size_t b, std::size_t e, std::size_t ci) {
    for (std::size_t i = b; i < e; ++i) {
      u64 p = (*ps)[i];
      if (p == q) continue;
      double lp = std::log(static_cast<double>(p));
      switch (classify_prime_typeii(p, q)) {
        case TypeIIClass::S1:
          part[ci][0].add(lp_over(lp, 2));
          break;
        case TypeIIClass::S2:
          part[ci][1].add(2 * lp_over(lp, 2) - 3 * lp_over(lp, 3));
          part[ci][3].add((qd - 1) * lp_over(lp, qd - 1) - qd * lp_over(lp, qd));
          break;
        case TypeIIClass::S3:
          part[ci][2].add((qd - 1) * lp_over(lp, qd - 1) - qd * lp_over(lp, qd));
          break;
      }
    }
  });
  std::array<CompensatedSum, 4> tot;
  for (auto& c : part)
    for (int f = 0; f < 4; ++f) tot[f].merge(c[f]);
  double Pd = static_cast<double>(P);
  PrimeSumResult* rs[] = {&out.s1, &out.s2, &out.s3, &out.s2_quadratic};
  for (int f = 0; f < 4; ++f) {
    rs[f]->value = tot[f].value();
    rs[f]->truncation_P = P;
    rs[f]->terms_used = n - (q <= P ? 1 : 0);
  }
  out.s1.tail_bound = kThetaConst / Pd;
  out.s2.tail_bound = 2.0 * kThetaConst / Pd;
  out.s3.tail_bound = (qd - 1) * kThetaConst * std::exp(-(qd - 3) * std::log(Pd)) / Pd;
  out.s2_quadratic.tail_bound = out.s3.tail_bound;
  out.s2_quadratic.heuristic_tail = out.s3.tail_bound / 3.0;
  // the S1 classes have density 1/2, S2 and S3 split the rest 2:1 by form count
  out.s1.heuristic_tail = 0.5 * out.s1.tail_bound;
  out.s2.heuristic_tail = out.s2.tail_bound / 3.0;
  out.s3.heuristic_tail = out.s3.tail_bound / 6.0;
  if (accel_levels > 0) {
    auto a = accel_quadratic_sums(-static_cast<i64>(q), -1, 2, accel_levels, P);
    out.s1 = a;
  }
  return out;
}

}  // namespace ekc
