#include "ekc/lfunctions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "ekc/errors.hpp"
#include "ekc/numeric.hpp"
#include "ekc/parallel.hpp"

namespace ekc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// B_{2k} / (2k)!, k = 1..8
constexpr std::array<double, 8> kBernoulliOverFact = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
};

}  // namespace

double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma: x must be positive");
  CompensatedSum shift;
  while (x < 10.0) {
    shift.add(-1.0 / x);
    x += 1.0;
  }
  double inv2 = 1.0 / (x * x);
  // -sum B_{2k}/(2k x^{2k}) for k = 1..7
  double series =
      inv2 * (-1.0 / 12 +
              inv2 * (1.0 / 120 +
                      inv2 * (-1.0 / 252 +
                              inv2 * (1.0 / 240 +
                                      inv2 * (-1.0 / 132 + inv2 * (691.0 / 32760 + inv2 * (-1.0 / 12)))))));
  shift.add(std::log(x));
  shift.add(-0.5 / x);
  shift.add(series);
  return shift.value();
}

double stieltjes1(double x, unsigned N) {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("stieltjes1: x must lie in (0, 1]");
  if (N < 10) throw DomainError("stieltjes1: N too small");
  CompensatedSum s;
  for (unsigned n = 0; n < N; ++n) {
    double u = n + x;
    s.add(std::log(u) / u);
  }
  double u = N + x;
  double L = std::log(u);
  s.add(-0.5 * L * L);
  s.add(0.5 * L / u);
  // Euler-Maclaurin corrections with f(u) = log u / u
  double f1 = (1.0 - L) / (u * u);
  double f3 = (11.0 - 6.0 * L) / (u * u * u * u);
  s.add(-kBernoulliOverFact[0] * f1);
  s.add(-kBernoulliOverFact[1] * f3);
  return s.value();
}

ZetaPair progression_pair(double s, double q, double a) {
  if (!(s > 1.0)) throw DomainError("progression_pair: s must exceed 1");
  if (!(q > 0.0 && a > 0.0)) throw DomainError("progression_pair: q, a must be positive");
  CompensatedSum z, dz;
  if (s >= 40.0) {
    for (unsigned n = 0;; ++n) {
      double u = q * n + a;
      double lu = std::log(u);
      double term = std::exp(-s * lu);
      z.add(term);
      dz.add(-lu * term);
      double rest = term * u / (q * (s - 1.0));
      if (n >= 1 && rest <= 1e-18 * std::fabs(z.value())) break;
      if (term == 0.0) break;
    }
    return {z.value(), dz.value()};
  }
  constexpr unsigned N = 32;
  for (unsigned n = 0; n < N; ++n) {
    double u = q * n + a;
    double lu = std::log(u);
    double term = std::exp(-s * lu);
    z.add(term);
    dz.add(-lu * term);
  }
  double u = q * N + a;
  double lu = std::log(u);
  double us = std::exp(-s * lu);  // u^{-s}
  double integral = us * u / (q * (s - 1.0));
  z.add(integral);
  dz.add(-lu * integral - integral / (s - 1.0));
  z.add(0.5 * us);
  dz.add(-0.5 * lu * us);
  // + B_{2k}/(2k)! (s)_{2k-1} q^{2k-1} u^{-s-2k+1}
  double rising = s;       // (s)_{2k-1}
  double harmonic = 1.0 / s;  // sum_{i<2k-1} 1/(s+i)
  double qu = q / u;
  double pw = us * qu;  // q^{2k-1} u^{-s-2k+1}
  for (std::size_t k = 1; k <= kBernoulliOverFact.size(); ++k) {
    double c = kBernoulliOverFact[k - 1] * rising * pw;
    z.add(c);
    dz.add(c * (harmonic - lu));
    double m = 2.0 * k - 1.0;  // advance (s)_{2k-1} -> (s)_{2k+1}
    rising *= (s + m) * (s + m + 1.0);
    harmonic += 1.0 / (s + m) + 1.0 / (s + m + 1.0);
    pw *= qu * qu;
  }
  return {z.value(), dz.value()};
}

ZetaPair hurwitz_zeta_pair(double s, double x) {
  if (!(s >= 2.0)) throw DomainError("hurwitz_zeta_pair: s must be >= 2");
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("hurwitz_zeta_pair: x must lie in (0, 1]");
  return progression_pair(s, 1.0, x);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: x must be positive");
  if (x < 0.5) return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  // Lanczos, g = 7, n = 9
  static constexpr double c[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                  771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                  -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  x -= 1.0;
  double a = c[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += c[i] / (x + i);
  return 0.5 * std::log(2.0 * kPi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

double agm(double a, double b) {
  for (int i = 0; i < 64 && std::fabs(a - b) > 4 * kEps * a; ++i) {
    double m = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = m;
  }
  return 0.5 * (a + b);
}

double log_gamma_quarter_agm() {
  // Gamma(1/4)^2 = (2 pi)^{3/2} / AGM(sqrt 2, 1)
  return 0.5 * (1.5 * std::log(2.0 * kPi) - std::log(agm(std::sqrt(2.0), 1.0)));
}

double zeta_logderiv(double s) {
  if (!(s >= 2.0)) throw DomainError("zeta_logderiv: s must be >= 2");
  // zeta(s) = 1 + sum_{n>=2}; use the progression starting at 2 to keep the small
  // derivative -log2 2^{-s} + ... free of cancellation for large s
  ZetaPair tail = progression_pair(s, 1.0, 2.0);
  return tail.dzeta / (1.0 + tail.zeta);
}

std::shared_ptr<const AtOneData> at_one_data(const CharacterTable& t) {
  static std::mutex mu;
  static std::map<u64, std::shared_ptr<const AtOneData>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(t.q);
    if (it != cache.end()) return it->second;
  }
  auto d = std::make_shared<AtOneData>();
  const u64 n = t.q - 1;
  d->q = t.q;
  d->psi.resize(n);
  d->gamma1.resize(n);
  d->psi_err.resize(n);
  d->gamma1_err.resize(n);
  const double qd = static_cast<double>(t.q);
  parallel_for(n, [&](std::size_t k) {
    double x = t.power[k] / qd;
    d->psi[k] = digamma(x);
    d->gamma1[k] = stieltjes1(x);
    d->psi_err[k] = 1e-13 + 16 * kEps * std::fabs(d->psi[k]);
    d->gamma1_err[k] = 1e-12 + 16 * kEps * std::fabs(d->gamma1[k]);
  });
  const u64 half = n / 2;
  d->psi_even.resize(half);
  d->psi_odd.resize(half);
  d->gamma1_even.resize(half);
  d->gamma1_odd.resize(half);
  for (u64 k = 0; k < half; ++k) {
    d->psi_even[k] = d->psi[k] + d->psi[k + half];
    d->psi_odd[k] = d->psi[k] - d->psi[k + half];
    d->gamma1_even[k] = d->gamma1[k] + d->gamma1[k + half];
    d->gamma1_odd[k] = d->gamma1[k] - d->gamma1[k + half];
  }
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() >= 16) cache.erase(cache.begin());
  cache[t.q] = d;
  return d;
}

LValueRecord L_logderiv_at1(const CharacterTable& t, const AtOneData& d, u64 j) {
  const u64 n = t.q - 1;
  if (j % n == 0) throw DomainError("L_logderiv_at1: principal character has a pole at s = 1");
  j %= n;
  ComplexCompensatedSum A, B;
  double scaleA = 0.0, scaleB = 0.0, compA = 0.0, compB = 0.0;
  // chi(g^{k + n/2}) = (-1)^j chi(g^k)
  const bool even = j % 2 == 0;
  const double* fa = even ? d.psi_even.data() : d.psi_odd.data();
  const double* fb = even ? d.gamma1_even.data() : d.gamma1_odd.data();
  const u64 half = n / 2;
  u64 idx = 0;
  for (u64 k = 0; k < half; ++k) {
    const std::complex<double>& w = t.roots[idx];
    A.add(w * fa[k]);
    B.add(w * fb[k]);
    scaleA += std::fabs(d.psi[k]) + std::fabs(d.psi[k + half]);
    scaleB += std::fabs(d.gamma1[k]) + std::fabs(d.gamma1[k + half]);
    compA += d.psi_err[k] + d.psi_err[k + half];
    compB += d.gamma1_err[k] + d.gamma1_err[k + half];
    idx += j;
    if (idx >= n) idx -= n;
  }
  const double qd = static_cast<double>(t.q);
  const double lq = std::log(qd);
  LValueRecord r;
  r.character = character_id(t.q, j);
  r.s = 1.0;
  r.L = -A.value() / qd;
  r.Lprime = -lq * r.L - B.value() / qd;
  // component errors, rounding of root table entries and summation rounding
  double eL = (compA + 4 * kEps * scaleA + n * kEps * scaleA) / qd;
  double eB = (compB + 4 * kEps * scaleB + n * kEps * scaleB) / qd;
  double eLp = lq * eL + eB;
  double absL = std::abs(r.L);
  if (absL < 10 * eL) throw IllConditionedError("L(1, chi) indistinguishable from zero");
  r.logderiv = r.Lprime / r.L;
  r.abs_err = (eLp + std::abs(r.logderiv) * eL) / (absL - eL);
  r.L_err = eL;
  return r;
}

LValueRecord L_logderiv_at1(const CharacterTable& t, u64 j) {
  auto d = at_one_data(t);
  return L_logderiv_at1(t, *d, j);
}

std::vector<LValueRecord> L_logderiv_at1_sweep(const CharacterTable& t, const std::vector<u64>& js) {
  auto d = at_one_data(t);
  const u64 n = t.q - 1;
  // chi_{n-j} is the conjugate of chi_j: evaluate one of each pair
  std::vector<u64> reps;
  std::map<u64, std::size_t> slot;
  for (u64 j : js) {
    u64 r = j % n;
    r = std::min(r, n - r);
    if (slot.emplace(r, reps.size()).second) reps.push_back(r);
  }
  std::vector<LValueRecord> base(reps.size());
  parallel_for(reps.size(), [&](std::size_t i) { base[i] = L_logderiv_at1(t, *d, reps[i]); });
  std::vector<LValueRecord> out(js.size());
  for (std::size_t i = 0; i < js.size(); ++i) {
    u64 r = js[i] % n;
    LValueRecord rec = base[slot.at(std::min(r, n - r))];
    if (r > n - r) {
      rec.character = character_id(t.q, r);
      rec.L = std::conj(rec.L);
      rec.Lprime = std::conj(rec.Lprime);
      rec.logderiv = std::conj(rec.logderiv);
    }
    out[i] = rec;
  }
  return out;
}

LValueRecord L_logderiv_at(double s, const CharacterTable& t, u64 j) {
  if (!(s >= 2.0)) throw DomainError("L_logderiv_at: s must be >= 2");
  const u64 n = t.q - 1;
  j %= n;
  const double qd = static_cast<double>(t.q);
  LValueRecord r;
  r.character = character_id(t.q, j);
  r.s = s;
  if (j == 0) {
    ZetaPair z = hurwitz_zeta_pair(s, 1.0);
    double factor = 1.0 - std::exp(-s * std::log(qd));
    r.L = z.zeta * factor;
    double ld = zeta_logderiv(s) + std::log(qd) / std::expm1(s * std::log(qd));
    r.logderiv = ld;
    r.Lprime = ld * r.L;
    r.abs_err = 1e-13 * (1.0 + std::fabs(ld));
    return r;
  }
  ComplexCompensatedSum L, Lp;
  double scale = 0.0;
  for (u64 a = 1; a < t.q; ++a) {
    ZetaPair p = progression_pair(s, qd, static_cast<double>(a));
    auto w = t.roots[char_root_index(t, j, a)];
    L.add(w * p.zeta);
    Lp.add(w * p.dzeta);
    scale += std::fabs(p.zeta) + std::fabs(p.dzeta);
  }
  r.L = L.value();
  r.Lprime = Lp.value();
  r.logderiv = r.Lprime / r.L;
  r.abs_err = (1e-13 + 8 * kEps) * scale / std::abs(r.L) * (1.0 + std::abs(r.logderiv));
  return r;
}

double real_character_logderiv(double s, const std::vector<int>& chi) {
  if (!(s >= 2.0)) throw DomainError("real_character_logderiv: s must be >= 2");
  const double N = static_cast<double>(chi.size());
  CompensatedSum L, Lp;
  for (std::size_t a = 1; a < chi.size(); ++a) {
    if (chi[a] == 0) continue;
    ZetaPair p = progression_pair(s, N, static_cast<double>(a));
    L.add(chi[a] * p.zeta);
    Lp.add(chi[a] * p.dzeta);
  }
  return Lp.value() / L.value();
}

std::vector<int> chi_minus4_values() { return {0, 1, 0, -1}; }

std::vector<int> legendre_values(u64 q) {
  std::vector<int> v(q, 0);
  for (u64 a = 1; a < q; ++a) v[a] = kronecker_symbol(static_cast<i64>(a), static_cast<i64>(q));
  return v;
}

double chi_minus4_logderiv_at1() {
  return kEulerGamma + 2.0 * kLog2 + 3.0 * std::log(kPi) - 4.0 * log_gamma_quarter_agm();
}

}  // namespace ekc
