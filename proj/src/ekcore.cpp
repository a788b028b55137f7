#include "ekc/ekcore.hpp"

#include <cmath>

#include "ekc/characters.hpp"
#include "ekc/errors.hpp"
#include "ekc/lfunctions.hpp"
#include "ekc/numeric.hpp"
#include "ekc/primesums.hpp"

namespace ekc {

namespace {

constexpr double kSlack = 1e-12;  // gamma and other special constants

}  // namespace

FieldConstants field_constants(u64 q, u64 m) {
  if (q < 3 || !is_prime(q)) throw DomainError("gamma_Km: q must be an odd prime");
  if (m == 0 || (q - 1) % m != 0) throw DomainError("gamma_Km: m must divide q - 1");
  FieldConstants fc;
  fc.q = q;
  fc.m = m;
  fc.has_2m = (q - 1) % (2 * m) == 0;
  auto members = members_Xm(q, m, true);
  std::vector<u64> js;
  for (auto& c : members) js.push_back(c.j);
  CompensatedSum re, re2, im, im2, plog;
  double err = 0, err2 = 0, perr = 0;
  if (!js.empty()) {
    auto t = build_table(q);
    auto recs = L_logderiv_at1_sweep(t, js);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto& r = recs[i];
      re.add(r.logderiv.real());
      im.add(r.logderiv.imag());
      err += r.abs_err;
      double absL = std::abs(r.L);
      double sgn = members[i].parity == Parity::Even ? 1.0 : -1.0;
      plog.add(sgn * std::log(absL));
      perr += r.L_err / (absL - r.L_err);
      if (fc.has_2m && js[i] % (2 * m) == 0) {
        re2.add(r.logderiv.real());
        im2.add(r.logderiv.imag());
        err2 += r.abs_err;
      }
    }
  }
  fc.gamma_Km.value = kEulerGamma + re.value();
  fc.gamma_Km.err = err + std::fabs(im.value()) + kSlack;
  if (fc.has_2m) {
    fc.gamma_K2m.value = kEulerGamma + re2.value();
    fc.gamma_K2m.err = err2 + std::fabs(im2.value()) + kSlack;
  }
  fc.parity_log_L = plog.value();
  fc.parity_log_L_err = perr;
  return fc;
}

Estimate gamma_Km(u64 q, u64 m) { return field_constants(q, m).gamma_Km; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Landau:
      return "Landau";
    case Verdict::Ramanujan:
      return "Ramanujan";
    case Verdict::Undecided:
      return "Undecided";
    case Verdict::NotApplicable:
      return "NotApplicable";
  }
  return "?";
}

Verdict verdict_from(const Estimate& g) {
  if (g.value - g.err > 0.5) return Verdict::Landau;
  if (g.value + g.err < 0.5) return Verdict::Ramanujan;
  return Verdict::Undecided;
}

EkReport gamma_kq(const DivisorContext& ctx, u64 P, bool accel, unsigned accel_levels) {
  if (ctx.kind != Case::EvenH)
    throw DispatchError("gamma_kq needs (q-1)/r even; use gamma_q2 for q = 2 and gamma_oddh for odd h");
  const u64 q = ctx.q, r = ctx.r, h = ctx.h;
  const double qd = static_cast<double>(q), hd = static_cast<double>(h);
  const double lq = std::log(qd);
  EkReport rep;
  rep.context = ctx;
  rep.delta = 1.0 / hd;

  FieldConstants fc = field_constants(q, r);
  ProfileSums prof = profile_sums(q, {r}, P)[0];
  rep.gamma_Kr = fc.gamma_Km.value;
  rep.gamma_K2r = fc.gamma_K2m.value;
  double eK = (2 * fc.gamma_K2m.err + fc.gamma_Km.err) / hd;

  if (accel && 2 * r == q - 1) {
    // gamma/2 + L'/L(1, chi_{q*})/2 - log q/(2(q-1)) - S with S from the ladders
    rep.quadratic_path = true;
    rep.S_rq = S_mq({q, r, P, accel_levels});
    double ld = fc.gamma_Km.value - kEulerGamma;
    CompensatedSum g;
    g.add(kEulerGamma / 2);
    g.add(ld / 2);
    g.add(-lq / (2 * (qd - 1)));
    g.add(-rep.S_rq.value);
    rep.gamma_kq = g.value();
    eK = fc.gamma_Km.err / 2;
  } else {
    rep.S_rq = prof.S;
    CompensatedSum g;
    g.add(kEulerGamma);
    g.add(-(2 * rep.gamma_K2r - rep.gamma_Kr) / hd);
    g.add(-lq / (hd * (qd - 1)));
    g.add(-rep.S_rq.value);
    rep.gamma_kq = g.value();
  }
  rep.gamma_prime_kq = rep.gamma_kq + lq / (qd - 1);
  rep.err = eK + rep.S_rq.tail_bound + kSlack;

  double logC = -std::log1p(-1.0 / qd) / hd - log_gamma(1.0 - 1.0 / hd) - fc.parity_log_L / hd + prof.log_c.value;
  rep.C_kq = std::exp(logC);
  rep.C_prime_kq = (1.0 - 1.0 / qd) * rep.C_kq;

  rep.verdict = verdict_from({rep.gamma_kq, rep.err});
  rep.verdict_prime = verdict_from({rep.gamma_prime_kq, rep.err});
  return rep;
}

QTwoReport gamma_q2() {
  double z = zeta_logderiv(2.0);
  return {2 * z - kLog2 / 3, 2 * z + 2 * kLog2 / 3};
}

namespace {

u64 isqrt(u64 n) {
  u64 s = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  return s;
}

u64 odd_squares_upto(u64 y) { return (isqrt(y) + 1) / 2; }

}  // namespace

u64 count_S_k2(u64 x) {
  u64 total = 0;
  for (u64 y = x; y > 0; y /= 2) total += odd_squares_upto(y);
  return total;
}

u64 count_S_prime_k2(u64 x) { return odd_squares_upto(x); }

OddHReport gamma_oddh(const DivisorContext& ctx, u64 P) {
  if (ctx.kind != Case::OddH) throw DispatchError("gamma_oddh needs q odd and (q-1)/r odd");
  OddHReport rep;
  rep.context = ctx;
  ProfileSums prof = profile_sums(ctx.q, {ctx.r}, P)[0];
  rep.log_D1 = prof.log_D;
  rep.dlog_D1 = prof.dlog_D;
  rep.D1 = std::exp(prof.log_D.value);
  rep.gamma_kq = kEulerGamma + prof.dlog_D.value;
  rep.gamma_prime_kq = rep.gamma_kq + std::log(static_cast<double>(ctx.q)) / static_cast<double>(ctx.q - 1);
  rep.err = prof.dlog_D.tail_bound + kSlack;
  return rep;
}

TypeIIReport gamma_typeii(u64 q, u64 P, unsigned accel_levels) {
  if (q != 23 && q != 31) throw DomainError("gamma_typeii: q must be 23 or 31");
  TypeIIReport rep;
  rep.q = q;
  const double qd = static_cast<double>(q);
  auto t = build_table(q);
  auto L = L_logderiv_at1(t, (q - 1) / 2);
  TypeIISums s = typeii_sums(q, P, accel_levels);
  CompensatedSum g;
  g.add(kEulerGamma / 2);
  g.add(L.logderiv.real() / 2);
  g.add(-std::log(qd) / (2 * (qd - 1)));
  g.add(-s.s1.value);
  g.add(s.s2.value);
  g.add(s.s3.value);
  rep.gamma = g.value();
  rep.err = L.abs_err / 2 + s.s1.tail_bound + s.s2.tail_bound + s.s3.tail_bound + kSlack;

  EkReport quad = gamma_kq(make_context((q - 1) / 2, q), P, accel_levels > 0, accel_levels);
  CompensatedSum a;
  a.add(quad.gamma_kq);
  a.add(s.s2.value);
  a.add(-s.s2_quadratic.value);
  rep.gamma_alt = a.value();
  rep.err_alt = quad.err + s.s2.tail_bound + s.s2_quadratic.tail_bound;
  return rep;
}

std::pair<Verdict, Verdict> decide(u64 k, u64 q, u64 P) {
  DivisorContext ctx = make_context(k, q);
  switch (ctx.kind) {
    case Case::QisTwo: {
      auto g = gamma_q2();
      return {verdict_from({g.gamma, kSlack}), verdict_from({g.gamma_prime, kSlack})};
    }
    case Case::OddH:
      return {Verdict::NotApplicable, Verdict::NotApplicable};
    case Case::EvenH:
      break;
  }
  EkReport rep = gamma_kq(ctx, P);
  return {rep.verdict, rep.verdict_prime};
}

double ek_slow_estimate(u64 q, u64 m, u64 x) {
  if (q < 3 || !is_prime(q)) throw DomainError("ek_slow_estimate: q must be an odd prime");
  if (m == 0 || (q - 1) % m != 0) throw DomainError("ek_slow_estimate: m must divide q - 1");
  if (x < q * q) throw DomainError("ek_slow_estimate: x must be at least q^2");
  CompensatedSum s;
  PrimeSieve sieve(x);
  u64 p;
  while (sieve.next(p)) {
    if (p == q) continue;
    double lp = std::log(static_cast<double>(p));
    for (u64 pk = p;;) {
      if (powmod(pk % q, m, q) == 1) s.add(lp / static_cast<double>(pk));
      if (pk > x / p) break;
      pk *= p;
    }
  }
  const double qd = static_cast<double>(q);
  return -std::log(qd) / (qd - 1) + std::log(static_cast<double>(x)) -
         (qd - 1) / static_cast<double>(m) * s.value();
}

}  // namespace ekc
