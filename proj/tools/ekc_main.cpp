#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ekc/bounds.hpp"
#include "ekc/cuspforms.hpp"
#include "ekc/ekcore.hpp"
#include "ekc/errors.hpp"
#include "ekc/oracle.hpp"
#include "ekc/parallel.hpp"
#include "ekc/primesums.hpp"
#include "ekc/shanks.hpp"

using namespace ekc;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitUndecided = 4;
constexpr int kExitUsage = 64;

struct RunConfig {
  u64 prime_limit = kDefaultP;
  unsigned accel_levels = 8;
  u64 character_q_max = 3000;
  std::string cache_dir;
  std::string format = "human";
  bool json = false;
  bool csv = false;
  unsigned threads = 0;
  bool strict = false;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

Json sum_json(const PrimeSumResult& s) {
  return Json{{"value", num(s.value)},
              {"tail_bound", num(s.tail_bound)},
              {"heuristic_tail", num(s.heuristic_tail)},
              {"truncation_P", s.truncation_P},
              {"terms_used", s.terms_used}};
}

Json context_json(const DivisorContext& c) {
  return Json{{"k", c.k}, {"q", c.q}, {"r", c.r}, {"h", c.h}, {"case", to_string(c.kind)}};
}

Json ek_json(const EkReport& r) {
  return Json{{"context", context_json(r.context)},
              {"gamma_Kr", num(r.gamma_Kr)},
              {"gamma_K2r", num(r.gamma_K2r)},
              {"S_rq", sum_json(r.S_rq)},
              {"gamma_kq", num(r.gamma_kq)},
              {"gamma_prime_kq", num(r.gamma_prime_kq)},
              {"C_kq", num(r.C_kq)},
              {"C_prime_kq", num(r.C_prime_kq)},
              {"delta", num(r.delta)},
              {"err", num(r.err)},
              {"verdict", to_string(r.verdict)},
              {"verdict_prime", to_string(r.verdict_prime)},
              {"quadratic_path", r.quadratic_path}};
}

void check_character_range(u64 q, const RunConfig& cfg) {
  if (q > cfg.character_q_max)
    throw CapacityError("q = " + std::to_string(q) + " exceeds --character-q-max " +
                        std::to_string(cfg.character_q_max));
}

std::string csv_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Human: one "key: value" line per field. CSV: header plus one row of top-level fields.
void emit(const Json& out, const RunConfig& cfg) {
  if (cfg.format == "json") {
    std::cout << out.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    std::string head, row;
    for (auto it = out.begin(); it != out.end(); ++it) {
      if (!head.empty()) {
        head += ",";
        row += ",";
      }
      head += it.key();
      row += csv_cell(it.value());
    }
    std::cout << head << "\n" << row << "\n";
  } else {
    for (auto it = out.begin(); it != out.end(); ++it) std::cout << it.key() << ": " << csv_cell(it.value()) << "\n";
  }
}

int verdict_exit(const RunConfig& cfg, std::initializer_list<Verdict> vs) {
  if (!cfg.strict) return 0;
  for (Verdict v : vs)
    if (v == Verdict::Undecided) return kExitUndecided;
  return 0;
}

int cmd_gamma(u64 k, u64 q, bool accel, const RunConfig& cfg) {
  DivisorContext ctx = make_context(k, q);
  switch (ctx.kind) {
    case Case::QisTwo: {
      QTwoReport r = gamma_q2();
      Json out{{"context", context_json(ctx)},
               {"gamma_kq", num(r.gamma)},
               {"gamma_prime_kq", num(r.gamma_prime)},
               {"err", num(1e-12)},
               {"verdict", to_string(verdict_from({r.gamma, 1e-12}))},
               {"verdict_prime", to_string(verdict_from({r.gamma_prime, 1e-12}))}};
      emit(out, cfg);
      return 0;
    }
    case Case::OddH: {
      OddHReport r = gamma_oddh(ctx, cfg.prime_limit);
      Json out{{"context", context_json(ctx)},       {"D1", num(r.D1)},
               {"log_D1", sum_json(r.log_D1)},       {"dlog_D1", sum_json(r.dlog_D1)},
               {"gamma_kq", num(r.gamma_kq)},        {"gamma_prime_kq", num(r.gamma_prime_kq)},
               {"err", num(r.err)},                  {"verdict", to_string(Verdict::NotApplicable)},
               {"verdict_prime", to_string(Verdict::NotApplicable)}};
      emit(out, cfg);
      return 0;
    }
    case Case::EvenH:
      break;
  }
  check_character_range(q, cfg);
  EkReport r = gamma_kq(ctx, cfg.prime_limit, accel, cfg.accel_levels);
  emit(ek_json(r), cfg);
  return verdict_exit(cfg, {r.verdict, r.verdict_prime});
}

int cmd_decide(u64 k, u64 q, const RunConfig& cfg) {
  DivisorContext ctx = make_context(k, q);
  if (ctx.kind == Case::EvenH) check_character_range(q, cfg);
  auto [v, vp] = decide(k, q, cfg.prime_limit);
  if (cfg.format == "human") {
    std::cout << to_string(v) << "\n" << "prime: " << to_string(vp) << "\n";
  } else {
    emit(Json{{"k", k}, {"q", q}, {"verdict", to_string(v)}, {"verdict_prime", to_string(vp)}}, cfg);
  }
  return verdict_exit(cfg, {v, vp});
}

int cmd_table(u64 r, u64 q_max, const RunConfig& cfg) {
  if (r == 0) throw DomainError("table: r must be positive");
  std::vector<EkReport> rows;
  for (u64 q = 3; q <= q_max; q += 2) {
    if (!is_prime(q) || (q - 1) % (2 * r) != 0) continue;
    check_character_range(q, cfg);
    rows.push_back(gamma_kq(make_context(r, q), cfg.prime_limit));
  }
  auto cells = [](const EkReport& e) {
    const auto& c = e.context;
    return std::vector<std::string>{std::to_string(c.q),        std::to_string(c.k),
                                    std::to_string(c.r),        std::to_string(c.h),
                                    num(e.gamma_kq),            num(e.gamma_prime_kq),
                                    num(e.C_kq),                num(e.C_prime_kq),
                                    num(e.err),                 to_string(e.verdict),
                                    to_string(e.verdict_prime)};
  };
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& e : rows) arr.push_back(ek_json(e));
    std::cout << Json{{"r", r}, {"q_max", q_max}, {"rows", arr}}.dump(2) << "\n";
  } else {
    const char* sep = cfg.format == "csv" ? "," : " ";
    std::cout << (cfg.format == "csv" ? "q,k,r,h,gamma,gamma_prime,C,C_prime,err,verdict,verdict_prime"
                                      : "q k r h gamma gamma_prime C C_prime err verdict verdict_prime")
              << "\n";
    for (const auto& e : rows) {
      auto c = cells(e);
      for (std::size_t i = 0; i < c.size(); ++i) std::cout << (i ? sep : "") << c[i];
      std::cout << "\n";
    }
  }
  int code = 0;
  for (const auto& e : rows) code = std::max(code, verdict_exit(cfg, {e.verdict, e.verdict_prime}));
  return code;
}

int cmd_q0(u64 r, u64 q_max, const RunConfig& cfg) {
  Q0Result res = find_q0(r, q_max);
  Json out{{"r", r}, {"q_max", q_max}, {"found", res.found}};
  if (res.found) out["q0"] = res.q0;
  out["largest_failing"] = res.largest_failing;
  emit(out, cfg);
  return 0;
}

int cmd_shanks(unsigned levels, u64 residual_P, const RunConfig& cfg) {
  ShanksConfig sc;
  sc.levels_b = sc.levels_c = levels;
  sc.residual_P = residual_P;
  auto k = landau_ramanujan_K(sc);
  auto c = shanks_c(sc);
  if (cfg.format == "human") {
    std::cout << "K = " << num(k.K) << "  (err " << num(k.err) << ")\n";
    std::cout << "c = " << num(c.c) << "  (err " << num(c.err) << ")\n";
    std::cout << "gamma_SB = " << num(c.gamma_SB) << "\n";
    return 0;
  }
  emit(Json{{"levels", levels},
            {"K", num(k.K)},
            {"K_err", num(k.err)},
            {"c", num(c.c)},
            {"c_err", num(c.err)},
            {"gamma_SB", num(c.gamma_SB)},
            {"prime_sum_3mod4", num(c.prime_sum)}},
       cfg);
  return 0;
}

int cmd_typeii(u64 q, bool accel, const RunConfig& cfg) {
  TypeIIReport r = gamma_typeii(q, cfg.prime_limit, accel ? cfg.accel_levels : 0);
  Estimate g{r.gamma, r.err};
  emit(Json{{"q", q},
            {"gamma", num(r.gamma)},
            {"err", num(r.err)},
            {"gamma_alt", num(r.gamma_alt)},
            {"err_alt", num(r.err_alt)},
            {"verdict", to_string(verdict_from(g))}},
       cfg);
  return verdict_exit(cfg, {verdict_from(g)});
}

Json violations_json(const std::vector<Violation>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs) arr.push_back(Json{{"n", v.n}, {"tau_mod_q", v.lhs}, {"expected", v.rhs}, {"rule", v.rule}});
  return arr;
}

int cmd_cusp_verify(int w, u64 q, u64 N, const RunConfig& cfg) {
  if ((w == 12 && q == 23) || (w == 16 && q == 31)) {
    CuspTypeIIReport r = verify_type_ii(w, q, N);
    emit(Json{{"type", "ii"},
              {"w", w},
              {"q", q},
              {"n_max", N},
              {"primes_checked", r.primes_checked},
              {"prime_powers_checked", r.prime_powers_checked},
              {"S1", r.class_counts[0]},
              {"S2", r.class_counts[1]},
              {"S3", r.class_counts[2]},
              {"ok", r.violations.empty()},
              {"violations", violations_json(r.violations)}},
         cfg);
    return r.violations.empty() ? 0 : 1;
  }
  auto v = type_i_v(w, q);
  if (!v) throw DomainError("no exceptional congruence of type (i) or (ii) for this (w, q)");
  TypeIReport r = verify_type_i(w, q, *v, N);
  emit(Json{{"type", "i"},
            {"w", w},
            {"q", q},
            {"v", r.v},
            {"r", r.r},
            {"n_max", N},
            {"tau_q_mod_q", r.tau_q},
            {"coprime_checked", r.coprime_checked},
            {"all_checked", r.all_checked},
            {"ok", r.violations.empty()},
            {"violations", violations_json(r.violations)}},
       cfg);
  return r.violations.empty() ? 0 : 1;
}

int cmd_cusp_tau(int w, u64 n, u64 mod, const RunConfig& cfg) {
  Json out{{"w", w}, {"n", n}};
  if (mod) {
    out["mod"] = mod;
    out["tau"] = tau_w_series_mod(w, n, mod).coeffs[n];
  } else {
    out["tau"] = tau_w_series_exact(w, n).coeffs[n].get_str();
  }
  emit(out, cfg);
  return 0;
}

int cmd_oracle_count(u64 k, u64 q, u64 x, bool prime_variant, const RunConfig& cfg) {
  CountResult c = count_S(x, k, q, prime_variant);
  emit(Json{{"k", k}, {"q", q}, {"x", x}, {"prime_variant", prime_variant}, {"count", c.count}}, cfg);
  return 0;
}

int cmd_bound_s_upper(u64 m, u64 q, double alpha, bool uniform, const RunConfig& cfg) {
  if (alpha == 0) alpha = default_params(q).alpha;
  SBound b = upper_bound_S(m, q, alpha, uniform);
  Json terms = Json::array();
  for (int i = 0; i < 5; ++i) terms.push_back(b.used[i] ? Json(num(b.terms[i])) : Json(nullptr));
  emit(Json{{"m", m}, {"q", q}, {"alpha", num(alpha)}, {"uniform", uniform}, {"terms", terms},
            {"summands", b.count()}, {"bound", num(b.total)}},
       cfg);
  return 0;
}

int cmd_bound_lower(u64 r, u64 q, const RunConfig& cfg) {
  double v = gamma_lower_bound(r, q);
  emit(Json{{"r", r}, {"q", q}, {"lower_bound", num(v)}, {"above_half", v > 0.5}}, cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler-Kronecker constants for divisor-sum non-divisibility"};
  app.fallthrough();
  app.require_subcommand(1);
  RunConfig cfg;
  if (const char* env = std::getenv("EKC_CACHE_DIR")) cfg.cache_dir = env;
  app.add_option("--prime-limit", cfg.prime_limit, "prime truncation P")->check(CLI::Range(u64{10000}, u64{4000000000}));
  app.add_option("--accel-levels", cfg.accel_levels, "exponent-doubling levels")->check(CLI::Range(0u, 40u));
  app.add_option("--character-q-max", cfg.character_q_max, "largest q for character sums");
  app.add_option("--cache-dir", cfg.cache_dir, "prime-sum cache directory (overrides EKC_CACHE_DIR)");
  auto* fmt = app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"human", "json", "csv"}));
  auto* fj = app.add_flag("--json", cfg.json, "same as --format json");
  auto* fc = app.add_flag("--csv", cfg.csv, "same as --format csv");
  fmt->excludes(fj)->excludes(fc);
  fj->excludes(fc);
  app.add_option("--threads", cfg.threads, "worker threads, 0 = all cores");
  app.add_flag("--strict", cfg.strict, "exit 4 on an Undecided verdict");

  u64 k = 0, q = 0, r = 0, m = 0, x = 0, n = 0, mod = 0, N = 0;
  u64 q_max = 0;
  bool accel = false, prime_variant = false, uniform = false;
  unsigned levels = 8;
  u64 residual_P = 1'000'000;
  int w = 0;
  double alpha = 0;

  auto* g = app.add_subcommand("gamma", "gamma_{k,q}, gamma'_{k,q}, C_{k,q} and the verdicts");
  g->add_option("-k", k)->required();
  g->add_option("-q", q)->required();
  g->add_flag("--accel", accel, "accelerated quadratic path when r = (q-1)/2");

  auto* d = app.add_subcommand("decide", "Landau or Ramanujan");
  d->add_option("-k", k)->required();
  d->add_option("-q", q)->required();

  auto* t = app.add_subcommand("table", "gamma table for fixed r over primes q = 1 mod 2r");
  t->add_option("--r", r)->required();
  t->add_option("--q-max", q_max)->required();

  auto* z = app.add_subcommand("q0", "threshold beyond which the lower bound exceeds 1/2");
  z->add_option("--r", r)->required();
  q_max = 0;
  z->add_option("--q-max", q_max, "scan limit (default 10^7)");

  auto* s = app.add_subcommand("shanks", "Landau-Ramanujan constant and Shanks' c");
  s->add_option("--levels", levels)->check(CLI::Range(1u, 16u));
  s->add_option("--residual-prime-limit", residual_P);

  auto* ty = app.add_subcommand("typeii", "type (ii) constant for q = 23 or 31");
  ty->add_option("--q", q)->required()->check(CLI::IsMember({23, 31}));
  ty->add_flag("--accel", accel);

  auto* cu = app.add_subcommand("cusp", "cusp form coefficients and congruences");
  cu->require_subcommand(1);
  auto* cv = cu->add_subcommand("verify", "check the exceptional congruence for (w, q)");
  cv->add_option("--weight", w)->required();
  cv->add_option("--q", q)->required();
  cv->add_option("--n-max", N)->required();
  auto* ct = cu->add_subcommand("tau", "tau_w(n), exact or mod a prime");
  ct->add_option("--weight", w)->required();
  ct->add_option("--n", n)->required();
  ct->add_option("--mod", mod);

  auto* o = app.add_subcommand("oracle", "brute-force counts");
  o->require_subcommand(1);
  auto* oc = o->add_subcommand("count", "number of n <= x with q not dividing sigma_k(n)");
  oc->add_option("--k", k)->required();
  oc->add_option("--q", q)->required();
  oc->add_option("--x", x)->required();
  oc->add_flag("--prime-variant", prime_variant, "count q not dividing n sigma_k(n)");

  auto* b = app.add_subcommand("bound", "explicit bounds");
  b->require_subcommand(1);
  auto* bs = b->add_subcommand("s-upper", "upper bound for S(m, q)");
  bs->add_option("--m", m)->required();
  bs->add_option("--q", q)->required();
  bs->add_option("--alpha", alpha, "default 10 log q");
  bs->add_flag("--uniform", uniform, "ignore the 2-adic and odd-factor refinements");
  auto* bl = b->add_subcommand("lower", "unconditional lower bound for gamma_{r,q}");
  bl->add_option("--r", r)->required();
  bl->add_option("--q", q)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (cfg.json) cfg.format = "json";
  if (cfg.csv) cfg.format = "csv";
  set_thread_count(cfg.threads);
  if (!cfg.cache_dir.empty()) set_sum_cache_dir(cfg.cache_dir);

  try {
    if (g->parsed()) return cmd_gamma(k, q, accel, cfg);
    if (d->parsed()) return cmd_decide(k, q, cfg);
    if (t->parsed()) return cmd_table(r, q_max, cfg);
    if (z->parsed()) return cmd_q0(r, q_max ? q_max : 10'000'000, cfg);
    if (s->parsed()) return cmd_shanks(levels, residual_P, cfg);
    if (ty->parsed()) return cmd_typeii(q, accel, cfg);
    if (cv->parsed()) return cmd_cusp_verify(w, q, N, cfg);
    if (ct->parsed()) return cmd_cusp_tau(w, n, mod, cfg);
    if (oc->parsed()) return cmd_oracle_count(k, q, x, prime_variant, cfg);
    if (bs->parsed()) return cmd_bound_s_upper(m, q, alpha, uniform, cfg);
    if (bl->parsed()) return cmd_bound_lower(r, q, cfg);
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const IllConditionedError& e) {
    std::cerr << "ill-conditioned: " << e.what() << "\n";
    return kExitDomain;
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return kExitCapacity;
  }
  return kExitUsage;
}
