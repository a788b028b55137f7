#include "ekc/characters.hpp"

#include <atomic>
#include <cmath>

#include "ekc/errors.hpp"
#include "ekc/numeric.hpp"

namespace ekc {

namespace {
std::atomic<u64> g_char_capacity{1'000'000};
}

void set_character_capacity(u64 q_max) { g_char_capacity = q_max; }
u64 character_capacity() { return g_char_capacity.load(); }

CharacterTable build_table(u64 q) {
  if (q < 3 || !is_prime(q)) throw DomainError("build_table: q must be an odd prime");
  if (q > character_capacity()) throw CapacityError("build_table: q exceeds character capacity");
  CharacterTable t;
  t.q = q;
  t.g = primitive_root(q);
  t.dlog.assign(q, 0);
  t.power.assign(q - 1, 0);
  u64 a = 1;
  for (u64 k = 0; k < q - 1; ++k) {
    t.power[k] = static_cast<u32>(a);
    t.dlog[a] = static_cast<u32>(k);
    a = a * t.g % q;
  }
  const u64 n = q - 1;
  t.roots.resize(n);
  for (u64 k = 0; k < n; ++k) {
    double ang = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    t.roots[k] = {std::cos(ang), std::sin(ang)};
  }
  // exact values where they are known
  t.roots[0] = {1.0, 0.0};
  if (n % 2 == 0) t.roots[n / 2] = {-1.0, 0.0};
  if (n % 4 == 0) {
    t.roots[n / 4] = {0.0, 1.0};
    t.roots[3 * n / 4] = {0.0, -1.0};
  }
  return t;
}

std::complex<double> char_value(const CharacterTable& t, u64 j, i64 a) {
  i64 r = a % static_cast<i64>(t.q);
  if (r < 0) r += static_cast<i64>(t.q);
  if (r == 0) return {0.0, 0.0};
  return t.roots[char_root_index(t, j, static_cast<u64>(r))];
}

CharacterId character_id(u64 q, u64 j) {
  CharacterId c;
  c.q = q;
  c.j = j;
  c.parity = (j % 2 == 0) ? Parity::Even : Parity::Odd;
  return c;
}

std::vector<CharacterId> members_Xm(u64 q, u64 m, bool exclude_principal) {
  if (q < 3 || m == 0 || (q - 1) % m != 0) throw DomainError("members_Xm: m must divide q-1");
  std::vector<CharacterId> out;
  for (u64 j = exclude_principal ? m : 0; j < q - 1; j += m) out.push_back(character_id(q, j));
  return out;
}

}  // namespace ekc
