#pragma once

#include <complex>
#include <vector>

#include "ekc/arith.hpp"

namespace ekc {

struct CharacterTable {
  u64 q = 0;
  u64 g = 0;
  std::vector<u32> dlog;   // dlog[a] for a in [1, q-1]; dlog[0] unused
  std::vector<u32> power;  // power[t] = g^t mod q
  std::vector<std::complex<double>> roots;  // e^{2 pi i t/(q-1)}
};

enum class Parity { Even, Odd };

struct CharacterId {
  u64 q = 0;
  u64 j = 0;
  Parity parity = Parity::Even;
};

void set_character_capacity(u64 q_max);
u64 character_capacity();

CharacterTable build_table(u64 q);

std::complex<double> char_value(const CharacterTable& t, u64 j, i64 a);

// Index of chi_j(a) in the root table, a coprime to q.
inline u64 char_root_index(const CharacterTable& t, u64 j, u64 a_mod_q) {
  return (j % (t.q - 1)) * t.dlog[a_mod_q] % (t.q - 1);
}

CharacterId character_id(u64 q, u64 j);

std::vector<CharacterId> members_Xm(u64 q, u64 m, bool exclude_principal);

}  // namespace ekc
