/*
 * Copyright 2026 The coalex Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COALEX_PLAYER_SET_HPP_
#define COALEX_PLAYER_SET_HPP_

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace coalex {

// Coalitions are bitmasks over players 0..n-1.
using Mask = std::uint64_t;

inline constexpr int kMaxPlayers = 64;
// Largest player count for which a game may be stored as a full table.
inline constexpr int kDenseCap = 24;

inline constexpr int cardinality(Mask s) { return std::popcount(s); }

inline constexpr Mask full_mask(int n) {
  return n >= 64 ? ~Mask{0} : ((Mask{1} << n) - 1);
}

inline constexpr Mask bit(int i) { return Mask{1} << i; }

inline constexpr bool contains(Mask s, int i) { return (s >> i) & 1u; }

// Indices of the set bits of `s`, increasing.
std::vector<int> members(Mask s);

Mask mask_of(std::span<const int> players);

// Spreads the low bits of `local` onto the positions in `positions`:
// bit k of `local` becomes bit positions[k] of the result.
inline Mask deposit(Mask local, std::span<const int> positions) {
  Mask out = 0;
  for (std::size_t k = 0; local != 0; ++k, local >>= 1) {
    if (local & 1u) out |= bit(positions[k]);
  }
  return out;
}

// Inverse of deposit for masks contained in the span of `positions`.
inline Mask extract(Mask global, std::span<const int> positions) {
  Mask out = 0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (contains(global, positions[k])) out |= bit(static_cast<int>(k));
  }
  return out;
}

// Table of deposit(a, positions) for every a < 2^|positions|.
std::vector<Mask> deposit_table(std::span<const int> positions);

}  // namespace coalex

#endif  // COALEX_PLAYER_SET_HPP_
