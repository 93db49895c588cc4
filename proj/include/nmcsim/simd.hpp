// Copyright 2026 The nmcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Packed-SIMD integer arithmetic on 32-bit words. Both devices route every
// data operation through these functions, so their results are bit-identical
// by construction; the differential tests check them against plain scalar
// code instead.

#ifndef NMCSIM_SIMD_HPP_
#define NMCSIM_SIMD_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace nmcsim {

using Word32 = std::uint32_t;

enum class ElemWidth : std::uint8_t { kW8 = 0, kW16 = 1, kW32 = 2 };

constexpr unsigned elem_bits(ElemWidth w) {
  return 8u << static_cast<unsigned>(w);
}
constexpr unsigned elem_bytes(ElemWidth w) { return elem_bits(w) / 8; }
constexpr unsigned elements_per_word(ElemWidth w) {
  return 4u >> static_cast<unsigned>(w);
}
constexpr Word32 elem_mask(ElemWidth w) {
  return w == ElemWidth::kW32 ? 0xFFFFFFFFu : ((1u << elem_bits(w)) - 1u);
}

std::optional<ElemWidth> width_from_bits(unsigned bits);
std::string_view to_string(ElemWidth w);

enum class PackedOp {
  kAdd,
  kSub,
  kMul,
  kAnd,
  kOr,
  kXor,
  kMin,
  kMax,
  kMinU,
  kMaxU,
  kSll,
  kSrl,
  kSra,
};

// Lane `lane` of `word`, sign- or zero-extended to 32 bits.
std::int32_t lane_signed(Word32 word, unsigned lane, ElemWidth w);
Word32 lane_unsigned(Word32 word, unsigned lane, ElemWidth w);
Word32 with_lane(Word32 word, unsigned lane, Word32 value, ElemWidth w);

// Truncates to the element width and sign-extends back.
std::int32_t wrap_to_width(std::int64_t value, ElemWidth w);

// Replicates the low element bits of `value` into every lane.
Word32 splat(std::int64_t value, ElemWidth w);

// Element-wise operation. ADD/SUB/MUL wrap (MUL keeps the low half); shift
// amounts come from the matching lane of `b`, masked to log2(element bits).
Word32 packed_binop(PackedOp op, Word32 a, Word32 b, ElemWidth w);

// Per-lane multiply-accumulate state. For W8 all four accumulators are live,
// for W16 the first two, for W32 only the first.
struct LaneAcc {
  std::array<std::int32_t, 4> acc{};

  friend bool operator==(const LaneAcc&, const LaneAcc&) = default;
};

LaneAcc packed_mac(LaneAcc acc, Word32 a, Word32 b, ElemWidth w);

// Accumulates the sum of all lane products into a single scalar.
std::int32_t packed_dot(std::int32_t acc, Word32 a, Word32 b, ElemWidth w);

// Packs the live lane accumulators into a word, truncating each to `w`.
Word32 pack_lanes(const LaneAcc& acc, ElemWidth w);

}  // namespace nmcsim

#endif  // NMCSIM_SIMD_HPP_
