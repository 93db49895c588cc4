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

#include "nmcsim/simd.hpp"

#include <algorithm>

namespace nmcsim {

std::optional<ElemWidth> width_from_bits(unsigned bits) {
  switch (bits) {
    case 8:
      return ElemWidth::kW8;
    case 16:
      return ElemWidth::kW16;
    case 32:
      return ElemWidth::kW32;
    default:
      return std::nullopt;
  }
}

std::string_view to_string(ElemWidth w) {
  switch (w) {
    case ElemWidth::kW8:
      return "w8";
    case ElemWidth::kW16:
      return "w16";
    case ElemWidth::kW32:
      return "w32";
  }
  return "w?";
}

Word32 lane_unsigned(Word32 word, unsigned lane, ElemWidth w) {
  return (word >> (lane * elem_bits(w))) & elem_mask(w);
}

std::int32_t lane_signed(Word32 word, unsigned lane, ElemWidth w) {
  return wrap_to_width(lane_unsigned(word, lane, w), w);
}

Word32 with_lane(Word32 word, unsigned lane, Word32 value, ElemWidth w) {
  const unsigned shift = lane * elem_bits(w);
  const Word32 mask = elem_mask(w) << shift;
  return (word & ~mask) | ((value << shift) & mask);
}

std::int32_t wrap_to_width(std::int64_t value, ElemWidth w) {
  const unsigned bits = elem_bits(w);
  const auto low = static_cast<std::uint32_t>(value) & elem_mask(w);
  if (bits == 32) return static_cast<std::int32_t>(low);
  const std::uint32_t sign = 1u << (bits - 1);
  return static_cast<std::int32_t>((low ^ sign)) - static_cast<std::int32_t>(sign);
}

Word32 splat(std::int64_t value, ElemWidth w) {
  const Word32 element = static_cast<Word32>(value) & elem_mask(w);
  Word32 out = 0;
  for (unsigned lane = 0; lane < elements_per_word(w); ++lane) {
    out = with_lane(out, lane, element, w);
  }
  return out;
}

namespace {

Word32 lane_op(PackedOp op, Word32 ua, Word32 ub, ElemWidth w) {
  const std::int32_t sa = wrap_to_width(ua, w);
  const std::int32_t sb = wrap_to_width(ub, w);
  const unsigned bits = elem_bits(w);
  const unsigned amount = ub & (bits - 1);
  switch (op) {
    case PackedOp::kAdd:
      return ua + ub;
    case PackedOp::kSub:
      return ua - ub;
    case PackedOp::kMul:
      return static_cast<Word32>(static_cast<std::int64_t>(sa) * sb);
    case PackedOp::kAnd:
      return ua & ub;
    case PackedOp::kOr:
      return ua | ub;
    case PackedOp::kXor:
      return ua ^ ub;
    case PackedOp::kMin:
      return static_cast<Word32>(std::min(sa, sb));
    case PackedOp::kMax:
      return static_cast<Word32>(std::max(sa, sb));
    case PackedOp::kMinU:
      return std::min(ua, ub);
    case PackedOp::kMaxU:
      return std::max(ua, ub);
    case PackedOp::kSll:
      return ua << amount;
    case PackedOp::kSrl:
      return ua >> amount;
    case PackedOp::kSra:
      return static_cast<Word32>(sa >> amount);
  }
  return 0;
}

}  // namespace

Word32 packed_binop(PackedOp op, Word32 a, Word32 b, ElemWidth w) {
  Word32 out = 0;
  for (unsigned lane = 0; lane < elements_per_word(w); ++lane) {
    const Word32 r =
        lane_op(op, lane_unsigned(a, lane, w), lane_unsigned(b, lane, w), w);
    out = with_lane(out, lane, r, w);
  }
  return out;
}

LaneAcc packed_mac(LaneAcc acc, Word32 a, Word32 b, ElemWidth w) {
  for (unsigned lane = 0; lane < elements_per_word(w); ++lane) {
    const std::int64_t product =
        static_cast<std::int64_t>(lane_signed(a, lane, w)) *
        lane_signed(b, lane, w);
    acc.acc[lane] = static_cast<std::int32_t>(
        static_cast<std::uint32_t>(acc.acc[lane]) +
        static_cast<std::uint32_t>(product));
  }
  return acc;
}

std::int32_t packed_dot(std::int32_t acc, Word32 a, Word32 b, ElemWidth w) {
  auto sum = static_cast<std::uint32_t>(acc);
  for (unsigned lane = 0; lane < elements_per_word(w); ++lane) {
    const std::int64_t product =
        static_cast<std::int64_t>(lane_signed(a, lane, w)) *
        lane_signed(b, lane, w);
    sum += static_cast<std::uint32_t>(product);
  }
  return static_cast<std::int32_t>(sum);
}

Word32 pack_lanes(const LaneAcc& acc, ElemWidth w) {
  Word32 out = 0;
  for (unsigned lane = 0; lane < elements_per_word(w); ++lane) {
    out = with_lane(out, lane, static_cast<Word32>(acc.acc[lane]), w);
  }
  return out;
}

}  // namespace nmcsim
