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

// Shared helpers for the unit and acceptance tests.

#ifndef NMCSIM_TESTS_SUPPORT_HPP_
#define NMCSIM_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nmcsim/caesar.hpp"
#include "nmcsim/fabric.hpp"
#include "nmcsim/xvnmc.hpp"
#include "nmcsim/xvnmc_asm.hpp"

namespace nmcsim::testing {

inline std::uint32_t pick(std::mt19937_64& rng, std::uint32_t lo, std::uint32_t hi) {
  return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
}

inline std::int32_t pick_signed(std::mt19937_64& rng, std::int32_t lo, std::int32_t hi) {
  return std::uniform_int_distribution<std::int32_t>(lo, hi)(rng);
}

// Random legal Caesar instruction in canonical form (the fields the encoder
// does not carry are zero).
inline CaesarInstr random_caesar(std::mt19937_64& rng) {
  CaesarInstr in;
  in.opcode = static_cast<CaesarOpcode>(pick(rng, 0, kNumCaesarOpcodes - 1));
  in.dest = static_cast<std::uint16_t>(pick(rng, 0, kCaesarWords - 1));
  if (in.opcode == CaesarOpcode::kCsrw) {
    in.src1 = static_cast<std::uint16_t>(pick(rng, 0, 2));
  } else {
    in.src1 = static_cast<std::uint16_t>(pick(rng, 0, kCaesarWords - 1));
    in.src2 = static_cast<std::uint16_t>(pick(rng, 0, kCaesarWords - 1));
  }
  return in;
}

inline XvnmcInstr random_xvnmc(std::mt19937_64& rng) {
  XvnmcInstr in;
  for (;;) {
    in = XvnmcInstr{};
    in.op = static_cast<VMnemonic>(pick(rng, 0, kNumVMnemonics - 1));
    in.variant = static_cast<VVariant>(pick(rng, 0, 4));
    if (variant_allowed(in.op, in.variant)) break;
  }
  if (in.op == VMnemonic::kEmvv) {
    in.vd = static_cast<std::uint8_t>(pick(rng, 0, 31));
    in.rs1 = static_cast<std::uint8_t>(pick(rng, 0, 15));
    in.rs2 = static_cast<std::uint8_t>(pick(rng, 0, 15));
    return in;
  }
  if (in.op == VMnemonic::kEmvx) {
    in.rd = static_cast<std::uint8_t>(pick(rng, 0, 15));
    in.rs1 = static_cast<std::uint8_t>(pick(rng, 0, 15));
    in.vs2 = static_cast<std::uint8_t>(pick(rng, 0, 31));
    return in;
  }
  in.indirect = pick(rng, 0, 1) == 1;
  if (in.indirect) {
    in.idx = static_cast<std::uint8_t>(pick(rng, 0, 15));
  } else {
    in.vd = static_cast<std::uint8_t>(pick(rng, 0, 31));
    if (in.op != VMnemonic::kVmv) in.vs2 = static_cast<std::uint8_t>(pick(rng, 0, 31));
  }
  switch (in.variant) {
    case VVariant::kVV:
      if (!in.indirect) in.vs1 = static_cast<std::uint8_t>(pick(rng, 0, 31));
      break;
    case VVariant::kVX:
      in.rs1 = static_cast<std::uint8_t>(pick(rng, 0, 15));
      break;
    case VVariant::kVI:
      in.imm = imm_is_unsigned(in.op) ? pick_signed(rng, 0, 31) : pick_signed(rng, -16, 15);
      break;
    default:
      break;
  }
  return in;
}

inline VsetInstr random_vset(std::mt19937_64& rng) {
  VsetInstr in;
  in.kind = static_cast<VsetInstr::Kind>(pick(rng, 0, 2));
  in.rd = static_cast<std::uint8_t>(pick(rng, 0, 15));
  if (in.kind == VsetInstr::Kind::kVsetivli) {
    in.rs1 = static_cast<std::uint8_t>(pick(rng, 0, 31));
  } else {
    in.rs1 = static_cast<std::uint8_t>(pick(rng, 0, 15));
  }
  if (in.kind == VsetInstr::Kind::kVsetvl) {
    in.rs2 = static_cast<std::uint8_t>(pick(rng, 0, 15));
  } else {
    in.sew = static_cast<ElemWidth>(pick(rng, 0, 2));
  }
  return in;
}

inline RvInstr random_rv(std::mt19937_64& rng) {
  RvInstr in;
  in.op = static_cast<RvOp>(pick(rng, 0, kNumRvOps - 1));
  auto reg = [&rng] { return static_cast<std::uint8_t>(pick(rng, 0, 15)); };
  switch (in.op) {
    case RvOp::kLui:
    case RvOp::kAuipc:
      in.rd = reg();
      in.imm = static_cast<std::int32_t>(pick(rng, 0, 0xFFFFF) << 12);
      break;
    case RvOp::kJal:
      in.rd = reg();
      in.imm = pick_signed(rng, -(1 << 19), (1 << 19) - 1) * 2;
      break;
    case RvOp::kBeq:
    case RvOp::kBne:
    case RvOp::kBlt:
    case RvOp::kBge:
    case RvOp::kBltu:
    case RvOp::kBgeu:
      in.rs1 = reg();
      in.rs2 = reg();
      in.imm = pick_signed(rng, -2048, 2047) * 2;
      break;
    case RvOp::kSb:
    case RvOp::kSh:
    case RvOp::kSw:
      in.rs1 = reg();
      in.rs2 = reg();
      in.imm = pick_signed(rng, -2048, 2047);
      break;
    case RvOp::kSlli:
    case RvOp::kSrli:
    case RvOp::kSrai:
      in.rd = reg();
      in.rs1 = reg();
      in.imm = pick_signed(rng, 0, 31);
      break;
    case RvOp::kAdd:
    case RvOp::kSub:
    case RvOp::kSll:
    case RvOp::kSlt:
    case RvOp::kSltu:
    case RvOp::kXor:
    case RvOp::kSrl:
    case RvOp::kSra:
    case RvOp::kOr:
    case RvOp::kAnd:
      in.rd = reg();
      in.rs1 = reg();
      in.rs2 = reg();
      break;
    case RvOp::kFence:
      in.imm = pick_signed(rng, 0, 0xFFF);
      break;
    default:  // I-type: jalr, loads, ALU immediates
      in.rd = reg();
      in.rs1 = reg();
      in.imm = pick_signed(rng, -2048, 2047);
      break;
  }
  return in;
}

inline Instruction random_instruction(std::mt19937_64& rng) {
  switch (pick(rng, 0, 2)) {
    case 0:
      return random_rv(rng);
    case 1:
      return random_vset(rng);
    default:
      return random_xvnmc(rng);
  }
}

// Appends the termination store used by every test program.
inline std::string with_exit(const std::string& body) {
  return body + "\n    lui  x13, 0x8\n    sw   x0, 0(x13)\n";
}

}  // namespace nmcsim::testing

#endif  // NMCSIM_TESTS_SUPPORT_HPP_
