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

#ifndef NMCSIM_XVNMC_HPP_
#define NMCSIM_XVNMC_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include "nmcsim/simd.hpp"

namespace nmcsim {

inline constexpr std::uint32_t kXvnmcOpcode = 0x5B;

enum class VMnemonic : std::uint8_t {
  kVadd,
  kVsub,
  kVmul,
  kVmacc,
  kVmin,
  kVminu,
  kVmax,
  kVmaxu,
  kVand,
  kVor,
  kVxor,
  kVsll,
  kVsrl,
  kVsra,
  kVmv,
  kVslideup,
  kVslidedown,
  kVslide1up,
  kVslide1down,
  kEmvv,
  kEmvx,
};
inline constexpr unsigned kNumVMnemonics = 21;

enum class VVariant : std::uint8_t { kVV, kVX, kVI, kEX, kXE };

std::string_view mnemonic(VMnemonic m);
std::optional<VMnemonic> vmnemonic_from_name(std::string_view name);
std::string_view to_string(VVariant v);
bool variant_allowed(VMnemonic m, VVariant v);
unsigned funct6(VMnemonic m);
// Shifts and slides take a zero-extended immediate; all others sign-extend.
bool imm_is_unsigned(VMnemonic m);

// A decoded xvnmc vector instruction.
//
// Direct form: vd/vs2/vs1 name 1 KiB registers v0..v31. Indirect form: the
// scalar register idx supplies logical vector indices (see resolve_indirect).
// Scalar operands: rs1 is the scalar source of vx forms; imm is the vi
// immediate. For emvv, rs1 holds the value and rs2 the element index; for
// emvx, rd receives vs2[x[rs1]].
struct XvnmcInstr {
  VMnemonic op = VMnemonic::kVadd;
  VVariant variant = VVariant::kVV;
  bool indirect = false;
  std::uint8_t vd = 0;
  std::uint8_t vs2 = 0;
  std::uint8_t vs1 = 0;
  std::uint8_t idx = 0;
  std::uint8_t rs1 = 0;
  std::uint8_t rs2 = 0;
  std::uint8_t rd = 0;
  std::int32_t imm = 0;

  friend bool operator==(const XvnmcInstr&, const XvnmcInstr&) = default;
};

// vsetvli rd, rs1, vtype / vsetivli rd, uimm, vtype / vsetvl rd, rs1, rs2.
struct VsetInstr {
  enum class Kind : std::uint8_t { kVsetvli, kVsetivli, kVsetvl };
  Kind kind = Kind::kVsetvli;
  std::uint8_t rd = 0;
  std::uint8_t rs1 = 0;  // AVL register, or the AVL immediate for vsetivli
  std::uint8_t rs2 = 0;  // vtype register for vsetvl
  ElemWidth sew = ElemWidth::kW8;

  friend bool operator==(const VsetInstr&, const VsetInstr&) = default;
};

enum class RvOp : std::uint8_t {
  kLui,
  kAuipc,
  kJal,
  kJalr,
  kBeq,
  kBne,
  kBlt,
  kBge,
  kBltu,
  kBgeu,
  kLb,
  kLh,
  kLw,
  kLbu,
  kLhu,
  kSb,
  kSh,
  kSw,
  kAddi,
  kSlti,
  kSltiu,
  kXori,
  kOri,
  kAndi,
  kSlli,
  kSrli,
  kSrai,
  kAdd,
  kSub,
  kSll,
  kSlt,
  kSltu,
  kXor,
  kSrl,
  kSra,
  kOr,
  kAnd,
  kFence,
};
inline constexpr unsigned kNumRvOps = 38;

std::string_view mnemonic(RvOp op);
std::optional<RvOp> rvop_from_name(std::string_view name);

// RV32E base instruction. imm holds the sign-extended immediate (for LUI and
// AUIPC the full upper value, i.e. already shifted left by 12).
struct RvInstr {
  RvOp op = RvOp::kAddi;
  std::uint8_t rd = 0;
  std::uint8_t rs1 = 0;
  std::uint8_t rs2 = 0;
  std::int32_t imm = 0;

  friend bool operator==(const RvInstr&, const RvInstr&) = default;
};

using Instruction = std::variant<RvInstr, VsetInstr, XvnmcInstr>;

// Encoders throw kInvalidVariant for mnemonic/variant combinations outside the
// ISA and kFieldOverflow for out-of-range register or immediate fields.
std::uint32_t encode(const XvnmcInstr& instr);
std::uint32_t encode(const VsetInstr& instr);
std::uint32_t encode(const RvInstr& instr);
std::uint32_t encode(const Instruction& instr);

// Throws kIllegalInstruction for anything outside RV32E + xvnmc.
Instruction decode(std::uint32_t word);

struct VectorIndices {
  std::uint8_t vd;
  std::uint8_t vs2;
  std::uint8_t vs1;

  friend bool operator==(const VectorIndices&, const VectorIndices&) = default;
};

// Indirect operand bytes: vd = byte 0, vs2 = byte 1, vs1 = byte 2.
constexpr VectorIndices resolve_indirect(Word32 gpr) {
  return {static_cast<std::uint8_t>(gpr & 0xFF),
          static_cast<std::uint8_t>((gpr >> 8) & 0xFF),
          static_cast<std::uint8_t>((gpr >> 16) & 0xFF)};
}

struct VTypeState {
  std::uint32_t vl = 0;
  ElemWidth sew = ElemWidth::kW8;
};

inline constexpr std::uint32_t kVectorRegisterBytes = 1024;

constexpr std::uint32_t vlmax(ElemWidth sew) {
  return kVectorRegisterBytes / elem_bytes(sew);
}

// RVV vsetvl rule with LMUL = 1. `avl_is_x0` and `rd_is_x0` select the
// special cases: rs1 = x0 with rd != x0 requests VLMAX, and rs1 = rd = x0
// keeps the current vl (clamped to the new VLMAX).
std::uint32_t vsetvl_result(std::uint32_t avl, bool avl_is_x0, bool rd_is_x0,
                            std::uint32_t current_vl, ElemWidth sew);

}  // namespace nmcsim

#endif  // NMCSIM_XVNMC_HPP_
