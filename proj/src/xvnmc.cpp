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

#include "nmcsim/xvnmc.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "nmcsim/error.hpp"

namespace nmcsim {

namespace {

struct VInfo {
  std::string_view name;
  unsigned funct6;
  // Allowed variants as a bit set indexed by VVariant.
  unsigned variants;
  bool uimm;
};

constexpr unsigned bit(VVariant v) { return 1u << static_cast<unsigned>(v); }
constexpr unsigned kVvVxVi =
    bit(VVariant::kVV) | bit(VVariant::kVX) | bit(VVariant::kVI);
constexpr unsigned kVvVx = bit(VVariant::kVV) | bit(VVariant::kVX);
constexpr unsigned kVxVi = bit(VVariant::kVX) | bit(VVariant::kVI);

// Order follows VMnemonic.
constexpr std::array<VInfo, kNumVMnemonics> kVInfo = {{
    {"vadd", 0b000000, kVvVxVi, false},
    {"vsub", 0b000010, kVvVx, false},
    {"vmul", 0b100100, kVvVx, false},
    {"vmacc", 0b101101, kVvVx, false},
    {"vmin", 0b000101, kVvVx, false},
    {"vminu", 0b000100, kVvVx, false},
    {"vmax", 0b000111, kVvVx, false},
    {"vmaxu", 0b000110, kVvVx, false},
    {"vand", 0b001001, kVvVxVi, false},
    {"vor", 0b001010, kVvVxVi, false},
    {"vxor", 0b001011, kVvVxVi, false},
    {"vsll", 0b100101, kVvVxVi, true},
    {"vsrl", 0b101000, kVvVxVi, true},
    {"vsra", 0b101001, kVvVxVi, true},
    {"vmv", 0b010111, kVvVxVi, false},
    {"vslideup", 0b001110, kVxVi, true},
    {"vslidedown", 0b001111, kVxVi, true},
    {"vslide1up", 0b001100, bit(VVariant::kVX), false},
    {"vslide1down", 0b001101, bit(VVariant::kVX), false},
    {"emvv", 0b010000, bit(VVariant::kEX), false},
    {"emvx", 0b010001, bit(VVariant::kXE), false},
}};

constexpr unsigned kF3VV = 0b000;
constexpr unsigned kF3VX = 0b100;
constexpr unsigned kF3VI = 0b011;
constexpr unsigned kF3EX = 0b110;
constexpr unsigned kF3Cfg = 0b111;

struct RvInfo {
  std::string_view name;
  unsigned opcode;
  unsigned funct3;
  unsigned funct7;
};

// Order follows RvOp.
constexpr std::array<RvInfo, kNumRvOps> kRvInfo = {{
    {"lui", 0x37, 0, 0},    {"auipc", 0x17, 0, 0}, {"jal", 0x6F, 0, 0},
    {"jalr", 0x67, 0, 0},   {"beq", 0x63, 0, 0},   {"bne", 0x63, 1, 0},
    {"blt", 0x63, 4, 0},    {"bge", 0x63, 5, 0},   {"bltu", 0x63, 6, 0},
    {"bgeu", 0x63, 7, 0},   {"lb", 0x03, 0, 0},    {"lh", 0x03, 1, 0},
    {"lw", 0x03, 2, 0},     {"lbu", 0x03, 4, 0},   {"lhu", 0x03, 5, 0},
    {"sb", 0x23, 0, 0},     {"sh", 0x23, 1, 0},    {"sw", 0x23, 2, 0},
    {"addi", 0x13, 0, 0},   {"slti", 0x13, 2, 0},  {"sltiu", 0x13, 3, 0},
    {"xori", 0x13, 4, 0},   {"ori", 0x13, 6, 0},   {"andi", 0x13, 7, 0},
    {"slli", 0x13, 1, 0},   {"srli", 0x13, 5, 0},  {"srai", 0x13, 5, 0x20},
    {"add", 0x33, 0, 0},    {"sub", 0x33, 0, 0x20}, {"sll", 0x33, 1, 0},
    {"slt", 0x33, 2, 0},    {"sltu", 0x33, 3, 0},  {"xor", 0x33, 4, 0},
    {"srl", 0x33, 5, 0},    {"sra", 0x33, 5, 0x20}, {"or", 0x33, 6, 0},
    {"and", 0x33, 7, 0},    {"fence", 0x0F, 0, 0},
}};

[[noreturn]] void overflow(const std::string& what) {
  throw Error(ErrorCode::kFieldOverflow, what);
}

[[noreturn]] void illegal(std::uint32_t word, const std::string& why) {
  throw Error(ErrorCode::kIllegalInstruction,
              "0x" + std::to_string(word) + ": " + why);
}

void check_gpr(unsigned r, const char* field) {
  if (r >= 16) overflow(std::string(field) + " must be x0..x15");
}

void check_vreg(unsigned r, const char* field) {
  if (r >= 32) overflow(std::string(field) + " must be v0..v31");
}

void check_imm(std::int64_t v, std::int64_t lo, std::int64_t hi,
               const char* what) {
  if (v < lo || v > hi) {
    overflow(std::string(what) + " immediate " + std::to_string(v) +
             " out of range");
  }
}

std::int32_t sext(std::uint32_t v, unsigned bits) {
  const std::uint32_t m = 1u << (bits - 1);
  v &= (bits == 32) ? 0xFFFFFFFFu : ((1u << bits) - 1u);
  return static_cast<std::int32_t>((v ^ m) - m);
}

unsigned variant_funct3(VVariant v) {
  switch (v) {
    case VVariant::kVV:
      return kF3VV;
    case VVariant::kVX:
      return kF3VX;
    case VVariant::kVI:
      return kF3VI;
    case VVariant::kEX:
    case VVariant::kXE:
      return kF3EX;
  }
  return 0;
}

std::uint32_t field(std::uint32_t w, unsigned lo, unsigned n) {
  return (w >> lo) & ((1u << n) - 1u);
}

}  // namespace

std::string_view mnemonic(VMnemonic m) {
  return kVInfo[static_cast<unsigned>(m)].name;
}

std::optional<VMnemonic> vmnemonic_from_name(std::string_view name) {
  for (unsigned i = 0; i < kNumVMnemonics; ++i) {
    if (kVInfo[i].name == name) return static_cast<VMnemonic>(i);
  }
  return std::nullopt;
}

std::string_view to_string(VVariant v) {
  switch (v) {
    case VVariant::kVV:
      return "vv";
    case VVariant::kVX:
      return "vx";
    case VVariant::kVI:
      return "vi";
    case VVariant::kEX:
      return "ex";
    case VVariant::kXE:
      return "xe";
  }
  return "?";
}

bool variant_allowed(VMnemonic m, VVariant v) {
  return (kVInfo[static_cast<unsigned>(m)].variants & bit(v)) != 0;
}

unsigned funct6(VMnemonic m) { return kVInfo[static_cast<unsigned>(m)].funct6; }

bool imm_is_unsigned(VMnemonic m) {
  return kVInfo[static_cast<unsigned>(m)].uimm;
}

std::string_view mnemonic(RvOp op) {
  return kRvInfo[static_cast<unsigned>(op)].name;
}

std::optional<RvOp> rvop_from_name(std::string_view name) {
  for (unsigned i = 0; i < kNumRvOps; ++i) {
    if (kRvInfo[i].name == name) return static_cast<RvOp>(i);
  }
  return std::nullopt;
}

std::uint32_t encode(const XvnmcInstr& in) {
  if (!variant_allowed(in.op, in.variant)) {
    throw Error(ErrorCode::kInvalidVariant,
                std::string(mnemonic(in.op)) + "." +
                    std::string(to_string(in.variant)) + " is not defined");
  }
  const bool scalar_variant =
      in.variant == VVariant::kEX || in.variant == VVariant::kXE;
  if (in.indirect && scalar_variant) {
    throw Error(ErrorCode::kInvalidVariant,
                "indirect addressing applies to vv, vx and vi forms only");
  }
  std::uint32_t rd_field = 0;
  std::uint32_t f19 = 0;
  std::uint32_t f24 = 0;
  const bool is_vmv = in.op == VMnemonic::kVmv;
  if (in.op == VMnemonic::kEmvv) {
    check_vreg(in.vd, "vd");
    check_gpr(in.rs1, "rs1");
    check_gpr(in.rs2, "rs2");
    rd_field = in.vd;
    f19 = in.rs1;
    f24 = in.rs2;
  } else if (in.op == VMnemonic::kEmvx) {
    check_gpr(in.rd, "rd");
    check_gpr(in.rs1, "rs1");
    check_vreg(in.vs2, "vs2");
    rd_field = in.rd;
    f19 = in.rs1;
    f24 = in.vs2;
  } else {
    if (in.indirect) {
      check_gpr(in.idx, "idx");
      f24 = in.idx;
    } else {
      check_vreg(in.vd, "vd");
      rd_field = in.vd;
      if (!is_vmv) {
        check_vreg(in.vs2, "vs2");
        f24 = in.vs2;
      }
    }
    switch (in.variant) {
      case VVariant::kVV:
        if (!in.indirect) {
          check_vreg(in.vs1, "vs1");
          f19 = in.vs1;
        }
        break;
      case VVariant::kVX:
        check_gpr(in.rs1, "rs1");
        f19 = in.rs1;
        break;
      case VVariant::kVI:
        if (imm_is_unsigned(in.op)) {
          check_imm(in.imm, 0, 31, "uimm5");
        } else {
          check_imm(in.imm, -16, 15, "simm5");
        }
        f19 = static_cast<std::uint32_t>(in.imm) & 0x1F;
        break;
      default:
        break;
    }
  }
  return (funct6(in.op) << 26) | (static_cast<std::uint32_t>(in.indirect) << 25) |
         (f24 << 20) | (f19 << 15) | (variant_funct3(in.variant) << 12) |
         (rd_field << 7) | kXvnmcOpcode;
}

std::uint32_t encode(const VsetInstr& in) {
  check_gpr(in.rd, "rd");
  const std::uint32_t vtype = static_cast<std::uint32_t>(in.sew) << 3;
  const std::uint32_t base = (kF3Cfg << 12) | (static_cast<std::uint32_t>(in.rd) << 7) |
                             kXvnmcOpcode;
  switch (in.kind) {
    case VsetInstr::Kind::kVsetvli:
      check_gpr(in.rs1, "rs1");
      return (vtype << 20) | (static_cast<std::uint32_t>(in.rs1) << 15) | base;
    case VsetInstr::Kind::kVsetivli:
      if (in.rs1 > 31) overflow("vsetivli AVL must be 0..31");
      return (0b11u << 30) | (vtype << 20) |
             (static_cast<std::uint32_t>(in.rs1) << 15) | base;
    case VsetInstr::Kind::kVsetvl:
      check_gpr(in.rs1, "rs1");
      check_gpr(in.rs2, "rs2");
      return (1u << 31) | (static_cast<std::uint32_t>(in.rs2) << 20) |
             (static_cast<std::uint32_t>(in.rs1) << 15) | base;
  }
  return base;
}

std::uint32_t encode(const RvInstr& in) {
  const RvInfo& info = kRvInfo[static_cast<unsigned>(in.op)];
  check_gpr(in.rd, "rd");
  check_gpr(in.rs1, "rs1");
  check_gpr(in.rs2, "rs2");
  const std::uint32_t rd = static_cast<std::uint32_t>(in.rd) << 7;
  const std::uint32_t rs1 = static_cast<std::uint32_t>(in.rs1) << 15;
  const std::uint32_t rs2 = static_cast<std::uint32_t>(in.rs2) << 20;
  const std::uint32_t f3 = info.funct3 << 12;
  const auto imm = static_cast<std::uint32_t>(in.imm);
  switch (info.opcode) {
    case 0x37:
    case 0x17:
      if ((imm & 0xFFF) != 0) overflow("upper immediate has low bits set");
      return (imm & 0xFFFFF000u) | rd | info.opcode;
    case 0x6F: {
      check_imm(in.imm, -(1 << 20), (1 << 20) - 2, "jal");
      if ((imm & 1) != 0) overflow("jal offset must be even");
      const std::uint32_t e = ((imm >> 20) & 1) << 31 |
                              ((imm >> 1) & 0x3FF) << 21 |
                              ((imm >> 11) & 1) << 20 |
                              ((imm >> 12) & 0xFF) << 12;
      return e | rd | info.opcode;
    }
    case 0x63: {
      check_imm(in.imm, -4096, 4094, "branch");
      if ((imm & 1) != 0) overflow("branch offset must be even");
      const std::uint32_t e = ((imm >> 12) & 1) << 31 |
                              ((imm >> 5) & 0x3F) << 25 |
                              ((imm >> 1) & 0xF) << 8 | ((imm >> 11) & 1) << 7;
      return e | rs2 | rs1 | f3 | info.opcode;
    }
    case 0x23:
      check_imm(in.imm, -2048, 2047, "store");
      return ((imm >> 5) & 0x7F) << 25 | rs2 | rs1 | f3 | (imm & 0x1F) << 7 |
             info.opcode;
    case 0x13:
      if (in.op == RvOp::kSlli || in.op == RvOp::kSrli || in.op == RvOp::kSrai) {
        check_imm(in.imm, 0, 31, "shift");
        return (info.funct7 << 25) | (imm & 0x1F) << 20 | rs1 | f3 | rd |
               info.opcode;
      }
      [[fallthrough]];
    case 0x03:
    case 0x67:
      check_imm(in.imm, -2048, 2047, std::string(info.name).c_str());
      return (imm & 0xFFF) << 20 | rs1 | f3 | rd | info.opcode;
    case 0x33:
      return (info.funct7 << 25) | rs2 | rs1 | f3 | rd | info.opcode;
    case 0x0F:
      check_imm(in.imm, 0, 0xFFF, "fence");
      return (imm & 0xFFF) << 20 | rs1 | f3 | rd | info.opcode;
    default:
      break;
  }
  overflow("unencodable instruction");
}

std::uint32_t encode(const Instruction& instr) {
  return std::visit([](const auto& i) { return encode(i); }, instr);
}

namespace {

Instruction decode_vector(std::uint32_t w) {
  const unsigned f3 = field(w, 12, 3);
  const unsigned rd = field(w, 7, 5);
  const unsigned f19 = field(w, 15, 5);
  const unsigned f24 = field(w, 20, 5);
  const bool ind = field(w, 25, 1) != 0;
  const unsigned f6 = field(w, 26, 6);
  if (f3 == kF3Cfg) {
    VsetInstr v;
    unsigned vtype = 0;
    if ((w >> 31) == 0) {
      v.kind = VsetInstr::Kind::kVsetvli;
      vtype = field(w, 20, 11);
      v.rs1 = static_cast<std::uint8_t>(f19);
      if (f19 >= 16) illegal(w, "rs1 beyond x15");
    } else if (field(w, 30, 2) == 0b11) {
      v.kind = VsetInstr::Kind::kVsetivli;
      vtype = field(w, 20, 10);
      v.rs1 = static_cast<std::uint8_t>(f19);
    } else {
      if (field(w, 25, 6) != 0) illegal(w, "reserved vset encoding");
      v.kind = VsetInstr::Kind::kVsetvl;
      v.rs1 = static_cast<std::uint8_t>(f19);
      v.rs2 = static_cast<std::uint8_t>(f24);
      if (f19 >= 16 || f24 >= 16) illegal(w, "register beyond x15");
    }
    if (rd >= 16) illegal(w, "rd beyond x15");
    v.rd = static_cast<std::uint8_t>(rd);
    if (v.kind != VsetInstr::Kind::kVsetvl) {
      if ((vtype & ~0x38u) != 0 || (vtype >> 3) > 2) {
        illegal(w, "unsupported vtype");
      }
      v.sew = static_cast<ElemWidth>(vtype >> 3);
    }
    return v;
  }
  VVariant variant;
  switch (f3) {
    case kF3VV:
      variant = VVariant::kVV;
      break;
    case kF3VX:
      variant = VVariant::kVX;
      break;
    case kF3VI:
      variant = VVariant::kVI;
      break;
    case kF3EX:
      variant = VVariant::kEX;
      break;
    default:
      illegal(w, "reserved funct3 for opcode 0x5b");
  }
  std::optional<VMnemonic> op;
  for (unsigned i = 0; i < kNumVMnemonics; ++i) {
    if (kVInfo[i].funct6 == f6) op = static_cast<VMnemonic>(i);
  }
  if (!op) illegal(w, "unassigned funct6");
  if (variant == VVariant::kEX && *op == VMnemonic::kEmvx) {
    variant = VVariant::kXE;
  }
  if (!variant_allowed(*op, variant)) illegal(w, "variant not defined");
  XvnmcInstr in;
  in.op = *op;
  in.variant = variant;
  in.indirect = ind;
  if (variant == VVariant::kEX || variant == VVariant::kXE) {
    if (ind) illegal(w, "indirect flag on scalar-move form");
    if (f19 >= 16) illegal(w, "rs1 beyond x15");
    in.rs1 = static_cast<std::uint8_t>(f19);
    if (*op == VMnemonic::kEmvv) {
      if (f24 >= 16) illegal(w, "rs2 beyond x15");
      in.vd = static_cast<std::uint8_t>(rd);
      in.rs2 = static_cast<std::uint8_t>(f24);
    } else {
      if (rd >= 16) illegal(w, "rd beyond x15");
      in.rd = static_cast<std::uint8_t>(rd);
      in.vs2 = static_cast<std::uint8_t>(f24);
    }
    return in;
  }
  const bool is_vmv = *op == VMnemonic::kVmv;
  if (ind) {
    if (rd != 0) illegal(w, "vd field must be zero in indirect form");
    if (f24 >= 16) illegal(w, "index register beyond x15");
    in.idx = static_cast<std::uint8_t>(f24);
  } else {
    in.vd = static_cast<std::uint8_t>(rd);
    if (is_vmv) {
      if (f24 != 0) illegal(w, "vs2 field must be zero for vmv");
    } else {
      in.vs2 = static_cast<std::uint8_t>(f24);
    }
  }
  switch (variant) {
    case VVariant::kVV:
      if (ind) {
        if (f19 != 0) illegal(w, "vs1 field must be zero in indirect form");
      } else {
        in.vs1 = static_cast<std::uint8_t>(f19);
      }
      break;
    case VVariant::kVX:
      if (f19 >= 16) illegal(w, "rs1 beyond x15");
      in.rs1 = static_cast<std::uint8_t>(f19);
      break;
    case VVariant::kVI:
      in.imm = imm_is_unsigned(*op) ? static_cast<std::int32_t>(f19)
                                    : sext(f19, 5);
      break;
    default:
      break;
  }
  return in;
}

}  // namespace

Instruction decode(std::uint32_t w) {
  if ((w & 3u) != 3u) illegal(w, "compressed encodings are not supported");
  const unsigned opcode = w & 0x7F;
  if (opcode == kXvnmcOpcode) return decode_vector(w);
  const unsigned rd = field(w, 7, 5);
  const unsigned rs1 = field(w, 15, 5);
  const unsigned rs2 = field(w, 20, 5);
  const unsigned f3 = field(w, 12, 3);
  const unsigned f7 = field(w, 25, 7);
  RvInstr in;
  auto regs = [&](bool use_rd, bool use_rs1, bool use_rs2) {
    if ((use_rd && rd >= 16) || (use_rs1 && rs1 >= 16) ||
        (use_rs2 && rs2 >= 16)) {
      illegal(w, "register beyond x15");
    }
    in.rd = use_rd ? static_cast<std::uint8_t>(rd) : 0;
    in.rs1 = use_rs1 ? static_cast<std::uint8_t>(rs1) : 0;
    in.rs2 = use_rs2 ? static_cast<std::uint8_t>(rs2) : 0;
  };
  auto find = [&](unsigned funct3, unsigned funct7) -> RvOp {
    for (unsigned i = 0; i < kNumRvOps; ++i) {
      const RvInfo& r = kRvInfo[i];
      if (r.opcode == opcode && r.funct3 == funct3 && r.funct7 == funct7) {
        return static_cast<RvOp>(i);
      }
    }
    illegal(w, "undefined funct3/funct7");
  };
  switch (opcode) {
    case 0x37:
    case 0x17:
      regs(true, false, false);
      in.op = opcode == 0x37 ? RvOp::kLui : RvOp::kAuipc;
      in.imm = static_cast<std::int32_t>(w & 0xFFFFF000u);
      return in;
    case 0x6F: {
      regs(true, false, false);
      in.op = RvOp::kJal;
      const std::uint32_t imm = (field(w, 31, 1) << 20) |
                                (field(w, 12, 8) << 12) |
                                (field(w, 20, 1) << 11) | (field(w, 21, 10) << 1);
      in.imm = sext(imm, 21);
      return in;
    }
    case 0x67:
      if (f3 != 0) illegal(w, "jalr funct3");
      regs(true, true, false);
      in.op = RvOp::kJalr;
      in.imm = sext(w >> 20, 12);
      return in;
    case 0x63: {
      regs(false, true, true);
      in.op = find(f3, 0);
      const std::uint32_t imm = (field(w, 31, 1) << 12) |
                                (field(w, 7, 1) << 11) |
                                (field(w, 25, 6) << 5) | (field(w, 8, 4) << 1);
      in.imm = sext(imm, 13);
      return in;
    }
    case 0x03:
      regs(true, true, false);
      in.op = find(f3, 0);
      in.imm = sext(w >> 20, 12);
      return in;
    case 0x23:
      regs(false, true, true);
      in.op = find(f3, 0);
      in.imm = sext((f7 << 5) | rd, 12);
      return in;
    case 0x13:
      regs(true, true, false);
      if (f3 == 1 || f3 == 5) {
        in.op = find(f3, f7);
        in.imm = static_cast<std::int32_t>(rs2);
      } else {
        in.op = find(f3, 0);
        in.imm = sext(w >> 20, 12);
      }
      return in;
    case 0x33:
      if (f7 == 0x01) illegal(w, "multiply/divide extension is not present");
      regs(true, true, true);
      in.op = find(f3, f7);
      return in;
    case 0x0F:
      if (f3 != 0) illegal(w, "fence.i and other misc-mem forms");
      regs(true, true, false);
      in.op = RvOp::kFence;
      in.imm = static_cast<std::int32_t>(w >> 20);
      return in;
    default:
      illegal(w, "opcode outside RV32E and xvnmc");
  }
}

std::uint32_t vsetvl_result(std::uint32_t avl, bool avl_is_x0, bool rd_is_x0,
                            std::uint32_t current_vl, ElemWidth sew) {
  const std::uint32_t max = vlmax(sew);
  if (!avl_is_x0) return std::min(avl, max);
  if (!rd_is_x0) return max;
  return std::min(current_vl, max);
}

}  // namespace nmcsim
