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


#include <gtest/gtest.h>

#include <random>
#include <set>
#include <string>
#include <variant>

#include "nmcsim/error.hpp"
#include "nmcsim/xvnmc.hpp"
#include "nmcsim/xvnmc_asm.hpp"
#include "support.hpp"

namespace nmcsim {
namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kInvalidArgument;
}

TEST(XvnmcEncode, VaddVvDirect) {
  XvnmcInstr in;
  in.op = VMnemonic::kVadd;
  in.vd = 2;
  in.vs2 = 1;
  in.vs1 = 0;
  EXPECT_EQ(encode(in), 0x0010015Bu);
  EXPECT_EQ(std::get<XvnmcInstr>(decode(0x0010015B)), in);
}

TEST(XvnmcEncode, IndirectCarriesGprInVs2Field) {
  XvnmcInstr in;
  in.op = VMnemonic::kVadd;
  in.indirect = true;
  in.idx = 5;
  const std::uint32_t w = encode(in);
  EXPECT_EQ(w & 0x7F, kXvnmcOpcode);
  EXPECT_EQ((w >> 25) & 1, 1u);
  EXPECT_EQ((w >> 20) & 0x1F, 5u);
  EXPECT_EQ((w >> 7) & 0x1F, 0u);
  EXPECT_EQ((w >> 15) & 0x1F, 0u);
}

TEST(XvnmcEncode, Funct3PerVariant) {
  XvnmcInstr in;
  in.op = VMnemonic::kVadd;
  in.variant = VVariant::kVX;
  EXPECT_EQ((encode(in) >> 12) & 7, 0b100u);
  in.variant = VVariant::kVI;
  EXPECT_EQ((encode(in) >> 12) & 7, 0b011u);
  in.op = VMnemonic::kEmvx;
  in.variant = VVariant::kXE;
  EXPECT_EQ((encode(in) >> 12) & 7, 0b110u);
}

TEST(XvnmcEncode, StandardFunct6) {
  EXPECT_EQ(funct6(VMnemonic::kVadd), 0b000000u);
  EXPECT_EQ(funct6(VMnemonic::kVsub), 0b000010u);
  EXPECT_EQ(funct6(VMnemonic::kVminu), 0b000100u);
  EXPECT_EQ(funct6(VMnemonic::kVmin), 0b000101u);
  EXPECT_EQ(funct6(VMnemonic::kVmaxu), 0b000110u);
  EXPECT_EQ(funct6(VMnemonic::kVmax), 0b000111u);
  EXPECT_EQ(funct6(VMnemonic::kVand), 0b001001u);
  EXPECT_EQ(funct6(VMnemonic::kVor), 0b001010u);
  EXPECT_EQ(funct6(VMnemonic::kVxor), 0b001011u);
  EXPECT_EQ(funct6(VMnemonic::kVslideup), 0b001110u);
  EXPECT_EQ(funct6(VMnemonic::kVslidedown), 0b001111u);
  EXPECT_EQ(funct6(VMnemonic::kVmv), 0b010111u);
  EXPECT_EQ(funct6(VMnemonic::kVsll), 0b100101u);
  EXPECT_EQ(funct6(VMnemonic::kVsrl), 0b101000u);
  EXPECT_EQ(funct6(VMnemonic::kVsra), 0b101001u);
}

TEST(XvnmcEncode, Errors) {
  XvnmcInstr emvv;
  emvv.op = VMnemonic::kEmvv;
  emvv.variant = VVariant::kVI;
  EXPECT_EQ(code_of([&] { encode(emvv); }), ErrorCode::kInvalidVariant);
  XvnmcInstr big;
  big.vd = 32;
  EXPECT_EQ(code_of([&] { encode(big); }), ErrorCode::kFieldOverflow);
  RvInstr rv;
  rv.op = RvOp::kAdd;
  rv.rd = 16;
  EXPECT_EQ(code_of([&] { encode(rv); }), ErrorCode::kFieldOverflow);
}

TEST(XvnmcDecode, RejectsOutsideRv32e) {
  // mul x1, x2, x3 (RV32M)
  EXPECT_EQ(code_of([] { decode(0x023100B3); }), ErrorCode::kIllegalInstruction);
  // add x16, x0, x0
  EXPECT_EQ(code_of([] { decode(0x00000833); }), ErrorCode::kIllegalInstruction);
  EXPECT_EQ(code_of([] { decode(0); }), ErrorCode::kIllegalInstruction);
}

TEST(XvnmcDecode, AddiBaseIsa) {
  const auto in = std::get<RvInstr>(decode(0x02A00293));  // addi x5, x0, 42
  EXPECT_EQ(in.op, RvOp::kAddi);
  EXPECT_EQ(in.rd, 5);
  EXPECT_EQ(in.rs1, 0);
  EXPECT_EQ(in.imm, 42);
}

TEST(XvnmcIndirect, ByteOrder) {
  EXPECT_EQ(resolve_indirect(0x00030201), (VectorIndices{1, 2, 3}));
  EXPECT_EQ(resolve_indirect(0), (VectorIndices{0, 0, 0}));
  EXPECT_EQ(resolve_indirect(0xFF0000FF), (VectorIndices{255, 0, 0}));
}

TEST(XvnmcVset, ClampsToVlmax) {
  EXPECT_EQ(vlmax(ElemWidth::kW8), 1024u);
  EXPECT_EQ(vlmax(ElemWidth::kW16), 512u);
  EXPECT_EQ(vlmax(ElemWidth::kW32), 256u);
  EXPECT_EQ(vsetvl_result(2000, false, false, 0, ElemWidth::kW8), 1024u);
  EXPECT_EQ(vsetvl_result(300, false, false, 0, ElemWidth::kW32), 256u);
  EXPECT_EQ(vsetvl_result(17, false, false, 0, ElemWidth::kW16), 17u);
  EXPECT_EQ(vsetvl_result(0, true, false, 5, ElemWidth::kW16), 512u);
  EXPECT_EQ(vsetvl_result(0, true, true, 700, ElemWidth::kW16), 512u);
  EXPECT_EQ(vsetvl_result(0, true, true, 40, ElemWidth::kW16), 40u);
}

TEST(XvnmcEncode, EncodingsAreCollisionFree) {
  std::set<std::uint32_t> seen;
  unsigned count = 0;
  for (unsigned m = 0; m < kNumVMnemonics; ++m) {
    for (unsigned v = 0; v < 5; ++v) {
      XvnmcInstr in;
      in.op = static_cast<VMnemonic>(m);
      in.variant = static_cast<VVariant>(v);
      if (!variant_allowed(in.op, in.variant)) continue;
      for (bool ind : {false, true}) {
        if (ind && v > 2) continue;
        in.indirect = ind;
        seen.insert(encode(in));
        ++count;
      }
    }
  }
  EXPECT_EQ(seen.size(), count);
  EXPECT_GT(count, 40u);
}

TEST(XvnmcRoundTrip, RandomLegalInstructions) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 20000; ++i) {
    const Instruction in = testing::random_instruction(rng);
    const std::uint32_t w = encode(in);
    const Instruction back = decode(w);
    ASSERT_EQ(back, in) << disasm(in);
    ASSERT_EQ(encode(back), w);
    ASSERT_EQ(asm_xvnmc(disasm(in)), std::vector<std::uint32_t>{w}) << disasm(in);
  }
}

TEST(XvnmcAsm, Basics) {
  EXPECT_EQ(asm_xvnmc("xvnmc.vadd.vv v2, v1, v0"), std::vector<std::uint32_t>{0x0010015B});
  EXPECT_EQ(asm_xvnmc("vadd.vv v2, v1, v0"), std::vector<std::uint32_t>{0x0010015B});
  const auto ind = asm_xvnmc("xvnmc.vaddr.vv x5");
  const auto in = std::get<XvnmcInstr>(decode(ind.at(0)));
  EXPECT_TRUE(in.indirect);
  EXPECT_EQ(in.idx, 5);
}

TEST(XvnmcAsm, ForwardBranchOffset) {
  const auto w = asm_xvnmc(R"(
    beq  x1, x2, done
    addi x1, x1, 1
    addi x1, x1, 1
done:
    nop
)");
  ASSERT_EQ(w.size(), 4u);
  const auto b = std::get<RvInstr>(decode(w[0]));
  EXPECT_EQ(b.op, RvOp::kBeq);
  EXPECT_EQ(b.imm, 12);
  const auto back = asm_xvnmc("loop:\n nop\n bne x1, x0, loop\n");
  EXPECT_EQ(std::get<RvInstr>(decode(back[1])).imm, -4);
}

TEST(XvnmcAsm, ProgramSizeLimit) {
  std::string src;
  for (int i = 0; i < 128; ++i) src += "nop\n";
  EXPECT_EQ(asm_xvnmc(src).size(), 128u);
  src += "nop\n";
  EXPECT_EQ(code_of([&] { asm_xvnmc(src); }), ErrorCode::kProgramTooLarge);
}

TEST(XvnmcAsm, ParseErrors) {
  try {
    asm_xvnmc("nop\nvadd.vv v2, v1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_EQ(code_of([] { asm_xvnmc("emvv.vi v1, 3, 4"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { asm_xvnmc("j nowhere"); }), ErrorCode::kParseError);
}

TEST(XvnmcAsm, ListingRoundTrip) {
  const std::string src = R"(
    li   x5, 0x00030201
    vsetvli x6, x7, e16
    xvnmc.vmaccr.vx x5, x8
    emvx x9, v3, x4
    emvv v3, x9, x4
    lui  x13, 0x8
    sw   x0, 0(x13)
)";
  const auto words = asm_xvnmc(src);
  EXPECT_EQ(asm_xvnmc(disasm_xvnmc(words)), words);
  const std::string listing = disasm_xvnmc(words, true);
  EXPECT_NE(listing.find("0000: "), std::string::npos);
  EXPECT_EQ(bytes_to_words(words_to_bytes(words)), words);
  EXPECT_EQ(code_of([] { bytes_to_words({1, 2, 3}); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace nmcsim
