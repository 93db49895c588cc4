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
#include <string>

#include "nmcsim/caesar_asm.hpp"
#include "nmcsim/error.hpp"
#include "support.hpp"

namespace nmcsim {
namespace {

ErrorCode code_of(const std::string& src) {
  try {
    asm_caesar(src);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << src;
  return ErrorCode::kInvalidArgument;
}

TEST(CaesarAsm, AddEncodes) {
  const CommandStream s = asm_caesar("add 0x5, 0x10, 0x20");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.entries[0], (CommandEntry{0x5, 0x0C040010}));
}

TEST(CaesarAsm, CsrwWidthField) {
  const CommandStream s = asm_caesar("csrw 16");
  ASSERT_EQ(s.size(), 1u);
  const CaesarInstr in = caesar_decode(s.entries[0].data, s.entries[0].word_offset);
  EXPECT_EQ(in.opcode, CaesarOpcode::kCsrw);
  EXPECT_EQ(in.src1, 1);
}

TEST(CaesarAsm, Errors) {
  EXPECT_EQ(code_of("add 0x5, 0x10"), ErrorCode::kParseError);
  EXPECT_EQ(code_of("add 0x5, 0x10, 8192"), ErrorCode::kOffsetOutOfRange);
  EXPECT_EQ(code_of("frob 1, 2, 3"), ErrorCode::kUnknownMnemonic);
  EXPECT_EQ(code_of("csrw 12"), ErrorCode::kParseError);
}

TEST(CaesarAsm, ParseErrorPosition) {
  try {
    asm_caesar("csrw 8\n  add 1, 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GE(e.column(), 1);
  }
}

TEST(CaesarAsm, LayoutSymbols) {
  const CommandStream s = asm_caesar(R"(
.layout
  a = 0x0000
  b = 0x1000
  c = 0x0800
.end
csrw 8          # width
add  c+2, a+1, b
mac  a, b       ; no result
)");
  ASSERT_EQ(s.size(), 3u);
  const CaesarInstr add = caesar_decode(s.entries[1].data, s.entries[1].word_offset);
  EXPECT_EQ(add, (CaesarInstr{CaesarOpcode::kAdd, 1, 0x1000, 0x802}));
  const CaesarInstr mac = caesar_decode(s.entries[2].data, s.entries[2].word_offset);
  EXPECT_EQ(mac.opcode, CaesarOpcode::kMac);
  EXPECT_EQ(mac.src2, 0x1000);
}

TEST(CaesarAsm, Disasm) {
  CommandStream s;
  s.entries.push_back({0x5, 0x0C040010});
  EXPECT_EQ(disasm_caesar(s), "add 0x5, 0x10, 0x20\n");
  EXPECT_EQ(disasm_caesar(CommandStream{}), "");
  s.entries.push_back({0, 0x3Fu << 26});
  try {
    disasm_caesar(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIllegalOpcode);
  }
}

TEST(CaesarAsm, TextRoundTripRandom) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    CommandStream s;
    const int n = static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) s.push(testing::random_caesar(rng));
    ASSERT_EQ(asm_caesar(disasm_caesar(s)), s);
    ASSERT_EQ(stream_from_text(stream_to_text(s)), s);
    ASSERT_EQ(stream_from_json(stream_to_json(s)), s);
  }
}

}  // namespace
}  // namespace nmcsim
