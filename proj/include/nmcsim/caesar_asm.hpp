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

#ifndef NMCSIM_CAESAR_ASM_HPP_
#define NMCSIM_CAESAR_ASM_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nmcsim/caesar.hpp"

namespace nmcsim {

struct CommandEntry {
  std::uint16_t word_offset = 0;
  Word32 data = 0;

  friend bool operator==(const CommandEntry&, const CommandEntry&) = default;
};

// Ordered bus writes that drive Caesar in computing mode.
struct CommandStream {
  std::vector<CommandEntry> entries;

  void push(const CaesarInstr& instr) {
    entries.push_back({instr.dest, caesar_encode(instr)});
  }
  std::size_t size() const { return entries.size(); }

  friend bool operator==(const CommandStream&, const CommandStream&) = default;
};

// Assembles Caesar source text.
//
//   .layout            optional symbol block, one `name = value` per line
//     a = 0x0000
//     b = 0x1000
//   .end
//   csrw 8             element width: 8, 16 or 32
//   add  c, a, b+1     dest, src1, src2
//   mac  a, b          ops without a result take an optional leading dest
//
// Operands are integers (decimal or 0x hex), symbols, or symbol+N / symbol-N.
// Comments start with '#' or ';'.
CommandStream asm_caesar(std::string_view source);

// Inverse of asm_caesar; offsets are printed in hex.
std::string disasm_caesar(const CommandStream& stream);
std::string disasm_caesar(const CaesarInstr& instr);

// `offset_hex data_hex` per line.
std::string stream_to_text(const CommandStream& stream);
CommandStream stream_from_text(std::string_view text);

// JSON array of {"offset": int, "data": int}.
std::string stream_to_json(const CommandStream& stream);
CommandStream stream_from_json(std::string_view text);

}  // namespace nmcsim

#endif  // NMCSIM_CAESAR_ASM_HPP_
