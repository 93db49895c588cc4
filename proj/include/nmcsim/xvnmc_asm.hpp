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

#ifndef NMCSIM_XVNMC_ASM_HPP_
#define NMCSIM_XVNMC_ASM_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nmcsim/xvnmc.hpp"

namespace nmcsim {

inline constexpr std::uint32_t kEmemBytes = 512;

// Assembles RV32E + xvnmc source into little-endian instruction words with the
// entry point at offset 0.
//
// Vector mnemonics take an optional "xvnmc." prefix; an "r" before the
// variant selects indirect addressing (xvnmc.vaddr.vv x5). Operand order is
// vd, vs2, vs1/rs1/imm for every vector instruction, vmv omits vs2, and
// emvv/emvx are written `emvv vd, rs_value, rs_index` and
// `emvx rd, vs2, rs_index`. Branch and jump targets are labels or literal
// byte offsets. Supported pseudo-instructions: nop, li, mv, not, neg, j, jr,
// ret, beqz, bnez, bgt, ble, bgtu, bleu. `.word` emits a raw word.
//
// Throws ParseError with line/column, or kProgramTooLarge when the image
// exceeds `max_bytes`.
std::vector<std::uint32_t> asm_xvnmc(std::string_view source,
                                     std::uint32_t max_bytes = kEmemBytes);

// Canonical text of one instruction; asm_xvnmc accepts it back.
std::string disasm(const Instruction& instr);

// One instruction per line. With `listing`, each line is prefixed by the byte
// offset and the raw word.
std::string disasm_xvnmc(const std::vector<std::uint32_t>& words,
                         bool listing = false);

std::vector<std::uint8_t> words_to_bytes(const std::vector<std::uint32_t>& w);
// Throws kInvalidArgument when the size is not a multiple of 4.
std::vector<std::uint32_t> bytes_to_words(const std::vector<std::uint8_t>& b);

}  // namespace nmcsim

#endif  // NMCSIM_XVNMC_ASM_HPP_
