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

#ifndef NMCSIM_CAESAR_HPP_
#define NMCSIM_CAESAR_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nmcsim/events.hpp"
#include "nmcsim/simd.hpp"
#include "nmcsim/timing.hpp"

namespace nmcsim {

inline constexpr std::uint32_t kCaesarWords = 8192;
inline constexpr std::uint32_t kCaesarBankWords = 4096;
inline constexpr std::uint32_t kCaesarBanks = 2;

enum class CaesarOpcode : std::uint8_t {
  kAnd = 0x00,
  kOr = 0x01,
  kXor = 0x02,
  kAdd = 0x03,
  kSub = 0x04,
  kMul = 0x05,
  kMacInit = 0x06,
  kMac = 0x07,
  kMacStore = 0x08,
  kDotInit = 0x09,
  kDot = 0x0A,
  kDotStore = 0x0B,
  kSll = 0x0C,
  kSlr = 0x0D,
  kMin = 0x0E,
  kMax = 0x0F,
  kCsrw = 0x10,
};
inline constexpr unsigned kNumCaesarOpcodes = 17;

std::optional<CaesarOpcode> caesar_opcode_from_code(unsigned code);
std::optional<CaesarOpcode> caesar_opcode_from_mnemonic(std::string_view m);
std::string_view mnemonic(CaesarOpcode op);

// True for opcodes that write a result word to dest.
bool caesar_writes_dest(CaesarOpcode op);
// True for opcodes that fetch src1 and src2.
bool caesar_reads_sources(CaesarOpcode op);

struct CaesarInstr {
  CaesarOpcode opcode = CaesarOpcode::kAnd;
  std::uint16_t src1 = 0;
  std::uint16_t src2 = 0;
  std::uint16_t dest = 0;

  friend bool operator==(const CaesarInstr&, const CaesarInstr&) = default;
};

// Instruction word: opcode[31:26] | src2[25:13] | src1[12:0]. The destination
// is the word offset of the bus write that carries the instruction.
CaesarInstr caesar_decode(Word32 wdata, std::uint32_t dest_word_offset);
Word32 caesar_encode(const CaesarInstr& instr);

// CSRW carries the element width in the low two bits of src1.
CaesarInstr caesar_csrw(ElemWidth w, std::uint16_t dest = 0);
ElemWidth caesar_csrw_width(const CaesarInstr& instr);

inline constexpr unsigned caesar_bank(std::uint32_t word_offset) {
  return word_offset < kCaesarBankWords ? 0 : 1;
}

struct CaesarArchState {
  std::vector<Word32> mem = std::vector<Word32>(kCaesarWords, 0);
  LaneAcc acc;
  std::int32_t dot_acc = 0;
  ElemWidth width = ElemWidth::kW32;
};

// Applies the architectural effect of one instruction.
void caesar_execute(const CaesarInstr& instr, CaesarArchState& state);

// Cycle-stepped NM-Caesar model. Instructions are scheduled when they are
// accepted: source fetches take the earliest cycle in which the owning bank
// port is free and any pending write to the same word has landed, execution
// occupies the ALU for caesar_alu_cycles, and the writeback reserves one
// port cycle of the destination bank. A later fetch may push a writeback that
// no instruction waits on to the next free cycle. Architectural effects are
// applied in program order at acceptance.
class CaesarDevice {
 public:
  struct BusWrite {
    std::uint32_t word_offset;
    Word32 data;
  };

  explicit CaesarDevice(TimingTable timing = TimingTable::preset("table-v"));

  // Advances one cycle, optionally presenting a bus write. Returns whether the
  // write was accepted (always true when no write is presented).
  bool step(std::optional<BusWrite> write = std::nullopt);

  // Issues one bus write, stepping until it is accepted. Returns the cycles
  // spent.
  std::uint64_t write(std::uint32_t word_offset, Word32 data);

  // Host read: drains the pipeline in computing mode, then costs one cycle.
  Word32 read(std::uint32_t word_offset, std::uint64_t* cycles = nullptr);

  // Steps until no instruction is in flight. Returns the cycles spent.
  std::uint64_t drain();

  bool busy() const { return cycle_ < idle_from_; }
  bool computing_mode() const { return computing_; }
  // Mode changes go through the host fabric, which charges the bus write.
  void set_computing_mode(bool on) { computing_ = on; }

  std::uint64_t cycle() const { return cycle_; }
  ElemWidth width() const { return arch_.width; }
  const CaesarArchState& arch() const { return arch_; }
  const EventCounters& counters() const { return counters_; }
  const TimingTable& timing() const { return timing_; }

  // Zero-time backdoor access for test setup and result inspection.
  Word32 peek(std::uint32_t word_offset) const;
  void poke(std::uint32_t word_offset, Word32 value);

 private:
  std::uint64_t reserve_port(unsigned bank, std::uint64_t earliest);
  std::uint64_t reserve_fetch(unsigned bank, std::uint64_t earliest);
  void accept_instruction(const CaesarInstr& instr);

  TimingTable timing_;
  CaesarArchState arch_;
  EventCounters counters_{kCaesarBanks};
  bool computing_ = false;
  std::uint64_t cycle_ = 0;
  std::uint64_t decode_free_at_ = 0;
  std::uint64_t idle_from_ = 0;
  std::set<std::uint64_t> port_busy_[kCaesarBanks];
  // Writebacks with no scheduled reader, by cycle.
  std::map<std::uint64_t, std::uint32_t> movable_wb_[kCaesarBanks];
  std::unordered_map<std::uint32_t, std::uint64_t> pending_write_;
};

}  // namespace nmcsim

#endif  // NMCSIM_CAESAR_HPP_
