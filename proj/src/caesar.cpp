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

#include "nmcsim/caesar.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "nmcsim/error.hpp"

namespace nmcsim {

namespace {

constexpr std::array<std::string_view, kNumCaesarOpcodes> kMnemonics = {
    "and",      "or",  "xor",       "add", "sub", "mul",
    "mac_init", "mac", "mac_store", "dot_init", "dot", "dot_store",
    "sll",      "slr", "min",       "max", "csrw"};

constexpr std::uint32_t kOffsetMask = kCaesarWords - 1;

bool is_mac_family(CaesarOpcode op) {
  switch (op) {
    case CaesarOpcode::kMacInit:
    case CaesarOpcode::kMac:
    case CaesarOpcode::kMacStore:
    case CaesarOpcode::kDotInit:
    case CaesarOpcode::kDot:
    case CaesarOpcode::kDotStore:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::optional<CaesarOpcode> caesar_opcode_from_code(unsigned code) {
  if (code >= kNumCaesarOpcodes) return std::nullopt;
  return static_cast<CaesarOpcode>(code);
}

std::optional<CaesarOpcode> caesar_opcode_from_mnemonic(std::string_view m) {
  for (unsigned i = 0; i < kNumCaesarOpcodes; ++i) {
    if (kMnemonics[i] == m) return static_cast<CaesarOpcode>(i);
  }
  return std::nullopt;
}

std::string_view mnemonic(CaesarOpcode op) {
  return kMnemonics[static_cast<unsigned>(op)];
}

bool caesar_writes_dest(CaesarOpcode op) {
  switch (op) {
    case CaesarOpcode::kMacInit:
    case CaesarOpcode::kMac:
    case CaesarOpcode::kDotInit:
    case CaesarOpcode::kDot:
    case CaesarOpcode::kCsrw:
      return false;
    default:
      return true;
  }
}

bool caesar_reads_sources(CaesarOpcode op) { return op != CaesarOpcode::kCsrw; }

CaesarInstr caesar_decode(Word32 wdata, std::uint32_t dest_word_offset) {
  const unsigned code = wdata >> 26;
  auto op = caesar_opcode_from_code(code);
  if (!op) {
    throw Error(ErrorCode::kIllegalOpcode,
                "opcode field 0x" + std::to_string(code) + " is unassigned");
  }
  CaesarInstr instr;
  instr.opcode = *op;
  instr.src1 = static_cast<std::uint16_t>(wdata & kOffsetMask);
  instr.src2 = static_cast<std::uint16_t>((wdata >> 13) & kOffsetMask);
  instr.dest = static_cast<std::uint16_t>(dest_word_offset & kOffsetMask);
  if (instr.opcode == CaesarOpcode::kCsrw &&
      (instr.src1 > 2 || instr.src2 != 0)) {
    throw Error(ErrorCode::kIllegalOpcode, "malformed csrw payload");
  }
  return instr;
}

Word32 caesar_encode(const CaesarInstr& instr) {
  if (instr.src1 >= kCaesarWords || instr.src2 >= kCaesarWords ||
      instr.dest >= kCaesarWords) {
    throw Error(ErrorCode::kOffsetOutOfRange,
                "caesar operand offset exceeds 13 bits");
  }
  return (static_cast<Word32>(instr.opcode) << 26) |
         (static_cast<Word32>(instr.src2) << 13) | instr.src1;
}

CaesarInstr caesar_csrw(ElemWidth w, std::uint16_t dest) {
  CaesarInstr instr;
  instr.opcode = CaesarOpcode::kCsrw;
  instr.src1 = static_cast<std::uint16_t>(w);
  instr.dest = dest;
  return instr;
}

ElemWidth caesar_csrw_width(const CaesarInstr& instr) {
  return static_cast<ElemWidth>(instr.src1 & 3u);
}

void caesar_execute(const CaesarInstr& instr, CaesarArchState& s) {
  const ElemWidth w = s.width;
  const Word32 a = s.mem[instr.src1];
  const Word32 b = s.mem[instr.src2];
  Word32& d = s.mem[instr.dest];
  switch (instr.opcode) {
    case CaesarOpcode::kAnd:
      d = a & b;
      break;
    case CaesarOpcode::kOr:
      d = a | b;
      break;
    case CaesarOpcode::kXor:
      d = a ^ b;
      break;
    case CaesarOpcode::kAdd:
      d = packed_binop(PackedOp::kAdd, a, b, w);
      break;
    case CaesarOpcode::kSub:
      d = packed_binop(PackedOp::kSub, a, b, w);
      break;
    case CaesarOpcode::kMul:
      d = packed_binop(PackedOp::kMul, a, b, w);
      break;
    case CaesarOpcode::kMacInit:
      s.acc = packed_mac(LaneAcc{}, a, b, w);
      break;
    case CaesarOpcode::kMac:
      s.acc = packed_mac(s.acc, a, b, w);
      break;
    case CaesarOpcode::kMacStore:
      s.acc = packed_mac(s.acc, a, b, w);
      d = pack_lanes(s.acc, w);
      break;
    case CaesarOpcode::kDotInit:
      s.dot_acc = packed_dot(0, a, b, w);
      break;
    case CaesarOpcode::kDot:
      s.dot_acc = packed_dot(s.dot_acc, a, b, w);
      break;
    case CaesarOpcode::kDotStore:
      s.dot_acc = packed_dot(s.dot_acc, a, b, w);
      d = static_cast<Word32>(s.dot_acc);
      break;
    case CaesarOpcode::kSll:
      d = packed_binop(PackedOp::kSll, a, b, w);
      break;
    case CaesarOpcode::kSlr:
      d = packed_binop(PackedOp::kSrl, a, b, w);
      break;
    case CaesarOpcode::kMin:
      d = packed_binop(PackedOp::kMin, a, b, w);
      break;
    case CaesarOpcode::kMax:
      d = packed_binop(PackedOp::kMax, a, b, w);
      break;
    case CaesarOpcode::kCsrw:
      s.width = caesar_csrw_width(instr);
      break;
  }
}

CaesarDevice::CaesarDevice(TimingTable timing) : timing_(std::move(timing)) {}

std::uint64_t CaesarDevice::reserve_port(unsigned bank,
                                         std::uint64_t earliest) {
  auto& busy = port_busy_[bank];
  std::uint64_t t = earliest;
  while (busy.count(t) != 0) ++t;
  busy.insert(t);
  return t;
}

// Source fetches win the port over writebacks nobody has read yet; a
// displaced writeback moves to the next free cycle of its bank.
std::uint64_t CaesarDevice::reserve_fetch(unsigned bank,
                                          std::uint64_t earliest) {
  auto& busy = port_busy_[bank];
  auto& movable = movable_wb_[bank];
  std::uint64_t t = earliest;
  while (busy.count(t) != 0) {
    auto wb = movable.find(t);
    if (wb != movable.end()) {
      const std::uint32_t dest = wb->second;
      movable.erase(wb);
      const std::uint64_t moved = reserve_port(bank, t + 1);
      movable[moved] = dest;
      pending_write_[dest] = moved;
      idle_from_ = std::max(idle_from_, moved + 1);
      return t;
    }
    ++t;
  }
  busy.insert(t);
  return t;
}

void CaesarDevice::accept_instruction(const CaesarInstr& instr) {
  const std::uint64_t d = cycle_;
  ++counters_.instructions;
  if (instr.opcode == CaesarOpcode::kCsrw) {
    decode_free_at_ = d + 2;
    idle_from_ = std::max(idle_from_, d + 2);
    caesar_execute(instr, arch_);
    return;
  }
  std::uint64_t f_last = d;
  for (std::uint16_t src : {instr.src1, instr.src2}) {
    std::uint64_t earliest = d + 1;
    auto it = pending_write_.find(src);
    if (it != pending_write_.end() && it->second >= d) {
      earliest = std::max(earliest, it->second + 1);
      // A consumer now depends on this write; pin it.
      movable_wb_[caesar_bank(src)].erase(it->second);
    }
    const unsigned bank = caesar_bank(src);
    f_last = std::max(f_last, reserve_fetch(bank, earliest));
    ++counters_.sram_reads[bank];
  }
  decode_free_at_ = f_last + 1;
  ++counters_.alu_ops;
  if (is_mac_family(instr.opcode)) {
    counters_.macs += elements_per_word(arch_.width);
  }
  const std::uint64_t exec_done = f_last + timing_.caesar_alu_cycles;
  if (caesar_writes_dest(instr.opcode)) {
    const unsigned bank = caesar_bank(instr.dest);
    const std::uint64_t wb = reserve_port(bank, exec_done + 1);
    auto prev = pending_write_.find(instr.dest);
    if (prev != pending_write_.end()) movable_wb_[bank].erase(prev->second);
    pending_write_[instr.dest] = wb;
    movable_wb_[bank][wb] = instr.dest;
    ++counters_.sram_writes[bank];
    idle_from_ = std::max(idle_from_, wb + 1);
  } else {
    idle_from_ = std::max(idle_from_, exec_done + 1);
  }
  caesar_execute(instr, arch_);
}

bool CaesarDevice::step(std::optional<BusWrite> write) {
  bool accepted = true;
  if (write) {
    const std::uint32_t off = write->word_offset & kOffsetMask;
    if (!computing_) {
      if (busy()) {
        accepted = false;
      } else {
        arch_.mem[off] = write->data;
        ++counters_.sram_writes[caesar_bank(off)];
        ++counters_.bus_transactions;
        idle_from_ = std::max(idle_from_, cycle_ + 1);
      }
    } else if (cycle_ < decode_free_at_) {
      accepted = false;
    } else {
      const CaesarInstr instr = caesar_decode(write->data, off);
      ++counters_.bus_transactions;
      accept_instruction(instr);
    }
    if (!accepted) ++counters_.stall_cycles;
  }
  for (unsigned b = 0; b < kCaesarBanks; ++b) {
    port_busy_[b].erase(port_busy_[b].begin(), port_busy_[b].lower_bound(cycle_ + 1));
    movable_wb_[b].erase(movable_wb_[b].begin(), movable_wb_[b].lower_bound(cycle_ + 1));
  }
  ++cycle_;
  return accepted;
}

std::uint64_t CaesarDevice::write(std::uint32_t word_offset, Word32 data) {
  std::uint64_t n = 0;
  bool ok = false;
  while (!ok) {
    ok = step(BusWrite{word_offset, data});
    ++n;
  }
  return n;
}

std::uint64_t CaesarDevice::drain() {
  std::uint64_t n = 0;
  while (busy()) {
    step();
    ++n;
  }
  if (pending_write_.size() > 4096) pending_write_.clear();
  return n;
}

Word32 CaesarDevice::read(std::uint32_t word_offset, std::uint64_t* cycles) {
  std::uint64_t n = drain();
  const std::uint32_t off = word_offset & kOffsetMask;
  const Word32 value = arch_.mem[off];
  ++counters_.sram_reads[caesar_bank(off)];
  ++counters_.bus_transactions;
  step();
  ++n;
  if (cycles != nullptr) *cycles = n;
  return value;
}

Word32 CaesarDevice::peek(std::uint32_t word_offset) const {
  if (word_offset >= kCaesarWords) {
    throw Error(ErrorCode::kOffsetOutOfRange, "caesar word offset");
  }
  return arch_.mem[word_offset];
}

void CaesarDevice::poke(std::uint32_t word_offset, Word32 value) {
  if (word_offset >= kCaesarWords) {
    throw Error(ErrorCode::kOffsetOutOfRange, "caesar word offset");
  }
  arch_.mem[word_offset] = value;
}

}  // namespace nmcsim
