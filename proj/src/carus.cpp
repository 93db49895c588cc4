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

#include "nmcsim/carus.hpp"

#include <algorithm>
#include <variant>

#include "nmcsim/error.hpp"

namespace nmcsim {

namespace {

std::uint32_t ceil_div(std::uint32_t a, std::uint32_t b) {
  return (a + b - 1) / b;
}

std::optional<PackedOp> arith_op(VMnemonic m) {
  switch (m) {
    case VMnemonic::kVadd:
      return PackedOp::kAdd;
    case VMnemonic::kVsub:
      return PackedOp::kSub;
    case VMnemonic::kVmul:
      return PackedOp::kMul;
    case VMnemonic::kVmin:
      return PackedOp::kMin;
    case VMnemonic::kVminu:
      return PackedOp::kMinU;
    case VMnemonic::kVmax:
      return PackedOp::kMax;
    case VMnemonic::kVmaxu:
      return PackedOp::kMaxU;
    case VMnemonic::kVand:
      return PackedOp::kAnd;
    case VMnemonic::kVor:
      return PackedOp::kOr;
    case VMnemonic::kVxor:
      return PackedOp::kXor;
    case VMnemonic::kVsll:
      return PackedOp::kSll;
    case VMnemonic::kVsrl:
      return PackedOp::kSrl;
    case VMnemonic::kVsra:
      return PackedOp::kSra;
    default:
      return std::nullopt;
  }
}

bool is_slide(VMnemonic m) {
  return m == VMnemonic::kVslideup || m == VMnemonic::kVslidedown ||
         m == VMnemonic::kVslide1up || m == VMnemonic::kVslide1down;
}

}  // namespace

CarusDevice::CarusDevice(TimingTable timing, VrfLayout layout)
    : timing_(std::move(timing)),
      layout_(layout),
      vrf_(layout.total_bytes(), 0),
      counters_(layout.num_banks) {}

// ---------------------------------------------------------------------------
// Host side.

Word32 CarusDevice::bus_read(std::uint32_t addr) {
  if (addr % 4 != 0) {
    throw Error(ErrorCode::kAddressOutOfRange, "unaligned bus read");
  }
  Word32 value = 0;
  bool vrf_access = false;
  if (config_mode_) {
    if (addr < kEmemBytes) {
      value = peek_emem(addr / 4);
    } else if (addr == kCarusCtrlAddr) {
      value = (running_ ? kCtrlStart : 0) | (done_ ? kCtrlDone : 0) |
              (irq_enable_ ? kCtrlIrqEnable : 0) | (error_ ? kCtrlError : 0);
      done_ = false;
    } else if (addr == kCarusBootPcAddr) {
      value = boot_pc_;
    } else {
      throw Error(ErrorCode::kAddressOutOfRange,
                  "configuration offset " + std::to_string(addr) +
                      " is unmapped");
    }
  } else {
    if (addr >= layout_.total_bytes()) {
      throw Error(ErrorCode::kAddressOutOfRange, "beyond the register file");
    }
    value = word_at(addr);
    ++counters_.sram_reads[layout_.bank_of_word(addr / 4)];
    vrf_access = true;
  }
  ++counters_.bus_transactions;
  step_cycle(vrf_access);
  return value;
}

void CarusDevice::bus_write(std::uint32_t addr, Word32 data) {
  if (addr % 4 != 0) {
    throw Error(ErrorCode::kAddressOutOfRange, "unaligned bus write");
  }
  bool vrf_access = false;
  if (config_mode_) {
    if (addr < kEmemBytes) {
      poke_emem(addr / 4, data);
    } else if (addr == kCarusCtrlAddr) {
      irq_enable_ = (data & kCtrlIrqEnable) != 0;
      if ((data & kCtrlStart) != 0) start_kernel();
    } else if (addr == kCarusBootPcAddr) {
      boot_pc_ = data;
    } else {
      throw Error(ErrorCode::kAddressOutOfRange,
                  "configuration offset " + std::to_string(addr) +
                      " is unmapped");
    }
  } else {
    if (addr >= layout_.total_bytes()) {
      throw Error(ErrorCode::kAddressOutOfRange, "beyond the register file");
    }
    set_word_at(addr, data);
    ++counters_.sram_writes[layout_.bank_of_word(addr / 4)];
    vrf_access = true;
  }
  ++counters_.bus_transactions;
  step_cycle(vrf_access);
}

void CarusDevice::tick(std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) step_cycle(false);
}

void CarusDevice::start_kernel() {
  if (running_) return;
  x_.fill(0);
  pc_ = boot_pc_;
  halted_ = false;
  running_ = true;
  done_ = false;
  error_ = false;
  fault_.clear();
  vtype_ = VTypeState{};
  start_cycle_ = cycle_;
  ecpu_busy_until_ = cycle_ + timing_.bootstrap_cycles;
}

Word32 CarusDevice::peek_vrf(std::uint32_t word) const {
  if (word * 4 >= vrf_.size()) {
    throw Error(ErrorCode::kAddressOutOfRange, "register file word");
  }
  return word_at(word * 4);
}

void CarusDevice::poke_vrf(std::uint32_t word, Word32 value) {
  if (word * 4 >= vrf_.size()) {
    throw Error(ErrorCode::kAddressOutOfRange, "register file word");
  }
  set_word_at(word * 4, value);
}

Word32 CarusDevice::peek_emem(std::uint32_t word) const {
  if (word >= kEmemBytes / 4) {
    throw Error(ErrorCode::kAddressOutOfRange, "program memory word");
  }
  const std::uint8_t* p = &emem_[word * 4];
  return static_cast<Word32>(p[0]) | static_cast<Word32>(p[1]) << 8 |
         static_cast<Word32>(p[2]) << 16 | static_cast<Word32>(p[3]) << 24;
}

void CarusDevice::poke_emem(std::uint32_t word, Word32 value) {
  if (word >= kEmemBytes / 4) {
    throw Error(ErrorCode::kAddressOutOfRange, "program memory word");
  }
  for (unsigned b = 0; b < 4; ++b) {
    emem_[word * 4 + b] = static_cast<std::uint8_t>(value >> (8 * b));
  }
}

// ---------------------------------------------------------------------------
// Cycle loop.

void CarusDevice::step_cycle(bool host_vrf_access) {
  if (host_vrf_access && !vpu_.empty()) {
    const VectorOp& front = vpu_.front();
    if (front.exec_start <= cycle_ && cycle_ < front.exec_end) {
      // Host wins the bank port; the lanes lose one cycle.
      for (VectorOp& op : vpu_) {
        if (op.exec_start > cycle_) ++op.exec_start;
        ++op.exec_end;
        ++op.commit_at;
      }
      ++lanes_free_at_;
      ++counters_.stall_cycles;
    }
  }
  step_vpu();
  step_ecpu();
  check_done();
  ++cycle_;
}

void CarusDevice::step_vpu() {
  while (!vpu_.empty() && vpu_.front().commit_at <= cycle_) {
    commit(vpu_.front());
    vpu_.pop_front();
  }
}

void CarusDevice::check_done() {
  if (running_ && halted_ && vpu_.empty()) {
    running_ = false;
    done_ = true;
    done_cycle_ = cycle_;
  }
}

void CarusDevice::fault(const std::string& why) {
  error_ = true;
  halted_ = true;
  fault_ = why;
  vpu_.clear();
}

void CarusDevice::step_ecpu() {
  if (!running_ || halted_ || cycle_ < ecpu_busy_until_) return;
  if (pc_ % 4 != 0 || pc_ >= kEmemBytes) {
    fault("instruction fetch outside program memory at pc " +
          std::to_string(pc_));
    return;
  }
  Instruction instr;
  try {
    instr = decode(peek_emem(pc_ / 4));
  } catch (const Error& e) {
    fault(std::string("pc ") + std::to_string(pc_) + ": " + e.what());
    return;
  }
  if (auto* rv = std::get_if<RvInstr>(&instr)) {
    exec_rv(*rv);
  } else if (auto* vs = std::get_if<VsetInstr>(&instr)) {
    exec_vset(*vs);
  } else {
    exec_vector(std::get<XvnmcInstr>(instr));
  }
}

// ---------------------------------------------------------------------------
// eCPU.

bool CarusDevice::load(std::uint32_t addr, unsigned bytes, bool sign,
                       Word32& out) {
  if (addr % bytes != 0 || addr + bytes > kEmemBytes) {
    fault("load from unmapped or unaligned address " + std::to_string(addr));
    return false;
  }
  Word32 v = 0;
  for (unsigned b = 0; b < bytes; ++b) {
    v |= static_cast<Word32>(emem_[addr + b]) << (8 * b);
  }
  if (sign && bytes < 4) {
    const unsigned shift = 32 - 8 * bytes;
    v = static_cast<Word32>(static_cast<std::int32_t>(v << shift) >> shift);
  }
  out = v;
  return true;
}

bool CarusDevice::store(std::uint32_t addr, unsigned bytes, Word32 value) {
  if (addr == kCarusTerminateAddr) {
    halted_ = true;
    return true;
  }
  if (addr % bytes != 0 || addr + bytes > kEmemBytes) {
    fault("store to unmapped or unaligned address " + std::to_string(addr));
    return false;
  }
  for (unsigned b = 0; b < bytes; ++b) {
    emem_[addr + b] = static_cast<std::uint8_t>(value >> (8 * b));
  }
  return true;
}

bool CarusDevice::exec_rv(const RvInstr& in) {
  const Word32 a = x_[in.rs1];
  const Word32 b = x_[in.rs2];
  const auto imm = static_cast<Word32>(in.imm);
  const auto sa = static_cast<std::int32_t>(a);
  const auto sb = static_cast<std::int32_t>(b);
  std::uint32_t next_pc = pc_ + 4;
  auto branch = [&](bool taken) {
    if (taken) next_pc = pc_ + imm;
  };
  Word32 loaded = 0;
  switch (in.op) {
    case RvOp::kLui:
      set_x(in.rd, imm);
      break;
    case RvOp::kAuipc:
      set_x(in.rd, pc_ + imm);
      break;
    case RvOp::kJal:
      set_x(in.rd, pc_ + 4);
      next_pc = pc_ + imm;
      break;
    case RvOp::kJalr:
      next_pc = (a + imm) & ~1u;
      set_x(in.rd, pc_ + 4);
      break;
    case RvOp::kBeq:
      branch(a == b);
      break;
    case RvOp::kBne:
      branch(a != b);
      break;
    case RvOp::kBlt:
      branch(sa < sb);
      break;
    case RvOp::kBge:
      branch(sa >= sb);
      break;
    case RvOp::kBltu:
      branch(a < b);
      break;
    case RvOp::kBgeu:
      branch(a >= b);
      break;
    case RvOp::kLb:
    case RvOp::kLh:
    case RvOp::kLw:
    case RvOp::kLbu:
    case RvOp::kLhu: {
      const unsigned bytes =
          (in.op == RvOp::kLw) ? 4 : (in.op == RvOp::kLh || in.op == RvOp::kLhu) ? 2 : 1;
      const bool sign = in.op == RvOp::kLb || in.op == RvOp::kLh;
      if (!load(a + imm, bytes, sign, loaded)) return false;
      set_x(in.rd, loaded);
      break;
    }
    case RvOp::kSb:
      if (!store(a + imm, 1, b)) return false;
      break;
    case RvOp::kSh:
      if (!store(a + imm, 2, b)) return false;
      break;
    case RvOp::kSw:
      if (!store(a + imm, 4, b)) return false;
      break;
    case RvOp::kAddi:
      set_x(in.rd, a + imm);
      break;
    case RvOp::kSlti:
      set_x(in.rd, sa < static_cast<std::int32_t>(imm) ? 1 : 0);
      break;
    case RvOp::kSltiu:
      set_x(in.rd, a < imm ? 1 : 0);
      break;
    case RvOp::kXori:
      set_x(in.rd, a ^ imm);
      break;
    case RvOp::kOri:
      set_x(in.rd, a | imm);
      break;
    case RvOp::kAndi:
      set_x(in.rd, a & imm);
      break;
    case RvOp::kSlli:
      set_x(in.rd, a << (imm & 31));
      break;
    case RvOp::kSrli:
      set_x(in.rd, a >> (imm & 31));
      break;
    case RvOp::kSrai:
      set_x(in.rd, static_cast<Word32>(sa >> (imm & 31)));
      break;
    case RvOp::kAdd:
      set_x(in.rd, a + b);
      break;
    case RvOp::kSub:
      set_x(in.rd, a - b);
      break;
    case RvOp::kSll:
      set_x(in.rd, a << (b & 31));
      break;
    case RvOp::kSlt:
      set_x(in.rd, sa < sb ? 1 : 0);
      break;
    case RvOp::kSltu:
      set_x(in.rd, a < b ? 1 : 0);
      break;
    case RvOp::kXor:
      set_x(in.rd, a ^ b);
      break;
    case RvOp::kSrl:
      set_x(in.rd, a >> (b & 31));
      break;
    case RvOp::kSra:
      set_x(in.rd, static_cast<Word32>(sa >> (b & 31)));
      break;
    case RvOp::kOr:
      set_x(in.rd, a | b);
      break;
    case RvOp::kAnd:
      set_x(in.rd, a & b);
      break;
    case RvOp::kFence:
      break;
  }
  ++counters_.instructions;
  ++counters_.scalar_instructions;
  pc_ = next_pc;
  ecpu_busy_until_ = cycle_ + 1;
  return true;
}

bool CarusDevice::exec_vset(const VsetInstr& in) {
  ElemWidth sew = in.sew;
  if (in.kind == VsetInstr::Kind::kVsetvl) {
    const Word32 vt = x_[in.rs2];
    if ((vt & ~0x38u) != 0 || (vt >> 3) > 2) {
      fault("vsetvl with unsupported vtype " + std::to_string(vt));
      return false;
    }
    sew = static_cast<ElemWidth>(vt >> 3);
  }
  std::uint32_t vl = 0;
  if (in.kind == VsetInstr::Kind::kVsetivli) {
    vl = vsetvl_result(in.rs1, false, in.rd == 0, vtype_.vl, sew);
  } else {
    vl = vsetvl_result(x_[in.rs1], in.rs1 == 0, in.rd == 0, vtype_.vl, sew);
  }
  vtype_ = VTypeState{vl, sew};
  set_x(in.rd, vl);
  ++counters_.instructions;
  ++counters_.vector_instructions;
  pc_ += 4;
  ecpu_busy_until_ = cycle_ + 1;
  return true;
}

std::uint32_t CarusDevice::vector_base(std::uint8_t direct,
                                       std::uint8_t logical,
                                       bool indirect) const {
  return indirect ? layout_.logical_base(logical) : layout_.direct_base(direct);
}

bool CarusDevice::check_vector(std::uint32_t base, std::uint32_t vl,
                               ElemWidth sew) {
  if (base + static_cast<std::uint64_t>(vl) * elem_bytes(sew) >
      layout_.total_bytes()) {
    fault("InvalidVector: operand at byte " + std::to_string(base) +
          " with vl " + std::to_string(vl) + " exceeds the register file");
    return false;
  }
  return true;
}

VOpClass CarusDevice::op_class(const XvnmcInstr& in) const {
  const bool vv = in.variant == VVariant::kVV;
  switch (in.op) {
    case VMnemonic::kVmul:
      return vv ? VOpClass::kMulVV : VOpClass::kMulVX;
    case VMnemonic::kVmacc:
      return vv ? VOpClass::kMaccVV : VOpClass::kMaccVX;
    case VMnemonic::kVmv:
    case VMnemonic::kVslideup:
    case VMnemonic::kVslidedown:
    case VMnemonic::kVslide1up:
    case VMnemonic::kVslide1down:
    case VMnemonic::kEmvv:
    case VMnemonic::kEmvx:
      return VOpClass::kPerm;
    default:
      return vv ? VOpClass::kArithVV : VOpClass::kArithVX;
  }
}

bool CarusDevice::exec_vector(const XvnmcInstr& in) {
  const ElemWidth sew = vtype_.sew;
  const std::uint32_t vl = vtype_.vl;
  if (in.op == VMnemonic::kEmvx) {
    if (!vpu_.empty()) {
      ++counters_.stall_cycles;
      return true;
    }
    const std::uint32_t base = layout_.direct_base(in.vs2);
    if (!check_vector(base, vl, sew)) return false;
    const Word32 index = x_[in.rs1];
    if (index >= vl) {
      fault("ElementIndexOutOfRange: emvx index " + std::to_string(index) +
            " with vl " + std::to_string(vl));
      return false;
    }
    const std::uint32_t byte = base + index * elem_bytes(sew);
    ++counters_.sram_reads[layout_.bank_of_word(byte / 4)];
    set_x(in.rd, static_cast<Word32>(elem(base, index, sew)));
    ++counters_.instructions;
    ++counters_.vector_instructions;
    pc_ += 4;
    ecpu_busy_until_ = cycle_ + timing_.emvx_cycles;
    return true;
  }
  if (vpu_.size() >= 2) {
    ++counters_.stall_cycles;
    return true;
  }
  VectorOp op;
  op.instr = in;
  op.vl = vl;
  op.sew = sew;
  const VectorIndices idx =
      in.indirect ? resolve_indirect(x_[in.idx]) : VectorIndices{0, 0, 0};
  op.vd = vector_base(in.vd, idx.vd, in.indirect);
  op.vs2 = vector_base(in.vs2, idx.vs2, in.indirect);
  op.vs1 = vector_base(in.vs1, idx.vs1, in.indirect);
  std::uint32_t words = ceil_div(vl * elem_bytes(sew), 4);
  if (!check_vector(op.vd, vl, sew)) return false;
  if (in.op == VMnemonic::kEmvv) {
    const Word32 index = x_[in.rs2];
    if (index >= vl) {
      fault("ElementIndexOutOfRange: emvv index " + std::to_string(index) +
            " with vl " + std::to_string(vl));
      return false;
    }
    op.vs1 = index;
    op.scalar = x_[in.rs1];
    words = 1;
  } else {
    const bool uses_vs2 = in.op != VMnemonic::kVmv;
    const bool uses_vs1 = in.variant == VVariant::kVV && !is_slide(in.op);
    if (uses_vs2 && !check_vector(op.vs2, vl, sew)) return false;
    if (uses_vs1 && !check_vector(op.vs1, vl, sew)) return false;
    if (in.variant == VVariant::kVX) {
      op.scalar = x_[in.rs1];
    } else if (in.variant == VVariant::kVI) {
      op.scalar = static_cast<Word32>(in.imm);
    }
  }
  const std::uint32_t lane_words = ceil_div(words, layout_.num_banks);
  const std::uint64_t exec_cycles =
      static_cast<std::uint64_t>(lane_words) * timing_.cost(op_class(in), sew);
  op.exec_start =
      std::max<std::uint64_t>(cycle_ + timing_.vpu_decode_cycles, lanes_free_at_);
  op.exec_end = op.exec_start + exec_cycles;
  op.commit_at = op.exec_end + timing_.vpu_writeback_cycles;
  lanes_free_at_ = op.exec_end;
  vpu_.push_back(op);
  ++counters_.instructions;
  ++counters_.vector_instructions;
  pc_ += 4;
  ecpu_busy_until_ = cycle_ + 1;
  return true;
}

// ---------------------------------------------------------------------------
// Vector unit datapath.

Word32 CarusDevice::word_at(std::uint32_t byte) const {
  const std::uint8_t* p = &vrf_[byte];
  return static_cast<Word32>(p[0]) | static_cast<Word32>(p[1]) << 8 |
         static_cast<Word32>(p[2]) << 16 | static_cast<Word32>(p[3]) << 24;
}

void CarusDevice::set_word_at(std::uint32_t byte, Word32 v) {
  for (unsigned b = 0; b < 4; ++b) {
    vrf_[byte + b] = static_cast<std::uint8_t>(v >> (8 * b));
  }
}

std::int32_t CarusDevice::elem(std::uint32_t base, std::uint32_t i,
                               ElemWidth w) const {
  const std::uint32_t byte = base + i * elem_bytes(w);
  Word32 v = 0;
  for (unsigned b = 0; b < elem_bytes(w); ++b) {
    v |= static_cast<Word32>(vrf_[byte + b]) << (8 * b);
  }
  return wrap_to_width(v, w);
}

void CarusDevice::set_elem(std::uint32_t base, std::uint32_t i, ElemWidth w,
                           Word32 v) {
  const std::uint32_t byte = base + i * elem_bytes(w);
  for (unsigned b = 0; b < elem_bytes(w); ++b) {
    vrf_[byte + b] = static_cast<std::uint8_t>(v >> (8 * b));
  }
}

void CarusDevice::count_words(std::uint32_t base, std::uint32_t words,
                              bool read, unsigned times) {
  auto& counter = read ? counters_.sram_reads : counters_.sram_writes;
  const std::uint32_t first = base / 4;
  for (std::uint32_t j = 0; j < words; ++j) {
    counter[layout_.bank_of_word(first + j)] += times;
  }
}

void CarusDevice::commit(const VectorOp& op) {
  const XvnmcInstr& in = op.instr;
  const ElemWidth w = op.sew;
  const unsigned epw = elements_per_word(w);
  const std::uint32_t vl = op.vl;
  const std::uint32_t words = ceil_div(vl * elem_bytes(w), 4);

  if (in.op == VMnemonic::kEmvv) {
    set_elem(op.vd, op.vs1, w, op.scalar);
    const std::uint32_t word = (op.vd + op.vs1 * elem_bytes(w)) / 4;
    ++counters_.sram_reads[layout_.bank_of_word(word)];
    ++counters_.sram_writes[layout_.bank_of_word(word)];
    return;
  }

  if (is_slide(in.op)) {
    std::vector<std::int32_t> src(vl);
    for (std::uint32_t i = 0; i < vl; ++i) src[i] = elem(op.vs2, i, w);
    const Word32 off = op.scalar;
    switch (in.op) {
      case VMnemonic::kVslideup:
        for (std::uint32_t i = 0; i < vl; ++i) {
          if (static_cast<std::uint64_t>(i) >= off) {
            set_elem(op.vd, i, w, static_cast<Word32>(src[i - off]));
          }
        }
        break;
      case VMnemonic::kVslidedown:
        for (std::uint32_t i = 0; i < vl; ++i) {
          const std::uint64_t from = static_cast<std::uint64_t>(i) + off;
          set_elem(op.vd, i, w, from < vl ? static_cast<Word32>(src[from]) : 0);
        }
        break;
      case VMnemonic::kVslide1up:
        for (std::uint32_t i = 0; i < vl; ++i) {
          set_elem(op.vd, i, w,
                   i == 0 ? op.scalar : static_cast<Word32>(src[i - 1]));
        }
        break;
      default:
        for (std::uint32_t i = 0; i < vl; ++i) {
          set_elem(op.vd, i, w,
                   i + 1 == vl ? op.scalar : static_cast<Word32>(src[i + 1]));
        }
        break;
    }
    count_words(op.vs2, words, true);
    count_words(op.vd, words, false);
    return;
  }

  const bool vv = in.variant == VVariant::kVV;
  const Word32 splatted = splat(static_cast<std::int32_t>(op.scalar), w);
  std::vector<Word32> result(words);
  if (in.op == VMnemonic::kVmv) {
    for (std::uint32_t j = 0; j < words; ++j) {
      result[j] = vv ? word_at(op.vs1 + 4 * j) : splatted;
    }
    if (vv) count_words(op.vs1, words, true);
  } else {
    const bool macc = in.op == VMnemonic::kVmacc;
    const PackedOp pop = macc ? PackedOp::kMul : *arith_op(in.op);
    for (std::uint32_t j = 0; j < words; ++j) {
      const Word32 a = word_at(op.vs2 + 4 * j);
      const Word32 b = vv ? word_at(op.vs1 + 4 * j) : splatted;
      Word32 r = packed_binop(pop, a, b, w);
      if (macc) r = packed_binop(PackedOp::kAdd, word_at(op.vd + 4 * j), r, w);
      result[j] = r;
    }
    count_words(op.vs2, words, true);
    if (vv) count_words(op.vs1, words, true);
    if (macc) {
      count_words(op.vd, words, true);
      counters_.macs += vl;
    }
    counters_.alu_ops += words;
  }
  for (std::uint32_t j = 0; j < words; ++j) {
    const std::uint32_t live = std::min<std::uint32_t>(epw, vl - j * epw);
    Word32 out = result[j];
    if (live < epw) {
      out = word_at(op.vd + 4 * j);
      for (unsigned lane = 0; lane < live; ++lane) {
        out = with_lane(out, lane, lane_unsigned(result[j], lane, w), w);
      }
    }
    set_word_at(op.vd + 4 * j, out);
  }
  count_words(op.vd, words, false);
}

}  // namespace nmcsim
