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

#ifndef NMCSIM_CARUS_HPP_
#define NMCSIM_CARUS_HPP_

#include <array>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "nmcsim/events.hpp"
#include "nmcsim/simd.hpp"
#include "nmcsim/timing.hpp"
#include "nmcsim/xvnmc.hpp"
#include "nmcsim/xvnmc_asm.hpp"

namespace nmcsim {

struct VrfLayout {
  std::uint32_t num_banks = 4;
  std::uint32_t bank_bytes = 8192;
  std::uint32_t register_bytes = kVectorRegisterBytes;
  std::uint32_t logical_vectors = 256;

  std::uint32_t total_bytes() const { return num_banks * bank_bytes; }
  std::uint32_t logical_stride() const {
    return total_bytes() / logical_vectors;
  }
  unsigned bank_of_word(std::uint32_t word) const { return word % num_banks; }
  std::uint32_t direct_base(unsigned v) const { return v * register_bytes; }
  std::uint32_t logical_base(unsigned i) const { return i * logical_stride(); }
};

// Configuration-mode address map (byte offsets).
inline constexpr std::uint32_t kCarusEmemBase = 0x0000;
inline constexpr std::uint32_t kCarusCtrlAddr = 0x8000;
inline constexpr std::uint32_t kCarusBootPcAddr = 0x8004;
// An eCPU store to this address ends the kernel.
inline constexpr std::uint32_t kCarusTerminateAddr = kCarusCtrlAddr;

inline constexpr Word32 kCtrlStart = 1u << 0;
inline constexpr Word32 kCtrlDone = 1u << 1;
inline constexpr Word32 kCtrlIrqEnable = 1u << 2;
inline constexpr Word32 kCtrlError = 1u << 3;

// Cycle-stepped NM-Carus model.
//
// Each cycle the vector unit advances first (committing finished
// instructions), then the eCPU executes at most one instruction. Vector
// instructions are timed when issued: decode takes vpu_decode_cycles, the
// lanes execute for ceil(words / banks) * word_cost cycles once the previous
// instruction has left the lanes, and the writeback takes
// vpu_writeback_cycles. The architectural effect lands at commit, in order.
class CarusDevice {
 public:
  explicit CarusDevice(TimingTable timing = TimingTable::preset("table-v"),
                       VrfLayout layout = {});

  // One bus transaction per cycle; the device advances one cycle.
  Word32 bus_read(std::uint32_t byte_addr);
  void bus_write(std::uint32_t byte_addr, Word32 data);
  // Advances n idle cycles.
  void tick(std::uint64_t n = 1);

  bool config_mode() const { return config_mode_; }
  void set_config_mode(bool on) { config_mode_ = on; }

  bool running() const { return running_; }
  bool done() const { return done_; }
  bool error() const { return error_; }
  bool irq() const { return done_ && irq_enable_; }
  const std::string& fault() const { return fault_; }

  std::uint64_t cycle() const { return cycle_; }
  std::uint64_t start_cycle() const { return start_cycle_; }
  std::uint64_t done_cycle() const { return done_cycle_; }
  std::uint64_t kernel_cycles() const { return done_cycle_ - start_cycle_; }

  const EventCounters& counters() const { return counters_; }
  const TimingTable& timing() const { return timing_; }
  const VrfLayout& layout() const { return layout_; }
  VTypeState vtype() const { return vtype_; }
  Word32 gpr(unsigned r) const { return x_[r & 15]; }
  std::size_t vpu_in_flight() const { return vpu_.size(); }

  // Zero-time backdoor access for test setup and inspection.
  Word32 peek_vrf(std::uint32_t word) const;
  void poke_vrf(std::uint32_t word, Word32 value);
  const std::vector<std::uint8_t>& vrf() const { return vrf_; }
  Word32 peek_emem(std::uint32_t word) const;
  void poke_emem(std::uint32_t word, Word32 value);

 private:
  struct VectorOp {
    XvnmcInstr instr;
    std::uint32_t vd = 0;
    std::uint32_t vs2 = 0;
    std::uint32_t vs1 = 0;
    Word32 scalar = 0;
    std::uint32_t vl = 0;
    ElemWidth sew = ElemWidth::kW8;
    std::uint64_t exec_start = 0;
    std::uint64_t exec_end = 0;
    std::uint64_t commit_at = 0;
  };

  void step_cycle(bool host_vrf_access);
  void step_vpu();
  void step_ecpu();
  void check_done();
  void fault(const std::string& why);
  void start_kernel();

  // eCPU helpers; return false after raising a fault.
  bool exec_rv(const RvInstr& in);
  bool exec_vset(const VsetInstr& in);
  bool exec_vector(const XvnmcInstr& in);
  bool load(std::uint32_t addr, unsigned bytes, bool sign, Word32& out);
  bool store(std::uint32_t addr, unsigned bytes, Word32 value);
  void set_x(unsigned r, Word32 v) {
    if (r != 0) x_[r] = v;
  }

  std::uint32_t vector_base(std::uint8_t direct, std::uint8_t logical,
                            bool indirect) const;
  bool check_vector(std::uint32_t base, std::uint32_t vl, ElemWidth sew);
  VOpClass op_class(const XvnmcInstr& in) const;
  void commit(const VectorOp& op);

  std::int32_t elem(std::uint32_t base, std::uint32_t i, ElemWidth w) const;
  void set_elem(std::uint32_t base, std::uint32_t i, ElemWidth w, Word32 v);
  Word32 word_at(std::uint32_t byte) const;
  void set_word_at(std::uint32_t byte, Word32 v);
  void count_words(std::uint32_t base, std::uint32_t words, bool read,
                   unsigned times = 1);

  TimingTable timing_;
  VrfLayout layout_;
  std::vector<std::uint8_t> vrf_;
  std::array<std::uint8_t, kEmemBytes> emem_{};
  EventCounters counters_;

  bool config_mode_ = false;
  bool running_ = false;
  bool halted_ = true;
  bool done_ = false;
  bool error_ = false;
  bool irq_enable_ = false;
  std::string fault_;
  Word32 boot_pc_ = 0;

  std::uint64_t cycle_ = 0;
  std::uint64_t start_cycle_ = 0;
  std::uint64_t done_cycle_ = 0;

  std::array<Word32, 16> x_{};
  std::uint32_t pc_ = 0;
  std::uint64_t ecpu_busy_until_ = 0;
  VTypeState vtype_;

  std::deque<VectorOp> vpu_;
  std::uint64_t lanes_free_at_ = 0;
};

}  // namespace nmcsim

#endif  // NMCSIM_CARUS_HPP_
