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

#ifndef NMCSIM_EVENTS_HPP_
#define NMCSIM_EVENTS_HPP_

#include <cstdint>
#include <numeric>
#include <vector>

namespace nmcsim {

// Activity counters used as an energy proxy. Per-bank vectors are sized by
// the owning device (2 banks for Caesar, 4 for Carus).
struct EventCounters {
  std::vector<std::uint64_t> sram_reads;
  std::vector<std::uint64_t> sram_writes;
  std::uint64_t instructions = 0;
  std::uint64_t scalar_instructions = 0;
  std::uint64_t vector_instructions = 0;
  std::uint64_t alu_ops = 0;
  std::uint64_t macs = 0;
  std::uint64_t bus_transactions = 0;
  std::uint64_t stall_cycles = 0;

  EventCounters() = default;
  explicit EventCounters(std::size_t banks)
      : sram_reads(banks, 0), sram_writes(banks, 0) {}

  std::uint64_t total_reads() const {
    return std::accumulate(sram_reads.begin(), sram_reads.end(),
                           std::uint64_t{0});
  }
  std::uint64_t total_writes() const {
    return std::accumulate(sram_writes.begin(), sram_writes.end(),
                           std::uint64_t{0});
  }

  // Element-wise difference; both operands must have the same bank count.
  EventCounters operator-(const EventCounters& base) const {
    EventCounters d(sram_reads.size());
    for (std::size_t i = 0; i < sram_reads.size(); ++i) {
      d.sram_reads[i] = sram_reads[i] - base.sram_reads[i];
      d.sram_writes[i] = sram_writes[i] - base.sram_writes[i];
    }
    d.instructions = instructions - base.instructions;
    d.scalar_instructions = scalar_instructions - base.scalar_instructions;
    d.vector_instructions = vector_instructions - base.vector_instructions;
    d.alu_ops = alu_ops - base.alu_ops;
    d.macs = macs - base.macs;
    d.bus_transactions = bus_transactions - base.bus_transactions;
    d.stall_cycles = stall_cycles - base.stall_cycles;
    return d;
  }

  friend bool operator==(const EventCounters&, const EventCounters&) = default;
};

}  // namespace nmcsim

#endif  // NMCSIM_EVENTS_HPP_
