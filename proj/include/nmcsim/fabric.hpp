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

#ifndef NMCSIM_FABRIC_HPP_
#define NMCSIM_FABRIC_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nmcsim/caesar.hpp"
#include "nmcsim/caesar_asm.hpp"
#include "nmcsim/carus.hpp"
#include "nmcsim/events.hpp"
#include "nmcsim/timing.hpp"

namespace nmcsim {

enum class DeviceKind : std::uint8_t { kCaesar, kCarus };

std::string_view to_string(DeviceKind d);
std::optional<DeviceKind> device_from_name(std::string_view name);

struct BusTxn {
  DeviceKind device = DeviceKind::kCaesar;
  std::uint32_t byte_addr = 0;
  std::optional<Word32> wdata;
  bool is_write = false;
};

struct SystemClock {
  std::uint64_t cycle = 0;
};

struct CarusRunOptions {
  // One status read every poll_interval cycles; ignored when use_irq is set.
  std::uint32_t poll_interval = 8;
  bool use_irq = false;
  std::uint64_t max_cycles = 50'000'000;
  std::uint32_t boot_pc = 0;
};

struct CarusRunResult {
  // Start write to done, excluding host polling.
  std::uint64_t kernel_cycles = 0;
  // Whole protocol: mode switches, program load, start, wait, mode restore.
  std::uint64_t total_cycles = 0;
  EventCounters events;
};

// Single-master host model. The fabric owns one instance of each device and a
// shared clock; every operation advances all devices by the cycles it takes.
class HostFabric {
 public:
  explicit HostFabric(const TimingTable& timing = TimingTable::preset("table-v"));

  CaesarDevice& caesar() { return caesar_; }
  CarusDevice& carus() { return carus_; }
  const CaesarDevice& caesar() const { return caesar_; }
  const CarusDevice& carus() const { return carus_; }
  std::uint64_t cycle() const { return clock_.cycle; }
  std::uint64_t bus_transactions() const { return bus_transactions_; }

  // Writes the host-side imc register for `device`. Costs one bus write.
  std::uint64_t set_mode(DeviceKind device, bool imc);
  bool mode(DeviceKind device) const;

  // One bus transaction; returns read data (0 for writes).
  Word32 transact(const BusTxn& txn);
  void write(DeviceKind device, std::uint32_t byte_addr, Word32 data);
  Word32 read(DeviceKind device, std::uint32_t byte_addr);
  // Consecutive word writes starting at byte_addr.
  void write_block(DeviceKind device, std::uint32_t byte_addr,
                   const std::vector<Word32>& words);

  // Streams a command list to Caesar, one write per granted cycle, after a
  // fixed DMA setup. Returns cycles until the last instruction retires.
  // Throws kDeviceRejected for devices that cannot take command streams.
  std::uint64_t dma_stream(const CommandStream& stream,
                           DeviceKind device = DeviceKind::kCaesar);

  // Full Carus protocol: configuration mode, program and argument load,
  // start, completion by polling or interrupt, memory mode. Throws
  // kProgramTooLarge, kKernelFault or kTimeout.
  CarusRunResult run_carus_kernel(
      const std::vector<std::uint32_t>& image,
      const std::vector<std::pair<std::uint32_t, Word32>>& args = {},
      const CarusRunOptions& options = {});

  // Advances every device by n idle cycles.
  void idle(std::uint64_t n);

 private:
  void sync_caesar(std::uint64_t n);
  void sync_carus(std::uint64_t n);

  CaesarDevice caesar_;
  CarusDevice carus_;
  SystemClock clock_;
  std::uint64_t bus_transactions_ = 0;
};

// Declarative scenario: see docs/SCENARIO.md for the schema.
struct ScenarioStep {
  std::string op;
  std::string device;
  std::uint64_t cycles = 0;
  std::vector<Word32> values;
  bool ok = true;
  std::string message;
};

struct ScenarioResult {
  bool pass = true;
  std::uint64_t total_cycles = 0;
  std::vector<ScenarioStep> steps;
  EventCounters caesar_events;
  EventCounters carus_events;
  std::uint64_t bus_transactions = 0;
};

// `base_dir` resolves relative file references inside the scenario.
ScenarioResult run_scenario(std::string_view json_text,
                            const std::string& base_dir = ".");

}  // namespace nmcsim

#endif  // NMCSIM_FABRIC_HPP_
