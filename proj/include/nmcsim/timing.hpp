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

#ifndef NMCSIM_TIMING_HPP_
#define NMCSIM_TIMING_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nmcsim/simd.hpp"

namespace nmcsim {

// Cost classes for the Carus vector unit. Costs are cycles per 32-bit
// element-word per lane.
enum class VOpClass : std::uint8_t {
  kArithVV,
  kArithVX,
  kMulVV,
  kMulVX,
  kMaccVV,
  kMaccVX,
  kPerm,
};
inline constexpr std::size_t kNumVOpClasses = 7;

struct TimingTable {
  std::string name;
  std::array<std::array<std::uint32_t, 3>, kNumVOpClasses> word_cost{};

  // Carus vector unit.
  std::uint32_t vpu_decode_cycles = 1;
  std::uint32_t vpu_writeback_cycles = 1;
  std::uint32_t emvx_cycles = 3;
  std::uint32_t bootstrap_cycles = 250;

  // Caesar pipeline.
  std::uint32_t caesar_alu_cycles = 2;
  std::uint32_t dma_setup_cycles = 2;

  std::uint32_t cost(VOpClass c, ElemWidth w) const {
    return word_cost[static_cast<std::size_t>(c)][static_cast<std::size_t>(w)];
  }

  // Steady-state vmacc.vx rate of one lane implied by this table.
  double lane_mac_rate(ElemWidth w) const {
    return static_cast<double>(elements_per_word(w)) /
           cost(VOpClass::kMaccVX, w);
  }

  // Throws Error(kInvalidArgument) for unknown names.
  static TimingTable preset(std::string_view name);
  static std::vector<std::string> preset_names();
};

}  // namespace nmcsim

#endif  // NMCSIM_TIMING_HPP_
