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

#include "nmcsim/timing.hpp"

#include <string>

#include "nmcsim/error.hpp"

namespace nmcsim {

namespace {

TimingTable table_v() {
  TimingTable t;
  t.name = "table-v";
  auto set = [&t](VOpClass c, std::uint32_t w8, std::uint32_t w16,
                  std::uint32_t w32) {
    t.word_cost[static_cast<std::size_t>(c)] = {w8, w16, w32};
  };
  set(VOpClass::kArithVV, 3, 3, 3);
  set(VOpClass::kArithVX, 2, 2, 2);
  set(VOpClass::kMulVV, 4, 3, 3);
  set(VOpClass::kMulVX, 4, 2, 3);
  set(VOpClass::kMaccVV, 4, 4, 4);
  set(VOpClass::kMaccVX, 4, 3, 4);
  set(VOpClass::kPerm, 2, 2, 2);
  return t;
}

}  // namespace

TimingTable TimingTable::preset(std::string_view name) {
  if (name == "table-v") return table_v();
  if (name == "text-0.33") {
    TimingTable t = table_v();
    t.name = "text-0.33";
    t.word_cost[static_cast<std::size_t>(VOpClass::kMaccVX)][2] = 3;
    return t;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown timing preset '" + std::string(name) + "'");
}

std::vector<std::string> TimingTable::preset_names() {
  return {"table-v", "text-0.33"};
}

}  // namespace nmcsim
