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

#ifndef NMCSIM_REPORT_HPP_
#define NMCSIM_REPORT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nmcsim/events.hpp"
#include "nmcsim/fabric.hpp"
#include "nmcsim/kernels.hpp"
#include "nmcsim/timing.hpp"

namespace nmcsim {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr double kNominalClockMhz = 330.0;

struct BenchReport {
  std::string key;  // "<device>:<kernel id>"
  DeviceKind device = DeviceKind::kCaesar;
  std::string kernel;
  std::string width;
  std::vector<std::uint32_t> shape;
  std::string timing;
  std::uint64_t cycles_total = 0;
  std::uint64_t outputs = 0;
  double cycles_per_output = 0.0;
  std::uint64_t host_ops = 0;
  // Only set for steady-state throughput entries.
  std::optional<double> macs_per_cycle;
  std::optional<double> gops;
  EventCounters events;
  bool verified = true;
  bool pass = true;
  std::optional<double> golden;
  std::optional<double> golden_delta;
  std::string message;

  // Value of a named metric: cycles, cycles_per_output, macs_per_cycle, gops.
  std::optional<double> metric(std::string_view name) const;
};

std::string report_key(DeviceKind device, const KernelSpec& spec);

BenchReport make_report(DeviceKind device, const KernelSpec& spec,
                        const KernelRun& run, std::string_view timing_name);

// Steady-state MAC rate, measured as the difference between two MAC streams
// of different length so that fill and drain cancel.
struct PeakResult {
  double macs_per_cycle = 0.0;
  double gops = 0.0;  // 2 ops per MAC at the nominal clock
  std::uint64_t cycles = 0;
  std::uint64_t macs = 0;
};

PeakResult measure_peak(DeviceKind device, ElemWidth w, const TimingTable& timing);
BenchReport make_peak_report(DeviceKind device, ElemWidth w,
                             const TimingTable& timing, std::string_view timing_name);

struct SuiteEntry {
  DeviceKind device = DeviceKind::kCaesar;
  KernelSpec spec;
  bool peak = false;  // steady-state throughput entry; spec.width only
};

std::vector<SuiteEntry> suite(std::string_view name);
const std::vector<std::string>& suite_names();

// Runs entries on `threads` workers, each with its own simulator instances.
// The output order matches the input order.
std::vector<BenchReport> run_suite(const std::vector<SuiteEntry>& entries,
                                   const TimingTable& timing,
                                   std::string_view timing_name,
                                   std::uint64_t seed, unsigned threads = 1);

struct GoldenEntry {
  std::string key;
  std::string metric = "cycles";
  double value = 0.0;
  double tol = 0.10;
};

std::vector<GoldenEntry> load_golden(std::string_view json_text);
std::vector<GoldenEntry> load_golden_file(const std::string& path);
// Directory with the shipped golden tables; NMCSIM_GOLDEN_DIR overrides.
std::string golden_dir();

struct CompareLine {
  std::string key;
  std::string metric;
  std::optional<double> measured;
  double golden = 0.0;
  double delta = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct CompareResult {
  bool pass = true;
  std::vector<CompareLine> lines;
};

// |measured - golden| / |golden| <= tol for every golden entry. Entries
// without a report fail. Annotates matching reports with golden data.
CompareResult compare(std::vector<BenchReport>& reports,
                      const std::vector<GoldenEntry>& golden,
                      std::optional<double> tol_override = std::nullopt);

std::string events_to_json(const EventCounters& e);
std::string reports_to_json(const std::vector<BenchReport>& reports,
                            std::string_view timing_name, std::uint64_t seed);
std::vector<BenchReport> reports_from_json(std::string_view text);
std::string reports_to_csv(const std::vector<BenchReport>& reports);
std::string compare_to_text(const CompareResult& result);
std::string scenario_to_json(const ScenarioResult& result);

}  // namespace nmcsim

#endif  // NMCSIM_REPORT_HPP_
