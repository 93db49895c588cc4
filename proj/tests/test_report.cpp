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


#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "nmcsim/caesar_asm.hpp"
#include "nmcsim/error.hpp"
#include "nmcsim/fabric.hpp"
#include "nmcsim/report.hpp"
#include "support.hpp"

namespace nmcsim {
namespace {

KernelSpec spec(KernelName k, ElemWidth w, std::vector<std::uint32_t> shape) {
  KernelSpec s;
  s.name = k;
  s.width = w;
  s.shape = std::move(shape);
  return s;
}

BenchReport fake(const std::string& key, std::uint64_t cycles) {
  BenchReport r;
  r.key = key;
  r.cycles_total = cycles;
  r.outputs = 10;
  r.cycles_per_output = static_cast<double>(cycles) / 10;
  return r;
}

TEST(Events, CaesarAddStreamConservation) {
  for (unsigned n : {1u, 17u, 300u}) {
    HostFabric fab;
    CommandStream s;
    for (unsigned i = 0; i < n; ++i) {
      s.push({CaesarOpcode::kAdd, static_cast<std::uint16_t>(i % 4096),
              static_cast<std::uint16_t>(4096 + i % 4096), static_cast<std::uint16_t>(i)});
    }
    fab.set_mode(DeviceKind::kCaesar, true);
    const EventCounters before = fab.caesar().counters();
    fab.dma_stream(s);
    const EventCounters d = fab.caesar().counters() - before;
    EXPECT_EQ(d.total_reads(), 2u * n);
    EXPECT_EQ(d.total_writes(), n);
    EXPECT_EQ(d.instructions, n);
    EXPECT_EQ(d.alu_ops, n);
    EXPECT_EQ(d.bus_transactions, n);
    EXPECT_EQ(fab.bus_transactions(), n + 1);
  }
}

TEST(Events, CaesarMacStreamConservation) {
  HostFabric fab;
  CommandStream s;
  s.push(caesar_csrw(ElemWidth::kW8));
  s.push({CaesarOpcode::kMacInit, 0, 4096, 0});
  for (int i = 0; i < 62; ++i) s.push({CaesarOpcode::kMac, 0, 4096, 0});
  s.push({CaesarOpcode::kMacStore, 1, 4097, 100});
  fab.set_mode(DeviceKind::kCaesar, true);
  fab.dma_stream(s);
  const EventCounters& e = fab.caesar().counters();
  EXPECT_EQ(e.macs, 64u * 4u);
  EXPECT_EQ(e.total_reads(), 128u);
  EXPECT_EQ(e.total_writes(), 1u);
}

TEST(Events, CarusVmaccConservation) {
  HostFabric fab;
  const auto r = fab.run_carus_kernel(asm_xvnmc(testing::with_exit(
      "li x1, 512\nvsetvli x0, x1, e16\nli x5, 3\n"
      "xvnmc.vmacc.vx v1, v2, x5\nxvnmc.vadd.vv v3, v1, v2\n")));
  // vmacc: 256 words read twice, written once; vadd: 256 words read twice, written once.
  EXPECT_EQ(r.events.total_reads(), 1024u);
  EXPECT_EQ(r.events.total_writes(), 512u);
  for (unsigned b = 0; b < 4; ++b) EXPECT_EQ(r.events.sram_reads[b], 256u);
  EXPECT_EQ(r.events.macs, 512u);
  EXPECT_EQ(r.events.vector_instructions, 3u);
  EXPECT_EQ(r.events.instructions,
            r.events.vector_instructions + r.events.scalar_instructions);
}

TEST(Events, IdleCyclesHaveNoEvents) {
  HostFabric fab;
  fab.write(DeviceKind::kCaesar, 0, 1);
  const EventCounters c0 = fab.caesar().counters();
  const EventCounters k0 = fab.carus().counters();
  fab.idle(1000);
  const EventCounters dc = fab.caesar().counters() - c0;
  const EventCounters dk = fab.carus().counters() - k0;
  EXPECT_EQ(dc.total_reads() + dc.total_writes() + dc.instructions + dc.stall_cycles, 0u);
  EXPECT_EQ(dk.total_reads() + dk.total_writes() + dk.instructions + dk.stall_cycles, 0u);
}

TEST(Report, CyclesPerOutputIsExact) {
  const KernelSpec s = spec(KernelName::kAdd, ElemWidth::kW8, {100});
  const KernelRun run = run_kernel(DeviceKind::kCaesar, s, 1, TimingTable::preset("table-v"));
  const BenchReport r = make_report(DeviceKind::kCaesar, s, run, "table-v");
  EXPECT_EQ(r.key, "caesar:add/w8/100");
  EXPECT_EQ(r.outputs, 100u);
  EXPECT_DOUBLE_EQ(r.cycles_per_output, static_cast<double>(r.cycles_total) / 100.0);
  EXPECT_EQ(r.metric("cycles"), static_cast<double>(r.cycles_total));
  EXPECT_FALSE(r.metric("gops").has_value());
  EXPECT_FALSE(r.metric("bogus").has_value());
}

TEST(Report, Deterministic) {
  const auto entries = suite("smoke");
  const TimingTable t = TimingTable::preset("table-v");
  const auto a = run_suite(entries, t, "table-v", 7, 1);
  const auto b = run_suite(entries, t, "table-v", 7, 3);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(reports_to_json(a, "table-v", 7), reports_to_json(b, "table-v", 7));
  for (const auto& r : a) EXPECT_TRUE(r.pass) << r.key << " " << r.message;
}

TEST(Report, JsonAndCsvRoundTrip) {
  auto reports = run_suite(suite("smoke"), TimingTable::preset("table-v"), "table-v", 3);
  reports.push_back(make_peak_report(DeviceKind::kCarus, ElemWidth::kW8,
                                     TimingTable::preset("table-v"), "table-v"));
  const std::string json = reports_to_json(reports, "table-v", 3);
  const auto back = reports_from_json(json);
  EXPECT_EQ(reports_to_json(back, "table-v", 3), json);
  const std::string csv = reports_to_csv(reports);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'),
            static_cast<long>(reports.size() + 1));
  EXPECT_EQ(csv.rfind("key,", 0), 0u);
}

TEST(Report, CompareIsSymmetric) {
  std::vector<BenchReport> lo = {fake("a", 90)};
  std::vector<BenchReport> hi = {fake("a", 110)};
  const std::vector<GoldenEntry> g = {{"a", "cycles", 100.0, 0.10}};
  EXPECT_TRUE(compare(lo, g).pass);
  EXPECT_TRUE(compare(hi, g).pass);
  std::vector<BenchReport> out = {fake("a", 111)};
  EXPECT_FALSE(compare(out, g).pass);
  EXPECT_TRUE(compare(out, g, 0.2).pass);
  ASSERT_TRUE(hi[0].golden_delta.has_value());
  EXPECT_NEAR(*hi[0].golden_delta, 0.10, 1e-12);
}

TEST(Report, CompareMissingEntryFails) {
  std::vector<BenchReport> none;
  const CompareResult r = compare(none, {{"b", "cycles", 1.0, 0.1}});
  EXPECT_FALSE(r.pass);
  ASSERT_EQ(r.lines.size(), 1u);
  EXPECT_FALSE(r.lines[0].measured.has_value());
  EXPECT_FALSE(compare_to_text(r).empty());
}

TEST(Report, GoldenParsing) {
  const auto g = load_golden(R"({"entries": [
    {"key": "carus:relu/w8/16384", "metric": "cycles_per_output", "value": 0.13, "tol": 0.15},
    {"key": "caesar:peak/w8", "metric": "gops", "value": 1.32, "tol": 0}
  ]})");
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].metric, "cycles_per_output");
  EXPECT_DOUBLE_EQ(g[1].tol, 0.0);
  try {
    load_golden("[1, 2]");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(Report, ShippedGoldenFilesLoad) {
  for (const char* f : {"matmul_cycles.json", "peak_throughput.json", "cycles_per_output.json"}) {
    EXPECT_FALSE(load_golden_file(golden_dir() + "/" + f).empty()) << f;
  }
}

TEST(Report, PeakIdentities) {
  const TimingTable t = TimingTable::preset("table-v");
  const PeakResult caesar = measure_peak(DeviceKind::kCaesar, ElemWidth::kW8, t);
  const PeakResult carus = measure_peak(DeviceKind::kCarus, ElemWidth::kW8, t);
  EXPECT_DOUBLE_EQ(caesar.macs_per_cycle, 2.0);
  EXPECT_DOUBLE_EQ(carus.macs_per_cycle, 4.0);
  EXPECT_NEAR(caesar.gops, 1.32, 1e-12);
  EXPECT_NEAR(carus.gops, 2.64, 1e-12);
  EXPECT_DOUBLE_EQ(measure_peak(DeviceKind::kCaesar, ElemWidth::kW16, t).macs_per_cycle, 1.0);
  EXPECT_NEAR(measure_peak(DeviceKind::kCarus, ElemWidth::kW16, t).macs_per_cycle, 8.0 / 3.0,
              1e-12);
}

TEST(Report, SuitesAreWellFormed) {
  for (const std::string& name : suite_names()) {
    const auto entries = suite(name);
    EXPECT_FALSE(entries.empty()) << name;
    for (const auto& e : entries) {
      if (!e.peak) validate(e.spec);
    }
  }
  try {
    suite("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

}  // namespace
}  // namespace nmcsim
