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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nmcsim/caesar_asm.hpp"
#include "nmcsim/error.hpp"
#include "nmcsim/fabric.hpp"
#include "nmcsim/kernels.hpp"
#include "nmcsim/report.hpp"
#include "support.hpp"

namespace nmcsim {
namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      pass = false;
      detail << what;
    }
  }
};

const TimingTable& table_v() {
  static const TimingTable t = TimingTable::preset("table-v");
  return t;
}

KernelSpec spec(KernelName k, ElemWidth w, std::vector<std::uint32_t> shape) {
  KernelSpec s;
  s.name = k;
  s.width = w;
  s.shape = std::move(shape);
  return s;
}

std::uint64_t cycles(DeviceKind d, const KernelSpec& s) {
  const KernelRun r = run_kernel(d, s, 1, table_v());
  if (!r.check.pass) throw Error(ErrorCode::kInvalidArgument, s.id() + " wrong result");
  return r.cycles;
}

bool within(double measured, double target, double tol) {
  return std::fabs(measured - target) <= tol * std::fabs(target) + 1e-12;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// 1. Every kernel, width and device against the scalar oracle.
void functional(Outcome& o) {
  constexpr int kShapes = 50;
  std::uint64_t runs = 0;
  for (KernelName k : all_kernels()) {
    for (ElemWidth w : {ElemWidth::kW8, ElemWidth::kW16, ElemWidth::kW32}) {
      std::mt19937_64 rng(0xACCE55 + 97 * static_cast<unsigned>(k) + static_cast<unsigned>(w));
      for (int i = 0; i < kShapes; ++i) {
        const KernelSpec s = random_spec(k, w, rng);
        const std::uint64_t seed = rng();
        for (DeviceKind d : {DeviceKind::kCaesar, DeviceKind::kCarus}) {
          const KernelRun r = run_kernel(d, s, seed, table_v());
          ++runs;
          o.check(r.check.pass, std::string(to_string(d)) + " " + s.id() + " " +
                                    r.check.message());
        }
      }
    }
  }
  if (o.pass) o.detail << runs << " runs bit-exact";
}

// 2. Carus matmul cycle counts.
void carus_matmul(Outcome& o) {
  struct Case {
    ElemWidth w;
    std::uint32_t p;
    double target;
    double tol;
  };
  for (const Case& c : {Case{ElemWidth::kW8, 1024, 26.6e3, 0.10},
                        Case{ElemWidth::kW16, 512, 19.5e3, 0.10},
                        Case{ElemWidth::kW32, 256, 26.0e3, 0.15}}) {
    const KernelSpec s = spec(KernelName::kMatmul, c.w, {10, 10, c.p});
    const double m = static_cast<double>(cycles(DeviceKind::kCarus, s));
    o.check(within(m, c.target, c.tol), s.id() + " " + fmt(m));
    o.detail << (o.detail.tellp() > 0 ? ", " : "") << to_string(c.w) << " " << fmt(m) << "/"
             << fmt(c.target);
  }
}

// 3. Caesar matmul cycle counts.
void caesar_matmul(Outcome& o) {
  struct Case {
    ElemWidth w;
    std::uint32_t p;
    double tol;
  };
  for (const Case& c : {Case{ElemWidth::kW8, 1024, 0.25}, Case{ElemWidth::kW16, 512, 0.10}}) {
    const KernelSpec s = spec(KernelName::kMatmul, c.w, {10, 10, c.p});
    const double m = static_cast<double>(cycles(DeviceKind::kCaesar, s));
    o.check(within(m, 51.2e3, c.tol), s.id() + " " + fmt(m));
    o.detail << (o.detail.tellp() > 0 ? ", " : "") << to_string(c.w) << " " << fmt(m)
             << "/51.2e3";
  }
}

// 4. Peak throughput from measured steady state.
void peaks(Outcome& o) {
  const PeakResult caesar = measure_peak(DeviceKind::kCaesar, ElemWidth::kW8, table_v());
  const PeakResult carus = measure_peak(DeviceKind::kCarus, ElemWidth::kW8, table_v());
  o.check(caesar.macs_per_cycle == 2.0, "caesar MAC/cycle " + fmt(caesar.macs_per_cycle));
  o.check(carus.macs_per_cycle == 4.0, "carus MAC/cycle " + fmt(carus.macs_per_cycle));
  o.check(std::fabs(caesar.gops - 1.32) < 1e-9, "caesar GOPS " + fmt(caesar.gops));
  o.check(std::fabs(carus.gops - 2.64) < 1e-9, "carus GOPS " + fmt(carus.gops));
  o.detail << "caesar " << fmt(caesar.macs_per_cycle) << " MAC/cycle " << fmt(caesar.gops)
           << " GOPS, carus " << fmt(carus.macs_per_cycle) << " MAC/cycle " << fmt(carus.gops)
           << " GOPS";
}

// 5. Saturation and crossover over 8x8xp.
void saturation(Outcome& o) {
  std::vector<std::uint32_t> ps;
  for (std::uint32_t p = 16; p <= 1024; p *= 2) ps.push_back(p);
  std::vector<double> carus, caesar;
  for (std::uint32_t p : ps) {
    const KernelSpec s = spec(KernelName::kMatmul, ElemWidth::kW8, {8, 8, p});
    const double out = static_cast<double>(s.output_count());
    carus.push_back(static_cast<double>(cycles(DeviceKind::kCarus, s)) / out);
    caesar.push_back(static_cast<double>(cycles(DeviceKind::kCaesar, s)) / out);
  }
  for (std::size_t i = 1; i < ps.size(); ++i) {
    o.check(carus[i] < carus[i - 1], "carus not decreasing at p=" + std::to_string(ps[i]));
  }
  int sign_changes = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i] >= 512) {
      o.check(1.0 / carus[i] >= 0.45,
              "carus p=" + std::to_string(ps[i]) + " " + fmt(1.0 / carus[i]) + " output/cycle");
      o.check(within(1.0 / caesar[i], 0.25, 0.10),
              "caesar p=" + std::to_string(ps[i]) + " " + fmt(1.0 / caesar[i]) + " output/cycle");
    }
    if (i > 0 && (carus[i] < caesar[i]) != (carus[i - 1] < caesar[i - 1])) ++sign_changes;
  }
  o.check(carus.front() > caesar.front(), "carus not slower at p=16");
  o.check(carus.back() < caesar.back(), "carus not faster at p=1024");
  o.check(sign_changes == 1, "crossover count " + std::to_string(sign_changes));
  std::size_t cross = 0;
  while (cross < ps.size() && carus[cross] >= caesar[cross]) ++cross;
  o.detail << "carus " << fmt(1.0 / carus.back()) << " output/cycle, caesar "
           << fmt(1.0 / caesar.back()) << " output/cycle at p=1024; carus faster from p="
           << (cross < ps.size() ? std::to_string(ps[cross]) : "-");
}

// 6. Derived cycles/output ratios.
void derived_ratios(Outcome& o) {
  const auto golden = load_golden_file(golden_dir() + "/cycles_per_output.json");
  o.check(golden.size() == 4, "expected 4 derived entries");
  for (const GoldenEntry& g : golden) {
    const auto colon = g.key.find(':');
    const auto dev = device_from_name(g.key.substr(0, colon));
    // key: device:kernel/wN/shape
    const std::string id = g.key.substr(colon + 1);
    const auto s1 = id.find('/');
    const auto s2 = id.find('/', s1 + 1);
    KernelSpec s;
    s.name = *kernel_from_name(id.substr(0, s1));
    s.width = *width_from_bits(static_cast<unsigned>(std::stoul(id.substr(s1 + 2, s2 - s1 - 2))));
    std::string dims = id.substr(s2 + 1);
    std::replace(dims.begin(), dims.end(), 'x', ' ');
    std::istringstream ds(dims);
    for (std::uint32_t v; ds >> v;) s.shape.push_back(v);
    const double m =
        static_cast<double>(cycles(*dev, s)) / static_cast<double>(s.output_count());
    o.check(within(m, g.value, 0.15), g.key + " " + fmt(m) + " vs " + fmt(g.value));
    o.detail << (o.detail.tellp() > 0 ? ", " : "") << g.key << " " << fmt(m) << "/"
             << fmt(g.value);
  }
}

std::uint64_t stream_cycles(const CommandStream& s) {
  HostFabric fab;
  fab.set_mode(DeviceKind::kCaesar, true);
  return fab.dma_stream(s);
}

CommandStream adds(unsigned n, std::uint16_t src2_base) {
  CommandStream s;
  for (unsigned i = 0; i < n; ++i) {
    s.push({CaesarOpcode::kAdd, static_cast<std::uint16_t>(i),
            static_cast<std::uint16_t>(src2_base + i), static_cast<std::uint16_t>(2048 + i)});
  }
  return s;
}

std::uint64_t carus_cycles(const std::string& body) {
  HostFabric fab;
  return fab.run_carus_kernel(asm_xvnmc(testing::with_exit(body))).kernel_cycles;
}

// 7. Micro-timing properties.
void micro_timing(Outcome& o) {
  const std::uint64_t cross = stream_cycles(adds(400, 4096)) - stream_cycles(adds(200, 4096));
  const std::uint64_t same = stream_cycles(adds(400, 1024)) - stream_cycles(adds(200, 1024));
  o.check(cross == 400, "cross-bank " + std::to_string(cross) + " cycles per 200");
  o.check(same == 600, "same-bank " + std::to_string(same) + " cycles per 200");
  std::uint64_t overhead = 0;
  for (unsigned n : {1u, 16u, 256u}) {
    overhead = std::max<std::uint64_t>(overhead, stream_cycles(adds(n, 4096)) - 2 * n);
  }
  o.check(overhead <= 5, "offload overhead " + std::to_string(overhead));

  const std::string base = "li x1, 1024\nvsetvli x0, x1, e8\nli x5, 3\nxvnmc.vmacc.vx v1, v2, x5\n";
  std::string scalar = base;
  for (int i = 0; i < 60; ++i) scalar += "addi x6, x6, 1\n";
  const std::uint64_t t0 = carus_cycles(base);
  const std::uint64_t t_scalar = carus_cycles(scalar);
  const std::uint64_t t_emvx = carus_cycles(base + "xvnmc.emvx x7, v1, x0\n");
  o.check(t_scalar == t0, "scalar ops added " + std::to_string(t_scalar - t0) + " cycles");
  // emvx waits for the commit, then the exit sequence's lui follows it.
  o.check(t_emvx == t0 + table_v().emvx_cycles + 1,
          "emvx finished " + std::to_string(t_emvx - t0) + " cycles after the vmacc");
  o.detail << "cross " << cross / 200.0 << ", same " << same / 200.0
           << " cycles/instr, overhead " << overhead << ", scalar +" << (t_scalar - t0)
           << ", emvx after commit +" << (t_emvx - t0);
}

// 8. Toolchain round trips.
void round_trips(Outcome& o) {
  constexpr int kN = 100000;
  std::mt19937_64 rng(0x5EED);
  int bad_x = 0, bad_c = 0, bad_text = 0;
  for (int i = 0; i < kN; ++i) {
    const Instruction in = testing::random_instruction(rng);
    const std::uint32_t w = encode(in);
    if (decode(w) != in || encode(decode(w)) != w) ++bad_x;
    if (i % 10 == 0 && asm_xvnmc(disasm(in)) != std::vector<std::uint32_t>{w}) ++bad_text;

    const CaesarInstr c = testing::random_caesar(rng);
    if (caesar_decode(caesar_encode(c), c.dest) != c) ++bad_c;
  }
  for (int i = 0; i < 500; ++i) {
    CommandStream s;
    for (int j = 0; j < 20; ++j) s.push(testing::random_caesar(rng));
    if (asm_caesar(disasm_caesar(s)) != s) ++bad_text;
  }
  o.check(bad_x == 0, std::to_string(bad_x) + " xvnmc mismatches");
  o.check(bad_c == 0, std::to_string(bad_c) + " caesar mismatches");
  o.check(bad_text == 0, std::to_string(bad_text) + " text round-trip mismatches");

  std::string src;
  for (int i = 0; i < 128; ++i) src += "nop\n";
  bool fits = asm_xvnmc(src).size() == 128;
  bool rejected = false;
  try {
    asm_xvnmc(src + "nop\n");
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::kProgramTooLarge;
  }
  bool fabric_rejected = false;
  try {
    HostFabric fab;
    fab.run_carus_kernel(std::vector<std::uint32_t>(129, 0x13));
  } catch (const Error& e) {
    fabric_rejected = e.code() == ErrorCode::kProgramTooLarge;
  }
  o.check(fits && rejected && fabric_rejected, "512 B program limit not enforced");
  o.detail << kN << " xvnmc and " << kN << " caesar encode/decode round trips, 512 B limit";
}

// 9. Energy claims replaced by event-counter conservation.
void conservation(Outcome& o) {
  for (unsigned n : {1u, 100u, 1000u}) {
    HostFabric fab;
    fab.set_mode(DeviceKind::kCaesar, true);
    fab.dma_stream(adds(n, 4096));
    const EventCounters& e = fab.caesar().counters();
    o.check(e.total_reads() == 2 * n && e.total_writes() == n && e.instructions == n,
            "caesar add x" + std::to_string(n));
    o.check(e.sram_reads[0] == n && e.sram_reads[1] == n, "caesar bank split");
  }
  {
    HostFabric fab;
    const auto r = fab.run_carus_kernel(asm_xvnmc(
        testing::with_exit("li x1, 1024\nvsetvli x0, x1, e8\nli x5, 3\nxvnmc.vmacc.vx v1, v2, x5\n")));
    for (unsigned b = 0; b < 4; ++b) {
      o.check(r.events.sram_reads[b] == 128 && r.events.sram_writes[b] == 64,
              "carus lane " + std::to_string(b));
    }
    o.check(r.events.macs == 1024, "carus mac count");
    o.check(r.events.instructions == r.events.scalar_instructions + r.events.vector_instructions,
            "carus instruction split");
  }
  {
    HostFabric fab;
    const EventCounters c0 = fab.caesar().counters();
    const EventCounters k0 = fab.carus().counters();
    fab.idle(5000);
    const EventCounters dc = fab.caesar().counters() - c0;
    const EventCounters dk = fab.carus().counters() - k0;
    o.check(dc.total_reads() + dc.total_writes() + dc.instructions == 0 &&
                dk.total_reads() + dk.total_writes() + dk.instructions == 0,
            "idle cycles produced events");
  }
  // Every kernel: instruction accounting adds up.
  for (KernelName k : all_kernels()) {
    std::mt19937_64 rng(static_cast<unsigned>(k));
    const KernelSpec s = random_spec(k, ElemWidth::kW16, rng);
    const KernelRun r = run_kernel(DeviceKind::kCarus, s, 1, table_v());
    o.check(r.events.instructions == r.events.scalar_instructions + r.events.vector_instructions,
            s.id() + " instruction split");
  }
  o.detail << "counters conserved; absolute energy, CPU baselines and area/frequency not modelled";
}

}  // namespace
}  // namespace nmcsim

int main() {
  using namespace nmcsim;
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"functional correctness", functional},
      {"carus matmul cycles", carus_matmul},
      {"caesar matmul cycles", caesar_matmul},
      {"peak throughput", peaks},
      {"saturation and crossover", saturation},
      {"derived cycles/output", derived_ratios},
      {"micro-timing", micro_timing},
      {"toolchain round trips", round_trips},
      {"event conservation", conservation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].run(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %zu %-26s %s  %s\n", i + 1, criteria[i].name,
                o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
