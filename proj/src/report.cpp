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

#include "nmcsim/report.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "nmcsim/caesar.hpp"
#include "nmcsim/error.hpp"
#include "nmcsim/xvnmc_asm.hpp"

#ifndef NMCSIM_DEFAULT_GOLDEN_DIR
#define NMCSIM_DEFAULT_GOLDEN_DIR "golden"
#endif

namespace nmcsim {

using nlohmann::json;

std::optional<double> BenchReport::metric(std::string_view name) const {
  if (name == "cycles") return static_cast<double>(cycles_total);
  if (name == "cycles_per_output") return cycles_per_output;
  if (name == "macs_per_cycle") return macs_per_cycle;
  if (name == "gops") return gops;
  return std::nullopt;
}

std::string report_key(DeviceKind device, const KernelSpec& spec) {
  return std::string(to_string(device)) + ":" + spec.id();
}

BenchReport make_report(DeviceKind device, const KernelSpec& spec,
                        const KernelRun& run, std::string_view timing_name) {
  BenchReport r;
  r.key = report_key(device, spec);
  r.device = device;
  r.kernel = std::string(to_string(spec.name));
  r.width = std::string(to_string(spec.width));
  r.shape = spec.shape;
  r.timing = std::string(timing_name);
  r.cycles_total = run.cycles;
  r.outputs = spec.output_count();
  r.cycles_per_output =
      static_cast<double>(run.cycles) / static_cast<double>(r.outputs);
  r.host_ops = run.host_ops;
  r.events = run.events;
  r.verified = run.check.pass;
  r.pass = run.check.pass;
  if (!run.check.pass) r.message = run.check.message();
  return r;
}

// ---------------------------------------------------------------------------
// Steady-state throughput

namespace {

struct PeakSample {
  std::uint64_t cycles = 0;
  std::uint64_t macs = 0;
};

PeakSample caesar_mac_stream(ElemWidth w, const TimingTable& timing,
                             std::uint32_t n) {
  CommandStream s;
  s.push(caesar_csrw(w));
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto a = static_cast<std::uint16_t>(i % kCaesarBankWords);
    const auto b = static_cast<std::uint16_t>(kCaesarBankWords + a);
    const CaesarOpcode op = i == 0       ? CaesarOpcode::kMacInit
                            : i + 1 == n ? CaesarOpcode::kMacStore
                                         : CaesarOpcode::kMac;
    s.push(CaesarInstr{op, a, b, 0});
  }
  HostFabric fabric(timing);
  fabric.set_mode(DeviceKind::kCaesar, true);
  const EventCounters before = fabric.caesar().counters();
  PeakSample p;
  p.cycles = fabric.dma_stream(s);
  p.macs = (fabric.caesar().counters() - before).macs;
  return p;
}

PeakSample carus_mac_loop(ElemWidth w, const TimingTable& timing,
                          std::uint32_t reps) {
  const std::string e = "e" + std::to_string(elem_bits(w));
  const std::string src =
      "    lw   x2, 0x1C0(x0)\n"
      "    li   x1, -1\n"
      "    li   x5, 3\n"
      "    vsetvli x0, x1, " + e + "\n"
      "loop:\n"
      "    xvnmc.vmacc.vx v2, v1, x5\n"
      "    addi x2, x2, -1\n"
      "    bnez x2, loop\n"
      "    lui  x13, 0x8\n"
      "    sw   x0, 0(x13)\n";
  HostFabric fabric(timing);
  const CarusRunResult r =
      fabric.run_carus_kernel(asm_xvnmc(src), {{kCarusArgBase, reps}});
  return {r.kernel_cycles, r.events.macs};
}

}  // namespace

PeakResult measure_peak(DeviceKind device, ElemWidth w,
                        const TimingTable& timing) {
  PeakSample lo, hi;
  if (device == DeviceKind::kCaesar) {
    lo = caesar_mac_stream(w, timing, 64);
    hi = caesar_mac_stream(w, timing, 320);
  } else {
    lo = carus_mac_loop(w, timing, 8);
    hi = carus_mac_loop(w, timing, 40);
  }
  PeakResult r;
  r.cycles = hi.cycles - lo.cycles;
  r.macs = hi.macs - lo.macs;
  r.macs_per_cycle = static_cast<double>(r.macs) / static_cast<double>(r.cycles);
  r.gops = r.macs_per_cycle * 2.0 * kNominalClockMhz / 1000.0;
  return r;
}

BenchReport make_peak_report(DeviceKind device, ElemWidth w,
                             const TimingTable& timing,
                             std::string_view timing_name) {
  const PeakResult p = measure_peak(device, w, timing);
  BenchReport r;
  r.device = device;
  r.kernel = "peak";
  r.width = std::string(to_string(w));
  r.key = std::string(to_string(device)) + ":peak/" + r.width;
  r.timing = std::string(timing_name);
  r.cycles_total = p.cycles;
  r.outputs = p.macs;
  r.cycles_per_output = static_cast<double>(p.cycles) / static_cast<double>(p.macs);
  r.macs_per_cycle = p.macs_per_cycle;
  r.gops = p.gops;
  r.events.macs = p.macs;
  return r;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

KernelSpec spec_of(KernelName k, ElemWidth w, std::vector<std::uint32_t> shape) {
  KernelSpec s;
  s.name = k;
  s.width = w;
  s.shape = std::move(shape);
  if (k == KernelName::kGemm) {
    s.alpha = 3;
    s.beta = -2;
  }
  return s;
}

constexpr ElemWidth kWidths[] = {ElemWidth::kW8, ElemWidth::kW16, ElemWidth::kW32};
constexpr DeviceKind kDevices[] = {DeviceKind::kCaesar, DeviceKind::kCarus};

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"reference", "scaling",
                                                 "kernels", "smoke"};
  return names;
}

std::vector<SuiteEntry> suite(std::string_view name) {
  std::vector<SuiteEntry> out;
  auto add = [&out](DeviceKind d, KernelSpec s) { out.push_back({d, std::move(s), false}); };
  if (name == "reference") {
    for (DeviceKind d : kDevices) {
      add(d, spec_of(KernelName::kMatmul, ElemWidth::kW8, {10, 10, 1024}));
      add(d, spec_of(KernelName::kMatmul, ElemWidth::kW16, {10, 10, 512}));
      add(d, spec_of(KernelName::kMatmul, ElemWidth::kW32, {10, 10, 256}));
      add(d, spec_of(KernelName::kMatmul, ElemWidth::kW8, {8, 8, 1024}));
    }
    add(DeviceKind::kCarus, spec_of(KernelName::kRelu, ElemWidth::kW8, {16384}));
    add(DeviceKind::kCaesar, spec_of(KernelName::kAdd, ElemWidth::kW8, {8192}));
    for (DeviceKind d : kDevices) {
      for (ElemWidth w : kWidths) out.push_back({d, spec_of(KernelName::kMatmul, w, {}), true});
    }
  } else if (name == "scaling") {
    for (DeviceKind d : kDevices) {
      for (std::uint32_t p = 16; p <= 1024; p *= 2) {
        add(d, spec_of(KernelName::kMatmul, ElemWidth::kW8, {8, 8, p}));
      }
    }
  } else if (name == "kernels") {
    for (DeviceKind d : kDevices) {
      for (ElemWidth w : kWidths) {
        add(d, spec_of(KernelName::kXor, w, {1024}));
        add(d, spec_of(KernelName::kAdd, w, {1024}));
        add(d, spec_of(KernelName::kMul, w, {1024}));
        add(d, spec_of(KernelName::kMatmul, w, {8, 8, 256}));
        add(d, spec_of(KernelName::kGemm, w, {8, 8, 128}));
        add(d, spec_of(KernelName::kConv2d, w, {8, 64, 3}));
        add(d, spec_of(KernelName::kRelu, w, {1024}));
        KernelSpec leaky = spec_of(KernelName::kLeakyRelu, w, {1024});
        leaky.shift = 2;
        add(d, leaky);
        add(d, spec_of(KernelName::kMaxpool, w, {8, 64}));
        add(d, spec_of(KernelName::kAutoencoder, w,
                       {32, 16, 16, 16, 16, 8, 16, 16, 16, 16, 32}));
      }
    }
  } else if (name == "smoke") {
    for (DeviceKind d : kDevices) {
      add(d, spec_of(KernelName::kAdd, ElemWidth::kW8, {256}));
      add(d, spec_of(KernelName::kMatmul, ElemWidth::kW16, {4, 4, 64}));
      add(d, spec_of(KernelName::kConv2d, ElemWidth::kW8, {6, 32, 3}));
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown suite '" + std::string(name) + "'");
  }
  return out;
}

std::vector<BenchReport> run_suite(const std::vector<SuiteEntry>& entries,
                                   const TimingTable& timing,
                                   std::string_view timing_name,
                                   std::uint64_t seed, unsigned threads) {
  std::vector<BenchReport> reports(entries.size());
  std::vector<std::exception_ptr> errors(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < entries.size();) {
      const SuiteEntry& e = entries[i];
      try {
        if (e.peak) {
          reports[i] = make_peak_report(e.device, e.spec.width, timing, timing_name);
        } else {
          const KernelRun run = run_kernel(e.device, e.spec, seed, timing);
          reports[i] = make_report(e.device, e.spec, run, timing_name);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, entries.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return reports;
}

// ---------------------------------------------------------------------------
// Golden tables

std::vector<GoldenEntry> load_golden(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("golden table is not valid JSON: ") + e.what());
  }
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    throw Error(ErrorCode::kInvalidArgument, "golden table has no 'entries'");
  }
  const std::string metric = doc.value("metric", "cycles");
  const double tol = doc.value("tol", 0.10);
  std::vector<GoldenEntry> out;
  for (const json& e : doc["entries"]) {
    GoldenEntry g;
    g.key = e.at("key").get<std::string>();
    g.metric = e.value("metric", metric);
    g.value = e.at("value").get<double>();
    g.tol = e.value("tol", tol);
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GoldenEntry> load_golden_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_golden(ss.str());
}

std::string golden_dir() {
  if (const char* env = std::getenv("NMCSIM_GOLDEN_DIR"); env && *env) return env;
  return NMCSIM_DEFAULT_GOLDEN_DIR;
}

CompareResult compare(std::vector<BenchReport>& reports,
                      const std::vector<GoldenEntry>& golden,
                      std::optional<double> tol_override) {
  CompareResult result;
  for (const GoldenEntry& g : golden) {
    CompareLine line;
    line.key = g.key;
    line.metric = g.metric;
    line.golden = g.value;
    line.tol = tol_override.value_or(g.tol);
    for (BenchReport& r : reports) {
      if (r.key != g.key) continue;
      line.measured = r.metric(g.metric);
      if (line.measured) {
        line.delta = std::fabs(*line.measured - g.value) / std::fabs(g.value);
        // Tiny slack so that exact identities survive floating-point rounding.
        line.pass = line.delta <= line.tol + 1e-12;
        r.golden = g.value;
        r.golden_delta = line.delta;
        if (!line.pass) {
          r.pass = false;
          r.message = g.metric + " off by " + std::to_string(line.delta * 100) + "%";
        }
      }
      break;
    }
    result.pass = result.pass && line.pass;
    result.lines.push_back(std::move(line));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json events_json(const EventCounters& e) {
  return json{{"sram_reads", e.sram_reads},
              {"sram_writes", e.sram_writes},
              {"sram_reads_total", e.total_reads()},
              {"sram_writes_total", e.total_writes()},
              {"instructions", e.instructions},
              {"scalar_instructions", e.scalar_instructions},
              {"vector_instructions", e.vector_instructions},
              {"alu_ops", e.alu_ops},
              {"macs", e.macs},
              {"bus_transactions", e.bus_transactions},
              {"stall_cycles", e.stall_cycles}};
}

EventCounters events_from(const json& j) {
  EventCounters e;
  e.sram_reads = j.value("sram_reads", std::vector<std::uint64_t>{});
  e.sram_writes = j.value("sram_writes", std::vector<std::uint64_t>{});
  e.instructions = j.value("instructions", std::uint64_t{0});
  e.scalar_instructions = j.value("scalar_instructions", std::uint64_t{0});
  e.vector_instructions = j.value("vector_instructions", std::uint64_t{0});
  e.alu_ops = j.value("alu_ops", std::uint64_t{0});
  e.macs = j.value("macs", std::uint64_t{0});
  e.bus_transactions = j.value("bus_transactions", std::uint64_t{0});
  e.stall_cycles = j.value("stall_cycles", std::uint64_t{0});
  return e;
}

std::string shape_text(const std::vector<std::uint32_t>& shape) {
  std::string s;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i != 0) s += 'x';
    s += std::to_string(shape[i]);
  }
  return s;
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 0) s += ';';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string num(double v) {
  std::ostringstream ss;
  ss << std::setprecision(10) << v;
  return ss.str();
}

}  // namespace

std::string events_to_json(const EventCounters& e) { return events_json(e).dump(2); }

std::string reports_to_json(const std::vector<BenchReport>& reports,
                            std::string_view timing_name, std::uint64_t seed) {
  json arr = json::array();
  for (const BenchReport& r : reports) {
    json j{{"key", r.key},
           {"device", std::string(to_string(r.device))},
           {"kernel", r.kernel},
           {"width", r.width},
           {"shape", r.shape},
           {"timing", r.timing},
           {"cycles_total", r.cycles_total},
           {"outputs", r.outputs},
           {"cycles_per_output", r.cycles_per_output},
           {"host_ops", r.host_ops},
           {"events", events_json(r.events)},
           {"verified", r.verified},
           {"pass", r.pass}};
    if (r.macs_per_cycle) j["macs_per_cycle"] = *r.macs_per_cycle;
    if (r.gops) j["gops"] = *r.gops;
    j["golden"] = r.golden ? json(*r.golden) : json(nullptr);
    j["golden_delta"] = r.golden_delta ? json(*r.golden_delta) : json(nullptr);
    if (!r.message.empty()) j["message"] = r.message;
    arr.push_back(std::move(j));
  }
  json doc{{"schema", kReportSchemaVersion},
           {"generator", "nmcsim"},
           {"timing", std::string(timing_name)},
           {"seed", seed},
           {"reports", arr}};
  return doc.dump(2) + "\n";
}

std::vector<BenchReport> reports_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("report is not valid JSON: ") + e.what());
  }
  if (doc.value("schema", 0) != kReportSchemaVersion) {
    throw Error(ErrorCode::kInvalidArgument, "unsupported report schema");
  }
  std::vector<BenchReport> out;
  for (const json& j : doc.at("reports")) {
    BenchReport r;
    r.key = j.at("key").get<std::string>();
    const auto dev = device_from_name(j.at("device").get<std::string>());
    if (!dev) throw Error(ErrorCode::kInvalidArgument, "bad device in report");
    r.device = *dev;
    r.kernel = j.value("kernel", "");
    r.width = j.value("width", "");
    r.shape = j.value("shape", std::vector<std::uint32_t>{});
    r.timing = j.value("timing", "");
    r.cycles_total = j.value("cycles_total", std::uint64_t{0});
    r.outputs = j.value("outputs", std::uint64_t{0});
    r.cycles_per_output = j.value("cycles_per_output", 0.0);
    r.host_ops = j.value("host_ops", std::uint64_t{0});
    if (j.contains("macs_per_cycle")) r.macs_per_cycle = j["macs_per_cycle"].get<double>();
    if (j.contains("gops")) r.gops = j["gops"].get<double>();
    if (j.contains("events")) r.events = events_from(j["events"]);
    r.verified = j.value("verified", true);
    r.pass = r.verified;
    out.push_back(std::move(r));
  }
  return out;
}

std::string reports_to_csv(const std::vector<BenchReport>& reports) {
  std::ostringstream ss;
  ss << "key,device,kernel,width,shape,timing,cycles_total,outputs,"
        "cycles_per_output,host_ops,macs_per_cycle,gops,verified,pass,golden,"
        "golden_delta,sram_reads,sram_writes,sram_reads_total,"
        "sram_writes_total,instructions,scalar_instructions,"
        "vector_instructions,alu_ops,macs,bus_transactions,stall_cycles\n";
  for (const BenchReport& r : reports) {
    const EventCounters& e = r.events;
    ss << r.key << ',' << to_string(r.device) << ',' << r.kernel << ','
       << r.width << ',' << shape_text(r.shape) << ',' << r.timing << ','
       << r.cycles_total << ',' << r.outputs << ',' << num(r.cycles_per_output)
       << ',' << r.host_ops << ','
       << (r.macs_per_cycle ? num(*r.macs_per_cycle) : "") << ','
       << (r.gops ? num(*r.gops) : "") << ',' << (r.verified ? 1 : 0) << ','
       << (r.pass ? 1 : 0) << ',' << (r.golden ? num(*r.golden) : "") << ','
       << (r.golden_delta ? num(*r.golden_delta) : "") << ','
       << join(e.sram_reads) << ',' << join(e.sram_writes) << ','
       << e.total_reads() << ',' << e.total_writes() << ',' << e.instructions
       << ',' << e.scalar_instructions << ',' << e.vector_instructions << ','
       << e.alu_ops << ',' << e.macs << ',' << e.bus_transactions << ','
       << e.stall_cycles << '\n';
  }
  return ss.str();
}

std::string compare_to_text(const CompareResult& result) {
  std::ostringstream ss;
  for (const CompareLine& l : result.lines) {
    ss << (l.pass ? "PASS " : "FAIL ") << l.key << ' ' << l.metric << ' ';
    if (l.measured) {
      ss << "measured=" << num(*l.measured) << " golden=" << num(l.golden)
         << " delta=" << std::fixed << std::setprecision(2) << l.delta * 100
         << "% tol=" << l.tol * 100 << '%' << std::defaultfloat;
    } else {
      ss << "missing from report";
    }
    ss << '\n';
  }
  return ss.str();
}

std::string scenario_to_json(const ScenarioResult& result) {
  json steps = json::array();
  for (const ScenarioStep& s : result.steps) {
    json j{{"op", s.op}, {"device", s.device}, {"cycles", s.cycles}, {"ok", s.ok}};
    if (!s.values.empty()) j["values"] = s.values;
    if (!s.message.empty()) j["message"] = s.message;
    steps.push_back(std::move(j));
  }
  json doc{{"schema", kReportSchemaVersion},
           {"pass", result.pass},
           {"total_cycles", result.total_cycles},
           {"bus_transactions", result.bus_transactions},
           {"steps", steps},
           {"events", {{"caesar", events_json(result.caesar_events)},
                       {"carus", events_json(result.carus_events)}}}};
  return doc.dump(2) + "\n";
}

}  // namespace nmcsim
