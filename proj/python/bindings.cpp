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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "nmcsim/caesar_asm.hpp"
#include "nmcsim/error.hpp"
#include "nmcsim/fabric.hpp"
#include "nmcsim/kernels.hpp"
#include "nmcsim/report.hpp"
#include "nmcsim/xvnmc_asm.hpp"

namespace py = pybind11;
using namespace nmcsim;

namespace {

DeviceKind device_arg(const std::string& name) {
  auto d = device_from_name(name);
  if (!d) throw Error(ErrorCode::kInvalidArgument, "unknown device '" + name + "'");
  return *d;
}

ElemWidth width_arg(unsigned bits) {
  auto w = width_from_bits(bits);
  if (!w) throw Error(ErrorCode::kInvalidArgument, "width must be 8, 16 or 32");
  return *w;
}

py::list entries_out(const CommandStream& s) {
  py::list out;
  for (const auto& e : s.entries) out.append(py::make_tuple(e.word_offset, e.data));
  return out;
}

CommandStream entries_in(const std::vector<std::pair<std::uint16_t, Word32>>& v) {
  CommandStream s;
  for (const auto& [off, data] : v) s.entries.push_back({off, data});
  return s;
}

py::dict run_kernel_py(const std::string& device, const std::string& kernel, unsigned width,
                       std::vector<std::uint32_t> shape, std::uint64_t seed,
                       const std::string& preset, std::int32_t alpha, std::int32_t beta,
                       std::uint32_t shift) {
  KernelSpec s;
  auto k = kernel_from_name(kernel);
  if (!k) throw Error(ErrorCode::kInvalidArgument, "unknown kernel '" + kernel + "'");
  s.name = *k;
  s.width = width_arg(width);
  s.shape = std::move(shape);
  s.alpha = alpha;
  s.beta = beta;
  s.shift = shift;
  const DeviceKind d = device_arg(device);
  KernelRun r;
  {
    py::gil_scoped_release release;
    r = run_kernel(d, s, seed, TimingTable::preset(preset));
  }
  const BenchReport rep = make_report(d, s, r, preset);
  py::dict out;
  out["key"] = rep.key;
  out["cycles"] = rep.cycles_total;
  out["outputs"] = rep.outputs;
  out["cycles_per_output"] = rep.cycles_per_output;
  out["host_ops"] = rep.host_ops;
  out["program_size"] = r.program_size;
  out["pass"] = r.check.pass;
  out["message"] = r.check.pass ? std::string() : r.check.message();
  out["output"] = r.output.data;
  out["expected"] = r.expected.data;
  out["events_json"] = events_to_json(r.events);
  return out;
}

}  // namespace

PYBIND11_MODULE(_nmcsim, m) {
  m.doc() = "Cycle-approximate NM-Caesar / NM-Carus simulator";

  py::register_exception<Error>(m, "NmcsimError");

  m.def("timing_presets", &TimingTable::preset_names);
  m.def("kernels", [] {
    std::vector<std::string> out;
    for (KernelName k : all_kernels()) out.emplace_back(to_string(k));
    return out;
  });
  m.def("suites", &suite_names);

  m.def("asm_caesar", [](const std::string& src) { return entries_out(asm_caesar(src)); },
        py::arg("source"), "Assemble Caesar source into (word offset, data) pairs.");
  m.def("disasm_caesar",
        [](const std::vector<std::pair<std::uint16_t, Word32>>& v) {
          return disasm_caesar(entries_in(v));
        },
        py::arg("entries"));
  m.def("asm_xvnmc", [](const std::string& src) { return asm_xvnmc(src); }, py::arg("source"),
        "Assemble RV32E + xvnmc source into instruction words.");
  m.def("disasm_xvnmc", &disasm_xvnmc, py::arg("words"), py::arg("listing") = false);

  m.def("run_kernel", &run_kernel_py, py::arg("device"), py::arg("kernel"),
        py::arg("width") = 8, py::arg("shape"), py::arg("seed") = 1,
        py::arg("preset") = "table-v", py::arg("alpha") = 1, py::arg("beta") = 1,
        py::arg("shift") = 1);

  m.def("peak",
        [](const std::string& device, unsigned width, const std::string& preset) {
          const PeakResult p =
              measure_peak(device_arg(device), width_arg(width), TimingTable::preset(preset));
          py::dict out;
          out["macs_per_cycle"] = p.macs_per_cycle;
          out["gops"] = p.gops;
          out["cycles"] = p.cycles;
          out["macs"] = p.macs;
          return out;
        },
        py::arg("device"), py::arg("width") = 8, py::arg("preset") = "table-v");

  m.def("bench_json",
        [](const std::string& name, const std::string& preset, std::uint64_t seed,
           unsigned threads) {
          const auto entries = suite(name);
          std::vector<BenchReport> reports;
          {
            py::gil_scoped_release release;
            reports = run_suite(entries, TimingTable::preset(preset), preset, seed, threads);
          }
          return reports_to_json(reports, preset, seed);
        },
        py::arg("suite") = "reference", py::arg("preset") = "table-v", py::arg("seed") = 1,
        py::arg("threads") = 1);

  m.def("scenario_json",
        [](const std::string& text, const std::string& base_dir) {
          return scenario_to_json(run_scenario(text, base_dir));
        },
        py::arg("text"), py::arg("base_dir") = ".");

  py::class_<HostFabric>(m, "Fabric")
      .def(py::init([](const std::string& preset) {
             return HostFabric(TimingTable::preset(preset));
           }),
           py::arg("preset") = "table-v")
      .def_property_readonly("cycle", &HostFabric::cycle)
      .def_property_readonly("bus_transactions", &HostFabric::bus_transactions)
      .def("set_mode",
           [](HostFabric& f, const std::string& d, bool imc) { return f.set_mode(device_arg(d), imc); },
           py::arg("device"), py::arg("imc"))
      .def("mode", [](const HostFabric& f, const std::string& d) { return f.mode(device_arg(d)); })
      .def("write",
           [](HostFabric& f, const std::string& d, std::uint32_t addr, Word32 v) {
             f.write(device_arg(d), addr, v);
           },
           py::arg("device"), py::arg("addr"), py::arg("value"))
      .def("read",
           [](HostFabric& f, const std::string& d, std::uint32_t addr) {
             return f.read(device_arg(d), addr);
           },
           py::arg("device"), py::arg("addr"))
      .def("idle", &HostFabric::idle, py::arg("cycles"))
      .def("stream",
           [](HostFabric& f, const std::string& src) { return f.dma_stream(asm_caesar(src)); },
           py::arg("source"), "Assemble and stream a Caesar kernel; returns cycles.")
      .def("run_carus",
           [](HostFabric& f, const std::string& src,
              const std::vector<std::pair<std::uint32_t, Word32>>& args, bool irq) {
             CarusRunOptions opt;
             opt.use_irq = irq;
             const CarusRunResult r = f.run_carus_kernel(asm_xvnmc(src), args, opt);
             py::dict out;
             out["kernel_cycles"] = r.kernel_cycles;
             out["total_cycles"] = r.total_cycles;
             out["events_json"] = events_to_json(r.events);
             return out;
           },
           py::arg("source"), py::arg("args") = std::vector<std::pair<std::uint32_t, Word32>>{},
           py::arg("irq") = false);
}
