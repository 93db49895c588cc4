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

// nmcsim: assembler, simulator and benchmark front end.
//
// Exit codes: 0 pass, 1 mismatch or simulation failure, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nmcsim/caesar_asm.hpp"
#include "nmcsim/error.hpp"
#include "nmcsim/fabric.hpp"
#include "nmcsim/kernels.hpp"
#include "nmcsim/report.hpp"
#include "nmcsim/timing.hpp"
#include "nmcsim/xvnmc_asm.hpp"

namespace {

using namespace nmcsim;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_output(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << body;
}

std::vector<std::uint32_t> parse_shape(const std::string& text) {
  std::vector<std::uint32_t> shape;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      shape.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      throw UsageError("bad shape '" + text + "'");
    }
  }
  if (shape.empty()) throw UsageError("empty shape");
  return shape;
}

std::vector<std::string> default_golden() {
  const std::filesystem::path dir(golden_dir());
  return {(dir / "matmul_cycles.json").string(),
          (dir / "peak_throughput.json").string(),
          (dir / "cycles_per_output.json").string()};
}

std::vector<GoldenEntry> load_all(const std::vector<std::string>& files) {
  std::vector<GoldenEntry> all;
  for (const auto& f : files) {
    auto g = load_golden_file(f);
    all.insert(all.end(), g.begin(), g.end());
  }
  return all;
}

void print_reports(const std::vector<BenchReport>& reports) {
  for (const BenchReport& r : reports) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.key
              << " cycles=" << r.cycles_total
              << " cycles/output=" << r.cycles_per_output;
    if (r.gops) std::cout << " mac/cycle=" << *r.macs_per_cycle << " gops=" << *r.gops;
    if (r.host_ops) std::cout << " host_ops=" << r.host_ops;
    if (!r.message.empty()) std::cout << " (" << r.message << ")";
    std::cout << '\n';
  }
}

bool all_pass(const std::vector<BenchReport>& reports) {
  for (const auto& r : reports) {
    if (!r.pass) return false;
  }
  return true;
}

TimingTable timing_for(const std::string& preset, int bootstrap) {
  TimingTable t;
  try {
    t = TimingTable::preset(preset);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (bootstrap >= 0) t.bootstrap_cycles = static_cast<std::uint32_t>(bootstrap);
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nmcsim: near-memory computing macro simulator"};
  app.require_subcommand(1);

  std::string in_path, out_path, format = "text";
  bool hex = false, listing = false;

  auto* asm_c = app.add_subcommand("asm-caesar", "Assemble a Caesar command stream");
  asm_c->add_option("input", in_path, "Source file, '-' for stdin")->required();
  asm_c->add_option("-o,--output", out_path, "Output file (default stdout)");
  asm_c->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* dis_c = app.add_subcommand("disasm-caesar", "Disassemble a Caesar command stream");
  dis_c->add_option("input", in_path, "Stream file (text or json)")->required();
  dis_c->add_option("-o,--output", out_path, "Output file (default stdout)");

  auto* asm_x = app.add_subcommand("asm-xvnmc", "Assemble an NM-Carus program");
  asm_x->add_option("input", in_path, "Source file, '-' for stdin")->required();
  asm_x->add_option("-o,--output", out_path, "Binary image (default: hex to stdout)");
  asm_x->add_flag("--hex", hex, "Write one hex word per line instead of bytes");

  auto* dis_x = app.add_subcommand("disasm-xvnmc", "Disassemble an NM-Carus program");
  dis_x->add_option("input", in_path, "Binary image")->required();
  dis_x->add_option("-o,--output", out_path, "Output file (default stdout)");
  dis_x->add_flag("--hex", hex, "Input holds one hex word per line");
  dis_x->add_flag("--listing", listing, "Prefix address and encoding");

  std::string scenario, device = "carus", kernel, width = "8", shape, preset = "table-v";
  std::string json_out, csv_out, suite_name = "reference";
  std::vector<std::string> golden_files;
  int bootstrap = -1;
  std::uint64_t seed = 1;
  std::int32_t alpha = 1, beta = 1;
  std::uint32_t shift = 1;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  double tol = -1.0;

  auto* run = app.add_subcommand("run", "Run one scenario or one kernel");
  run->add_option("--scenario", scenario, "Scenario JSON file");
  run->add_option("--device", device, "caesar or carus")
      ->check(CLI::IsMember({"caesar", "carus"}));
  run->add_option("--kernel", kernel, "Kernel name");
  run->add_option("--width", width, "Element width: 8, 16 or 32")
      ->check(CLI::IsMember({"8", "16", "32"}));
  run->add_option("--shape", shape, "Comma-separated shape");
  run->add_option("--alpha", alpha, "gemm alpha");
  run->add_option("--beta", beta, "gemm beta");
  run->add_option("--shift", shift, "leaky_relu slope shift");

  auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
  bench->add_option("--suite", suite_name, "Suite name")
      ->check(CLI::IsMember(suite_names()));
  bench->add_option("--golden", golden_files, "Golden table(s) to compare against");
  bench->add_option("--threads", threads, "Worker threads");

  auto* cmp = app.add_subcommand("compare", "Compare a JSON report with golden tables");
  cmp->add_option("report", in_path, "Report JSON")->required();
  cmp->add_option("--golden", golden_files, "Golden table(s)");

  for (auto* sc : {run, bench}) {
    sc->add_option("--timing-preset", preset, "Timing table preset")
        ->check(CLI::IsMember(TimingTable::preset_names()));
    sc->add_option("--bootstrap", bootstrap, "Override the eCPU bootstrap cycles");
    sc->add_option("--seed", seed, "Input data seed");
    sc->add_option("--json", json_out, "Write the JSON report here");
    sc->add_option("--csv", csv_out, "Write the CSV report here");
  }
  for (auto* sc : {bench, cmp}) {
    sc->add_option("--tol", tol, "Override every golden tolerance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (asm_c->parsed()) {
      const CommandStream s = asm_caesar(read_input(in_path));
      write_output(out_path, format == "json" ? stream_to_json(s) : stream_to_text(s));
      return kExitPass;
    }
    if (dis_c->parsed()) {
      const std::string body = read_input(in_path);
      const auto first = body.find_first_not_of(" \t\r\n");
      const CommandStream s = first != std::string::npos && body[first] == '['
                                  ? stream_from_json(body)
                                  : stream_from_text(body);
      write_output(out_path, disasm_caesar(s));
      return kExitPass;
    }
    if (asm_x->parsed()) {
      const auto words = asm_xvnmc(read_input(in_path));
      if (hex || out_path.empty()) {
        std::ostringstream ss;
        for (std::uint32_t w : words) {
          ss << std::hex << std::setw(8) << std::setfill('0') << w << '\n';
        }
        write_output(out_path, ss.str());
      } else {
        const auto bytes = words_to_bytes(words);
        write_output(out_path, std::string(bytes.begin(), bytes.end()));
      }
      return kExitPass;
    }
    if (dis_x->parsed()) {
      const std::string body = read_input(in_path);
      std::vector<std::uint32_t> words;
      if (hex) {
        std::istringstream ss(body);
        for (std::string tok; ss >> tok;) {
          words.push_back(static_cast<std::uint32_t>(std::stoul(tok, nullptr, 16)));
        }
      } else {
        words = bytes_to_words(std::vector<std::uint8_t>(body.begin(), body.end()));
      }
      write_output(out_path, disasm_xvnmc(words, listing));
      return kExitPass;
    }
    if (run->parsed()) {
      if (!scenario.empty()) {
        const ScenarioResult r = run_scenario(
            read_input(scenario),
            std::filesystem::path(scenario).parent_path().string());
        const std::string body = scenario_to_json(r);
        if (!json_out.empty()) write_output(json_out, body);
        for (const auto& s : r.steps) {
          std::cout << (s.ok ? "ok   " : "FAIL ") << s.op << ' ' << s.device
                    << " cycles=" << s.cycles;
          if (!s.message.empty()) std::cout << " (" << s.message << ")";
          std::cout << '\n';
        }
        std::cout << (r.pass ? "PASS" : "FAIL") << " total_cycles=" << r.total_cycles << '\n';
        return r.pass ? kExitPass : kExitFail;
      }
      if (kernel.empty() || shape.empty()) {
        throw UsageError("run needs --scenario, or --kernel and --shape");
      }
      KernelSpec spec;
      const auto k = kernel_from_name(kernel);
      if (!k) throw UsageError("unknown kernel '" + kernel + "'");
      spec.name = *k;
      spec.width = *width_from_bits(static_cast<unsigned>(std::stoul(width)));
      spec.shape = parse_shape(shape);
      spec.alpha = alpha;
      spec.beta = beta;
      spec.shift = shift;
      const DeviceKind dev = *device_from_name(device);
      const TimingTable timing = timing_for(preset, bootstrap);
      const KernelRun kr = run_kernel(dev, spec, seed, timing);
      const std::vector<BenchReport> reports = {make_report(dev, spec, kr, preset)};
      print_reports(reports);
      if (!json_out.empty()) write_output(json_out, reports_to_json(reports, preset, seed));
      if (!csv_out.empty()) write_output(csv_out, reports_to_csv(reports));
      return all_pass(reports) ? kExitPass : kExitFail;
    }
    if (bench->parsed()) {
      const TimingTable timing = timing_for(preset, bootstrap);
      std::vector<BenchReport> reports =
          run_suite(suite(suite_name), timing, preset, seed, threads);
      if (golden_files.empty() && suite_name == "reference") {
        golden_files = default_golden();
      }
      bool pass = true;
      if (!golden_files.empty()) {
        const CompareResult c = compare(reports, load_all(golden_files),
                                        tol >= 0 ? std::optional(tol) : std::nullopt);
        std::cout << compare_to_text(c);
        pass = c.pass;
      }
      print_reports(reports);
      if (!json_out.empty()) write_output(json_out, reports_to_json(reports, preset, seed));
      if (!csv_out.empty()) write_output(csv_out, reports_to_csv(reports));
      pass = pass && all_pass(reports);
      std::cout << (pass ? "PASS" : "FAIL") << " " << reports.size() << " entries\n";
      return pass ? kExitPass : kExitFail;
    }
    if (cmp->parsed()) {
      std::vector<BenchReport> reports = reports_from_json(read_input(in_path));
      if (golden_files.empty()) golden_files = default_golden();
      const CompareResult c = compare(reports, load_all(golden_files),
                                      tol >= 0 ? std::optional(tol) : std::nullopt);
      std::cout << compare_to_text(c);
      std::cout << (c.pass ? "PASS" : "FAIL") << '\n';
      return c.pass ? kExitPass : kExitFail;
    }
  } catch (const UsageError& e) {
    std::cerr << "nmcsim: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "nmcsim: " << e.what() << '\n';
    return e.code() == ErrorCode::kInvalidArgument ? kExitUsage : kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "nmcsim: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
