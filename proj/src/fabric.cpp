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

#include "nmcsim/fabric.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nmcsim/error.hpp"
#include "text_util.hpp"

namespace nmcsim {

std::string_view to_string(DeviceKind d) {
  return d == DeviceKind::kCaesar ? "caesar" : "carus";
}

std::optional<DeviceKind> device_from_name(std::string_view name) {
  const std::string n = text::lower(std::string(name));
  if (n == "caesar") return DeviceKind::kCaesar;
  if (n == "carus") return DeviceKind::kCarus;
  return std::nullopt;
}

HostFabric::HostFabric(const TimingTable& timing)
    : caesar_(timing), carus_(timing) {}

void HostFabric::sync_caesar(std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) caesar_.step();
}

void HostFabric::sync_carus(std::uint64_t n) { carus_.tick(n); }

void HostFabric::idle(std::uint64_t n) {
  sync_caesar(n);
  sync_carus(n);
  clock_.cycle += n;
}

std::uint64_t HostFabric::set_mode(DeviceKind device, bool imc) {
  ++bus_transactions_;
  idle(1);
  if (device == DeviceKind::kCaesar) {
    caesar_.set_computing_mode(imc);
  } else {
    carus_.set_config_mode(imc);
  }
  return 1;
}

bool HostFabric::mode(DeviceKind device) const {
  return device == DeviceKind::kCaesar ? caesar_.computing_mode()
                                       : carus_.config_mode();
}

namespace {

std::uint32_t caesar_word(std::uint32_t byte_addr) {
  if (byte_addr % 4 != 0) {
    throw Error(ErrorCode::kAddressOutOfRange, "unaligned bus access");
  }
  if (byte_addr / 4 >= kCaesarWords) {
    throw Error(ErrorCode::kAddressOutOfRange,
                "offset " + text::hex(byte_addr, 4) + " is beyond the macro");
  }
  return byte_addr / 4;
}

}  // namespace

Word32 HostFabric::transact(const BusTxn& txn) {
  ++bus_transactions_;
  Word32 value = 0;
  std::uint64_t spent = 0;
  if (txn.device == DeviceKind::kCaesar) {
    const std::uint32_t word = caesar_word(txn.byte_addr);
    if (txn.is_write) {
      spent = caesar_.write(word, txn.wdata.value_or(0));
    } else {
      value = caesar_.read(word, &spent);
    }
    sync_carus(spent);
  } else {
    if (txn.is_write) {
      carus_.bus_write(txn.byte_addr, txn.wdata.value_or(0));
    } else {
      value = carus_.bus_read(txn.byte_addr);
    }
    spent = 1;
    sync_caesar(spent);
  }
  clock_.cycle += spent;
  return value;
}

void HostFabric::write(DeviceKind device, std::uint32_t byte_addr,
                       Word32 data) {
  transact(BusTxn{device, byte_addr, data, true});
}

Word32 HostFabric::read(DeviceKind device, std::uint32_t byte_addr) {
  return transact(BusTxn{device, byte_addr, std::nullopt, false});
}

void HostFabric::write_block(DeviceKind device, std::uint32_t byte_addr,
                             const std::vector<Word32>& words) {
  for (std::size_t i = 0; i < words.size(); ++i) {
    write(device, byte_addr + static_cast<std::uint32_t>(4 * i), words[i]);
  }
}

std::uint64_t HostFabric::dma_stream(const CommandStream& stream,
                                     DeviceKind device) {
  if (device != DeviceKind::kCaesar) {
    throw Error(ErrorCode::kDeviceRejected,
                "carus executes programs from its own memory; command "
                "streams are not accepted");
  }
  const std::uint64_t begin = caesar_.cycle();
  sync_caesar(caesar_.timing().dma_setup_cycles);
  for (const CommandEntry& e : stream.entries) {
    caesar_.write(e.word_offset, e.data);
    ++bus_transactions_;
  }
  caesar_.drain();
  const std::uint64_t spent = caesar_.cycle() - begin;
  sync_carus(spent);
  clock_.cycle += spent;
  return spent;
}

CarusRunResult HostFabric::run_carus_kernel(
    const std::vector<std::uint32_t>& image,
    const std::vector<std::pair<std::uint32_t, Word32>>& args,
    const CarusRunOptions& options) {
  if (image.size() * 4 > kEmemBytes) {
    throw Error(ErrorCode::kProgramTooLarge,
                std::to_string(image.size() * 4) + " bytes exceed the " +
                    std::to_string(kEmemBytes) + "-byte program memory");
  }
  for (const auto& [addr, value] : args) {
    (void)value;
    if (addr % 4 != 0 || addr >= kEmemBytes) {
      throw Error(ErrorCode::kAddressOutOfRange,
                  "argument offset " + text::hex(addr, 4));
    }
  }
  const std::uint64_t begin = clock_.cycle;
  const EventCounters before = carus_.counters();

  set_mode(DeviceKind::kCarus, true);
  write_block(DeviceKind::kCarus, kCarusEmemBase, image);
  for (const auto& [addr, value] : args) write(DeviceKind::kCarus, addr, value);
  write(DeviceKind::kCarus, kCarusBootPcAddr, options.boot_pc);
  write(DeviceKind::kCarus, kCarusCtrlAddr,
        kCtrlStart | (options.use_irq ? kCtrlIrqEnable : 0));

  const std::uint64_t started = clock_.cycle;
  const std::uint32_t interval = std::max<std::uint32_t>(1, options.poll_interval);
  bool error = false;
  for (;;) {
    if (clock_.cycle - started > options.max_cycles) {
      throw Error(ErrorCode::kTimeout,
                  "kernel still running after " +
                      std::to_string(options.max_cycles) + " cycles");
    }
    if (options.use_irq) {
      idle(1);
      if (carus_.irq() || carus_.error()) {
        const Word32 status = read(DeviceKind::kCarus, kCarusCtrlAddr);
        error = (status & kCtrlError) != 0;
        break;
      }
    } else {
      idle(interval - 1);
      const Word32 status = read(DeviceKind::kCarus, kCarusCtrlAddr);
      if ((status & kCtrlError) != 0) {
        error = true;
        break;
      }
      if ((status & kCtrlDone) != 0) break;
    }
  }
  if (error) {
    set_mode(DeviceKind::kCarus, false);
    throw Error(ErrorCode::kKernelFault, carus_.fault());
  }
  set_mode(DeviceKind::kCarus, false);

  CarusRunResult r;
  r.kernel_cycles = carus_.kernel_cycles();
  r.total_cycles = clock_.cycle - begin;
  r.events = carus_.counters() - before;
  return r;
}

// ---------------------------------------------------------------------------
// Scenario runner

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kInvalidArgument, "cannot open " + p.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint32_t as_u32(const json& v, const char* what) {
  if (v.is_number_integer()) {
    return static_cast<std::uint32_t>(v.get<std::int64_t>());
  }
  if (v.is_string()) {
    if (auto n = text::parse_int(v.get<std::string>())) {
      return static_cast<std::uint32_t>(*n);
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              std::string("scenario field '") + what + "' is not an integer");
}

std::vector<Word32> as_words(const json& v, const char* what) {
  std::vector<Word32> out;
  if (v.is_array()) {
    for (const json& e : v) out.push_back(as_u32(e, what));
  } else {
    out.push_back(as_u32(v, what));
  }
  return out;
}

DeviceKind step_device(const json& step, const std::string& fallback) {
  const std::string name = step.value("device", fallback);
  auto d = device_from_name(name);
  if (!d) {
    throw Error(ErrorCode::kInvalidArgument, "unknown device '" + name + "'");
  }
  return *d;
}

CommandStream load_stream(const json& step, const std::filesystem::path& base) {
  if (step.contains("asm")) return asm_caesar(step["asm"].get<std::string>());
  if (step.contains("entries")) return stream_from_json(step["entries"].dump());
  if (!step.contains("file")) {
    throw Error(ErrorCode::kInvalidArgument,
                "stream step needs 'asm', 'entries' or 'file'");
  }
  const auto path = base / step["file"].get<std::string>();
  const std::string body = read_file(path);
  const std::string ext = path.extension().string();
  if (ext == ".json") return stream_from_json(body);
  if (ext == ".s" || ext == ".asm") return asm_caesar(body);
  return stream_from_text(body);
}

std::vector<std::uint32_t> load_program(const json& step,
                                        const std::filesystem::path& base) {
  if (step.contains("asm")) return asm_xvnmc(step["asm"].get<std::string>());
  if (step.contains("words")) return as_words(step["words"], "words");
  if (!step.contains("file")) {
    throw Error(ErrorCode::kInvalidArgument,
                "run_kernel step needs 'asm', 'words' or 'file'");
  }
  const auto path = base / step["file"].get<std::string>();
  const std::string body = read_file(path);
  const std::string ext = path.extension().string();
  if (ext == ".s" || ext == ".asm") return asm_xvnmc(body);
  return bytes_to_words(std::vector<std::uint8_t>(body.begin(), body.end()));
}

}  // namespace

ScenarioResult run_scenario(std::string_view json_text,
                            const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("steps") || !doc["steps"].is_array()) {
    throw Error(ErrorCode::kInvalidArgument,
                "scenario must be an object with a 'steps' array");
  }
  TimingTable timing = TimingTable::preset(doc.value("timing", "table-v"));
  if (doc.contains("bootstrap_cycles")) {
    timing.bootstrap_cycles = as_u32(doc["bootstrap_cycles"], "bootstrap_cycles");
  }
  const std::string default_device = doc.value("device", "caesar");
  const std::filesystem::path base(base_dir);

  HostFabric fabric(timing);
  ScenarioResult result;
  for (const json& step : doc["steps"]) {
    ScenarioStep out;
    out.op = step.value("op", "");
    const DeviceKind dev = step_device(step, default_device);
    out.device = std::string(to_string(dev));
    const std::uint64_t t0 = fabric.cycle();

    if (out.op == "set_mode") {
      bool imc = false;
      if (step.contains("mode")) {
        const std::string m = step["mode"].get<std::string>();
        imc = m == "imc" || m == "computing" || m == "config";
        if (!imc && m != "memory") {
          throw Error(ErrorCode::kInvalidArgument, "unknown mode '" + m + "'");
        }
      } else {
        imc = step.value("imc", false);
      }
      fabric.set_mode(dev, imc);
    } else if (out.op == "write") {
      fabric.write_block(dev, as_u32(step.at("addr"), "addr"),
                         as_words(step.at("data"), "data"));
    } else if (out.op == "read") {
      const std::uint32_t addr = as_u32(step.at("addr"), "addr");
      const std::uint32_t count = step.contains("count")
                                      ? as_u32(step["count"], "count")
                                      : 1;
      for (std::uint32_t i = 0; i < count; ++i) {
        out.values.push_back(fabric.read(dev, addr + 4 * i));
      }
    } else if (out.op == "stream") {
      fabric.dma_stream(load_stream(step, base), dev);
    } else if (out.op == "load_kernel" || out.op == "run_kernel") {
      if (dev != DeviceKind::kCarus) {
        throw Error(ErrorCode::kDeviceRejected,
                    "kernels run on carus; use 'stream' for caesar");
      }
      const auto image = load_program(step, base);
      std::vector<std::pair<std::uint32_t, Word32>> args;
      if (step.contains("args")) {
        const std::uint32_t at = step.contains("args_addr")
                                     ? as_u32(step["args_addr"], "args_addr")
                                     : 0x1C0;
        const auto words = as_words(step["args"], "args");
        for (std::size_t i = 0; i < words.size(); ++i) {
          args.emplace_back(at + static_cast<std::uint32_t>(4 * i), words[i]);
        }
      }
      if (out.op == "load_kernel") {
        // Program load only; the host starts it with a CTRL write.
        if (!fabric.mode(DeviceKind::kCarus)) {
          throw Error(ErrorCode::kDeviceRejected,
                      "program memory is only writable in configuration mode");
        }
        fabric.write_block(DeviceKind::kCarus, kCarusEmemBase, image);
        for (const auto& [a, v] : args) fabric.write(DeviceKind::kCarus, a, v);
      } else {
        CarusRunOptions opts;
        if (step.contains("poll_interval")) {
          opts.poll_interval = as_u32(step["poll_interval"], "poll_interval");
        }
        opts.use_irq = step.value("irq", false);
        if (step.contains("max_cycles")) {
          opts.max_cycles = as_u32(step["max_cycles"], "max_cycles");
        }
        const CarusRunResult r = fabric.run_carus_kernel(image, args, opts);
        out.values.push_back(static_cast<Word32>(r.kernel_cycles));
      }
    } else if (out.op == "idle") {
      fabric.idle(as_u32(step.at("cycles"), "cycles"));
    } else if (out.op == "expect") {
      // Checked through the backdoor so the check itself costs no cycles.
      const std::uint32_t addr = as_u32(step.at("addr"), "addr");
      const auto want = as_words(step.at("data"), "data");
      for (std::size_t i = 0; i < want.size(); ++i) {
        const std::uint32_t a = addr + static_cast<std::uint32_t>(4 * i);
        const Word32 got = dev == DeviceKind::kCaesar
                               ? fabric.caesar().peek(caesar_word(a))
                               : fabric.carus().peek_vrf(a / 4);
        out.values.push_back(got);
        if (got != want[i] && out.ok) {
          out.ok = false;
          out.message = "at " + text::hex(a, 4) + ": expected " +
                        text::hex(want[i], 8) + ", got " + text::hex(got, 8);
        }
      }
      result.pass = result.pass && out.ok;
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown scenario op '" + out.op + "'");
    }
    out.cycles = fabric.cycle() - t0;
    result.steps.push_back(std::move(out));
  }
  result.total_cycles = fabric.cycle();
  result.caesar_events = fabric.caesar().counters();
  result.carus_events = fabric.carus().counters();
  result.bus_transactions = fabric.bus_transactions();
  return result;
}

}  // namespace nmcsim
