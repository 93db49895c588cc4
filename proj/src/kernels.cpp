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

#include <algorithm>
#include <array>
#include <sstream>

#include "nmcsim/error.hpp"
#include "nmcsim/kernels.hpp"

namespace nmcsim {

namespace {

constexpr std::array<std::pair<KernelName, std::string_view>, 10> kNames = {{
    {KernelName::kXor, "xor"},
    {KernelName::kAdd, "add"},
    {KernelName::kMul, "mul"},
    {KernelName::kMatmul, "matmul"},
    {KernelName::kGemm, "gemm"},
    {KernelName::kConv2d, "conv2d"},
    {KernelName::kRelu, "relu"},
    {KernelName::kLeakyRelu, "leaky_relu"},
    {KernelName::kMaxpool, "maxpool"},
    {KernelName::kAutoencoder, "autoencoder"},
}};

bool is_elementwise(KernelName k) {
  return k == KernelName::kXor || k == KernelName::kAdd ||
         k == KernelName::kMul || k == KernelName::kRelu ||
         k == KernelName::kLeakyRelu;
}

[[noreturn]] void bad_shape(const KernelSpec& spec, const std::string& why) {
  throw Error(ErrorCode::kInvalidArgument, spec.id() + ": " + why);
}

// Two's-complement truncation to `bits`, written without the SIMD helpers.
std::int32_t wrap(std::int64_t v, unsigned bits) {
  const std::uint64_t m = bits == 64 ? ~0ull : ((1ull << bits) - 1);
  std::uint64_t u = static_cast<std::uint64_t>(v) & m;
  if (u >> (bits - 1)) u |= ~m;
  return static_cast<std::int32_t>(static_cast<std::int64_t>(u));
}

}  // namespace

std::string_view to_string(KernelName k) {
  for (const auto& [id, name] : kNames) {
    if (id == k) return name;
  }
  return "?";
}

std::optional<KernelName> kernel_from_name(std::string_view name) {
  for (const auto& [id, n] : kNames) {
    if (n == name) return id;
  }
  if (name == "leaky" || name == "leakyrelu") return KernelName::kLeakyRelu;
  if (name == "conv" || name == "conv2d") return KernelName::kConv2d;
  return std::nullopt;
}

const std::vector<KernelName>& all_kernels() {
  static const std::vector<KernelName> all = [] {
    std::vector<KernelName> v;
    for (const auto& [id, name] : kNames) v.push_back(id);
    return v;
  }();
  return all;
}

std::string KernelSpec::id() const {
  std::ostringstream ss;
  ss << to_string(name) << '/' << to_string(width) << '/';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i != 0) ss << 'x';
    ss << shape[i];
  }
  return ss.str();
}

std::uint64_t KernelSpec::output_count() const {
  switch (name) {
    case KernelName::kMatmul:
    case KernelName::kGemm:
      return std::uint64_t{shape.at(0)} * shape.at(2);
    case KernelName::kConv2d:
      return std::uint64_t{shape.at(0) - shape.at(2) + 1} *
             (shape.at(1) - shape.at(2) + 1);
    case KernelName::kMaxpool:
      return std::uint64_t{shape.at(0) / 2} * (shape.at(1) / 2);
    case KernelName::kAutoencoder:
      return shape.back();
    default:
      return shape.at(0);
  }
}

void validate(const KernelSpec& spec) {
  const auto& s = spec.shape;
  for (std::uint32_t d : s) {
    if (d == 0) bad_shape(spec, "zero-sized dimension");
  }
  if (is_elementwise(spec.name)) {
    if (s.size() != 1) bad_shape(spec, "expected shape [n]");
    if (spec.name == KernelName::kLeakyRelu &&
        (spec.shift == 0 || spec.shift >= elem_bits(spec.width))) {
      bad_shape(spec, "shift must be in [1, element bits)");
    }
    return;
  }
  switch (spec.name) {
    case KernelName::kMatmul:
    case KernelName::kGemm:
      if (s.size() != 3) bad_shape(spec, "expected shape [M, K, P]");
      return;
    case KernelName::kConv2d:
      if (s.size() != 3) bad_shape(spec, "expected shape [R, N, f]");
      if (s[2] > s[0] || s[2] > s[1]) bad_shape(spec, "filter exceeds input");
      return;
    case KernelName::kMaxpool:
      if (s.size() != 2) bad_shape(spec, "expected shape [R, N]");
      if (s[0] % 2 != 0 || s[1] % 2 != 0) {
        bad_shape(spec, "rows and columns must be even");
      }
      return;
    case KernelName::kAutoencoder:
      if (s.size() < 2) bad_shape(spec, "expected at least two layer widths");
      return;
    default:
      return;
  }
}

Tensor make_tensor(ElemWidth w, std::vector<std::uint32_t> shape) {
  Tensor t;
  t.width = w;
  std::size_t n = 1;
  for (std::uint32_t d : shape) n *= d;
  t.shape = std::move(shape);
  t.data.assign(n, 0);
  return t;
}

std::vector<Tensor> make_inputs(const KernelSpec& spec, std::uint64_t seed) {
  validate(spec);
  const auto& s = spec.shape;
  std::vector<std::vector<std::uint32_t>> shapes;
  switch (spec.name) {
    case KernelName::kXor:
    case KernelName::kAdd:
    case KernelName::kMul:
      shapes = {{s[0]}, {s[0]}};
      break;
    case KernelName::kRelu:
    case KernelName::kLeakyRelu:
      shapes = {{s[0]}};
      break;
    case KernelName::kMatmul:
      shapes = {{s[0], s[1]}, {s[1], s[2]}};
      break;
    case KernelName::kGemm:
      shapes = {{s[0], s[1]}, {s[1], s[2]}, {s[0], s[2]}};
      break;
    case KernelName::kConv2d:
      shapes = {{s[0], s[1]}, {s[2], s[2]}};
      break;
    case KernelName::kMaxpool:
      shapes = {{s[0], s[1]}};
      break;
    case KernelName::kAutoencoder:
      shapes.push_back({s[0]});
      for (std::size_t l = 0; l + 1 < s.size(); ++l) {
        shapes.push_back({s[l + 1], s[l]});
      }
      break;
  }
  std::mt19937_64 rng(seed);
  const unsigned bits = elem_bits(spec.width);
  const std::int64_t lo = -(std::int64_t{1} << (bits - 1));
  const std::int64_t hi = (std::int64_t{1} << (bits - 1)) - 1;
  std::uniform_int_distribution<std::int64_t> dist(lo, hi);
  std::vector<Tensor> out;
  for (auto& shape : shapes) {
    Tensor t = make_tensor(spec.width, shape);
    for (auto& v : t.data) v = static_cast<std::int32_t>(dist(rng));
    out.push_back(std::move(t));
  }
  return out;
}

Tensor scalar_oracle(const KernelSpec& spec, const std::vector<Tensor>& in) {
  validate(spec);
  const unsigned bits = elem_bits(spec.width);
  const auto& s = spec.shape;
  auto w = [bits](std::int64_t v) { return wrap(v, bits); };
  switch (spec.name) {
    case KernelName::kXor:
    case KernelName::kAdd:
    case KernelName::kMul: {
      Tensor y = make_tensor(spec.width, {s[0]});
      for (std::size_t i = 0; i < y.size(); ++i) {
        const std::int64_t a = in[0].data[i];
        const std::int64_t b = in[1].data[i];
        std::int64_t r = 0;
        if (spec.name == KernelName::kXor) r = a ^ b;
        if (spec.name == KernelName::kAdd) r = a + b;
        if (spec.name == KernelName::kMul) r = a * b;
        y.data[i] = w(r);
      }
      return y;
    }
    case KernelName::kRelu:
    case KernelName::kLeakyRelu: {
      Tensor y = make_tensor(spec.width, {s[0]});
      for (std::size_t i = 0; i < y.size(); ++i) {
        const std::int32_t x = in[0].data[i];
        if (x >= 0) {
          y.data[i] = x;
        } else if (spec.name == KernelName::kRelu) {
          y.data[i] = 0;
        } else {
          // Floor division by 2^shift.
          const std::int64_t d = std::int64_t{1} << spec.shift;
          y.data[i] = static_cast<std::int32_t>((x - (d - 1)) / d);
        }
      }
      return y;
    }
    case KernelName::kMatmul:
    case KernelName::kGemm: {
      const std::uint32_t m = s[0], k = s[1], p = s[2];
      Tensor y = make_tensor(spec.width, {m, p});
      for (std::uint32_t i = 0; i < m; ++i) {
        for (std::uint32_t j = 0; j < p; ++j) {
          std::int64_t acc = 0;
          for (std::uint32_t t = 0; t < k; ++t) {
            acc += std::int64_t{in[0].data[i * k + t]} * in[1].data[t * p + j];
          }
          if (spec.name == KernelName::kGemm) {
            acc = std::int64_t{spec.alpha} * w(acc) +
                  std::int64_t{spec.beta} * in[2].data[i * p + j];
          }
          y.data[i * p + j] = w(acc);
        }
      }
      return y;
    }
    case KernelName::kConv2d: {
      const std::uint32_t r = s[0], n = s[1], f = s[2];
      const std::uint32_t ro = r - f + 1, no = n - f + 1;
      Tensor y = make_tensor(spec.width, {ro, no});
      for (std::uint32_t o = 0; o < ro; ++o) {
        for (std::uint32_t c = 0; c < no; ++c) {
          std::int64_t acc = 0;
          for (std::uint32_t u = 0; u < f; ++u) {
            for (std::uint32_t v = 0; v < f; ++v) {
              acc += std::int64_t{in[1].data[u * f + v]} *
                     in[0].data[(o + u) * n + c + v];
            }
          }
          y.data[o * no + c] = w(acc);
        }
      }
      return y;
    }
    case KernelName::kMaxpool: {
      const std::uint32_t r = s[0], n = s[1];
      Tensor y = make_tensor(spec.width, {r / 2, n / 2});
      for (std::uint32_t o = 0; o < r / 2; ++o) {
        for (std::uint32_t c = 0; c < n / 2; ++c) {
          const auto& x = in[0].data;
          y.data[o * (n / 2) + c] =
              std::max({x[2 * o * n + 2 * c], x[2 * o * n + 2 * c + 1],
                        x[(2 * o + 1) * n + 2 * c],
                        x[(2 * o + 1) * n + 2 * c + 1]});
        }
      }
      return y;
    }
    case KernelName::kAutoencoder: {
      std::vector<std::int32_t> x = in[0].data;
      for (std::size_t l = 0; l + 1 < s.size(); ++l) {
        const std::uint32_t din = s[l], dout = s[l + 1];
        std::vector<std::int32_t> next(dout);
        for (std::uint32_t o = 0; o < dout; ++o) {
          std::int64_t acc = 0;
          for (std::uint32_t i = 0; i < din; ++i) {
            acc += std::int64_t{in[l + 1].data[o * din + i]} * x[i];
          }
          next[o] = std::max(0, w(acc));
        }
        x = std::move(next);
      }
      Tensor y = make_tensor(spec.width, {s.back()});
      y.data = std::move(x);
      return y;
    }
  }
  throw Error(ErrorCode::kUnsupportedKernel, spec.id());
}

std::string VerifyResult::message() const {
  if (pass) return "ok";
  return "mismatch at element " + std::to_string(index) + ": expected " +
         std::to_string(expected) + ", got " + std::to_string(actual);
}

VerifyResult verify(const KernelSpec& spec, const Tensor& actual,
                    const Tensor& expected) {
  if (actual.shape != expected.shape || actual.width != expected.width ||
      actual.data.size() != expected.data.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                spec.id() + ": result and reference differ in shape");
  }
  VerifyResult r;
  for (std::size_t i = 0; i < actual.data.size(); ++i) {
    if (actual.data[i] != expected.data[i]) {
      r.pass = false;
      r.index = i;
      r.expected = expected.data[i];
      r.actual = actual.data[i];
      break;
    }
  }
  return r;
}

KernelRun run_kernel(DeviceKind device, const KernelSpec& spec,
                     std::uint64_t seed, const TimingTable& timing) {
  validate(spec);
  const std::vector<Tensor> inputs = make_inputs(spec, seed);
  KernelRun run;
  run.expected = scalar_oracle(spec, inputs);
  HostFabric fabric(timing);
  if (device == DeviceKind::kCaesar) {
    const CaesarKernel k = gen_caesar(spec);
    for (const auto& [off, v] : k.layout(inputs)) {
      fabric.write(DeviceKind::kCaesar, off * 4, v);
    }
    fabric.set_mode(DeviceKind::kCaesar, true);
    const EventCounters before = fabric.caesar().counters();
    run.cycles = fabric.dma_stream(k.stream);
    run.events = fabric.caesar().counters() - before;
    fabric.set_mode(DeviceKind::kCaesar, false);
    run.program_size = k.stream.size();
    const CaesarDevice& dev = fabric.caesar();
    run.output = k.extract(
        [&dev](std::uint32_t off) { return dev.peek(off); }, run.host_ops);
  } else {
    const CarusKernel k = gen_carus(spec);
    for (const auto& [addr, v] : k.layout(inputs)) {
      fabric.write(DeviceKind::kCarus, addr, v);
    }
    const CarusRunResult r = fabric.run_carus_kernel(k.program, k.args);
    run.cycles = r.kernel_cycles;
    run.events = r.events;
    run.program_size = k.program.size() * 4;
    const CarusDevice& dev = fabric.carus();
    run.output =
        k.extract([&dev](std::uint32_t addr) { return dev.peek_vrf(addr / 4); });
  }
  run.check = verify(spec, run.output, run.expected);
  return run;
}

KernelSpec random_spec(KernelName name, ElemWidth w, std::mt19937_64& rng) {
  auto pick = [&rng](std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
  };
  KernelSpec spec;
  spec.name = name;
  spec.width = w;
  const unsigned bits = elem_bits(w);
  switch (name) {
    case KernelName::kXor:
    case KernelName::kAdd:
    case KernelName::kMul:
    case KernelName::kRelu:
      spec.shape = {pick(1, 600)};
      break;
    case KernelName::kLeakyRelu:
      spec.shape = {pick(1, 600)};
      spec.shift = pick(1, std::min(bits - 1, 7u));
      break;
    case KernelName::kMatmul:
      spec.shape = {pick(1, 6), pick(1, 6), pick(1, 96)};
      break;
    case KernelName::kGemm:
      spec.shape = {pick(1, 6), pick(1, 6), pick(1, 96)};
      spec.alpha = static_cast<std::int32_t>(pick(0, 8)) - 4;
      spec.beta = static_cast<std::int32_t>(pick(0, 8)) - 4;
      break;
    case KernelName::kConv2d: {
      const std::uint32_t f = pick(1, 4);
      spec.shape = {pick(f, 7), pick(f, 48), f};
      break;
    }
    case KernelName::kMaxpool:
      spec.shape = {2 * pick(1, 4), 2 * pick(1, 24)};
      break;
    case KernelName::kAutoencoder: {
      const std::uint32_t layers = pick(1, 4);
      const std::uint32_t cap = std::min(24u, 128 / elem_bytes(w));
      for (std::uint32_t l = 0; l <= layers; ++l) spec.shape.push_back(pick(1, cap));
      break;
    }
  }
  return spec;
}

}  // namespace nmcsim
