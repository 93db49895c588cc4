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

#ifndef NMCSIM_KERNELS_HPP_
#define NMCSIM_KERNELS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nmcsim/caesar_asm.hpp"
#include "nmcsim/events.hpp"
#include "nmcsim/fabric.hpp"
#include "nmcsim/simd.hpp"
#include "nmcsim/timing.hpp"

namespace nmcsim {

enum class KernelName : std::uint8_t {
  kXor,
  kAdd,
  kMul,
  kMatmul,
  kGemm,
  kConv2d,
  kRelu,
  kLeakyRelu,
  kMaxpool,
  kAutoencoder,
};

std::string_view to_string(KernelName k);
std::optional<KernelName> kernel_from_name(std::string_view name);
const std::vector<KernelName>& all_kernels();

// Shapes, by kernel:
//   xor/add/mul/relu/leaky_relu  [n]
//   matmul/gemm                  [M, K, P]   A[M,K] * B[K,P]
//   conv2d                       [R, N, f]   X[R,N] (*) F[f,f], valid padding
//   maxpool                      [R, N]      2x2 window, stride 2
//   autoencoder                  [d0, d1, ..., dL]  layer widths
struct KernelSpec {
  KernelName name = KernelName::kAdd;
  ElemWidth width = ElemWidth::kW8;
  std::vector<std::uint32_t> shape;
  std::int32_t alpha = 1;  // gemm
  std::int32_t beta = 1;   // gemm
  std::uint32_t shift = 1;  // leaky_relu negative slope 2^-shift

  // e.g. "matmul/w8/10x10x1024"
  std::string id() const;
  std::uint64_t output_count() const;
};

// Throws kInvalidArgument for malformed shapes.
void validate(const KernelSpec& spec);

// Dense row-major tensor of signed elements, each within the element width.
struct Tensor {
  ElemWidth width = ElemWidth::kW8;
  std::vector<std::uint32_t> shape;
  std::vector<std::int32_t> data;

  std::size_t size() const { return data.size(); }
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

Tensor make_tensor(ElemWidth w, std::vector<std::uint32_t> shape);

// Uniform random inputs over the full element range, reproducible per seed.
std::vector<Tensor> make_inputs(const KernelSpec& spec, std::uint64_t seed);

// Plain scalar reference, independent of the packed-SIMD helpers.
Tensor scalar_oracle(const KernelSpec& spec, const std::vector<Tensor>& inputs);

struct VerifyResult {
  bool pass = true;
  std::size_t index = 0;
  std::int32_t expected = 0;
  std::int32_t actual = 0;

  std::string message() const;
};

// Throws kShapeMismatch if the tensors disagree in shape or width.
VerifyResult verify(const KernelSpec& spec, const Tensor& actual,
                    const Tensor& expected);

using WordReader = std::function<Word32(std::uint32_t)>;
using WordWrites = std::vector<std::pair<std::uint32_t, Word32>>;

struct CaesarKernel {
  CommandStream stream;
  // Memory-mode word writes (word offset, value) that place the operands.
  std::function<WordWrites(const std::vector<Tensor>&)> layout;
  // Reads the result back by word offset; counts host-side operations.
  std::function<Tensor(const WordReader&, std::uint64_t& host_ops)> extract;
  std::uint32_t bank_words[2] = {0, 0};
};

// Throws kDoesNotFit when operands and temporaries exceed a bank, and
// kUnsupportedKernel for kernels without a mapping.
CaesarKernel gen_caesar(const KernelSpec& spec);

struct CarusKernel {
  std::string source;
  std::vector<std::uint32_t> program;
  // eMEM argument words (byte offset, value).
  WordWrites args;
  // Memory-mode VRF writes (byte offset, value).
  std::function<WordWrites(const std::vector<Tensor>&)> layout;
  // Reads the result back by VRF byte offset.
  std::function<Tensor(const WordReader&)> extract;
  std::uint32_t units_used = 0;
};

CarusKernel gen_carus(const KernelSpec& spec);

// Base of the argument block in eMEM.
inline constexpr std::uint32_t kCarusArgBase = 0x1C0;

struct KernelRun {
  Tensor output;
  Tensor expected;
  VerifyResult check;
  // Caesar: DMA setup plus stream until the last write-back.
  // Carus: start write until done.
  std::uint64_t cycles = 0;
  std::uint64_t host_ops = 0;
  std::uint64_t program_size = 0;  // stream entries or program bytes
  EventCounters events;
};

KernelRun run_kernel(DeviceKind device, const KernelSpec& spec,
                     std::uint64_t seed, const TimingTable& timing);

// Random shape that fits both devices, for property tests.
KernelSpec random_spec(KernelName name, ElemWidth w, std::mt19937_64& rng);

}  // namespace nmcsim

#endif  // NMCSIM_KERNELS_HPP_
