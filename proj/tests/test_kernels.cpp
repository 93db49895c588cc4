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

#include <random>
#include <string>
#include <vector>

#include "nmcsim/error.hpp"
#include "nmcsim/kernels.hpp"

namespace nmcsim {
namespace {

constexpr ElemWidth kWidths[] = {ElemWidth::kW8, ElemWidth::kW16, ElemWidth::kW32};

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kInvalidArgument;
}

Tensor tensor(ElemWidth w, std::vector<std::uint32_t> shape, std::vector<std::int32_t> data) {
  Tensor t = make_tensor(w, std::move(shape));
  t.data = std::move(data);
  return t;
}

KernelSpec spec(KernelName k, ElemWidth w, std::vector<std::uint32_t> shape) {
  KernelSpec s;
  s.name = k;
  s.width = w;
  s.shape = std::move(shape);
  return s;
}

TEST(Kernels, Names) {
  EXPECT_EQ(all_kernels().size(), 10u);
  for (KernelName k : all_kernels()) EXPECT_EQ(kernel_from_name(to_string(k)), k);
  EXPECT_FALSE(kernel_from_name("fft").has_value());
  EXPECT_EQ(spec(KernelName::kMatmul, ElemWidth::kW8, {10, 10, 1024}).id(),
            "matmul/w8/10x10x1024");
}

TEST(Kernels, OutputCounts) {
  EXPECT_EQ(spec(KernelName::kMatmul, ElemWidth::kW8, {8, 8, 64}).output_count(), 512u);
  EXPECT_EQ(spec(KernelName::kConv2d, ElemWidth::kW8, {8, 16, 3}).output_count(), 6u * 14u);
  EXPECT_EQ(spec(KernelName::kMaxpool, ElemWidth::kW8, {8, 16}).output_count(), 32u);
  EXPECT_EQ(spec(KernelName::kAutoencoder, ElemWidth::kW8, {16, 8, 16}).output_count(), 16u);
}

TEST(Kernels, Validation) {
  EXPECT_EQ(code_of([] { validate(spec(KernelName::kAdd, ElemWidth::kW8, {})); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { validate(spec(KernelName::kMatmul, ElemWidth::kW8, {2, 0, 3})); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { validate(spec(KernelName::kMaxpool, ElemWidth::kW8, {3, 4})); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { validate(spec(KernelName::kConv2d, ElemWidth::kW8, {2, 8, 3})); }),
            ErrorCode::kInvalidArgument);
  KernelSpec leaky = spec(KernelName::kLeakyRelu, ElemWidth::kW8, {4});
  leaky.shift = 8;
  EXPECT_EQ(code_of([&] { validate(leaky); }), ErrorCode::kInvalidArgument);
}

TEST(Kernels, InputsReproducible) {
  const KernelSpec s = spec(KernelName::kGemm, ElemWidth::kW16, {3, 4, 5});
  const auto a = make_inputs(s, 9);
  EXPECT_EQ(a, make_inputs(s, 9));
  EXPECT_NE(a, make_inputs(s, 10));
  ASSERT_EQ(a.size(), 3u);
  for (const Tensor& t : a) {
    for (std::int32_t v : t.data) {
      EXPECT_GE(v, -32768);
      EXPECT_LE(v, 32767);
    }
  }
}

TEST(Oracle, Elementwise) {
  const KernelSpec add = spec(KernelName::kAdd, ElemWidth::kW8, {3});
  const Tensor out = scalar_oracle(add, {tensor(ElemWidth::kW8, {3}, {127, -128, 5}),
                                         tensor(ElemWidth::kW8, {3}, {1, -1, 6})});
  EXPECT_EQ(out.data, (std::vector<std::int32_t>{-128, 127, 11}));

  const KernelSpec mul = spec(KernelName::kMul, ElemWidth::kW16, {2});
  EXPECT_EQ(scalar_oracle(mul, {tensor(ElemWidth::kW16, {2}, {300, -2}),
                                tensor(ElemWidth::kW16, {2}, {300, 3})})
                .data,
            (std::vector<std::int32_t>{90000 - 65536, -6}));

  const KernelSpec relu = spec(KernelName::kRelu, ElemWidth::kW8, {3});
  EXPECT_EQ(scalar_oracle(relu, {tensor(ElemWidth::kW8, {3}, {-3, 0, 9})}).data,
            (std::vector<std::int32_t>{0, 0, 9}));

  KernelSpec leaky = spec(KernelName::kLeakyRelu, ElemWidth::kW8, {4});
  leaky.shift = 2;
  EXPECT_EQ(scalar_oracle(leaky, {tensor(ElemWidth::kW8, {4}, {-8, -1, -128, 7})}).data,
            (std::vector<std::int32_t>{-2, -1, -32, 7}));
}

TEST(Oracle, MatmulAndGemm) {
  const Tensor a = tensor(ElemWidth::kW32, {2, 2}, {1, 2, 3, 4});
  const Tensor b = tensor(ElemWidth::kW32, {2, 2}, {5, 6, 7, 8});
  EXPECT_EQ(scalar_oracle(spec(KernelName::kMatmul, ElemWidth::kW32, {2, 2, 2}), {a, b}).data,
            (std::vector<std::int32_t>{19, 22, 43, 50}));
  KernelSpec g = spec(KernelName::kGemm, ElemWidth::kW32, {2, 2, 2});
  g.alpha = 2;
  g.beta = -1;
  const Tensor c = tensor(ElemWidth::kW32, {2, 2}, {1, 1, 1, 1});
  EXPECT_EQ(scalar_oracle(g, {a, b, c}).data, (std::vector<std::int32_t>{37, 43, 85, 99}));
}

TEST(Oracle, Conv2dValidRegion) {
  const Tensor x = tensor(ElemWidth::kW16, {3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const Tensor f = tensor(ElemWidth::kW16, {2, 2}, {1, 0, 0, -1});
  EXPECT_EQ(scalar_oracle(spec(KernelName::kConv2d, ElemWidth::kW16, {3, 3, 2}), {x, f}).data,
            (std::vector<std::int32_t>{-4, -4, -4, -4}));
}

TEST(Oracle, Maxpool) {
  const Tensor x = tensor(ElemWidth::kW8, {2, 4}, {1, -5, 3, 2, 0, 4, -1, -2});
  EXPECT_EQ(scalar_oracle(spec(KernelName::kMaxpool, ElemWidth::kW8, {2, 4}), {x}).data,
            (std::vector<std::int32_t>{4, 3}));
}

TEST(Oracle, Autoencoder) {
  const Tensor x = tensor(ElemWidth::kW8, {2}, {1, 2});
  const Tensor w0 = tensor(ElemWidth::kW8, {2, 2}, {1, 1, 1, -1});
  const Tensor w1 = tensor(ElemWidth::kW8, {1, 2}, {2, 1});
  EXPECT_EQ(
      scalar_oracle(spec(KernelName::kAutoencoder, ElemWidth::kW8, {2, 2, 1}), {x, w0, w1}).data,
      (std::vector<std::int32_t>{6}));
}

TEST(Verify, ReportsFirstMismatch) {
  const KernelSpec s = spec(KernelName::kAdd, ElemWidth::kW8, {3});
  const Tensor e = tensor(ElemWidth::kW8, {3}, {1, 2, 3});
  EXPECT_TRUE(verify(s, e, e).pass);
  const VerifyResult r = verify(s, tensor(ElemWidth::kW8, {3}, {1, 9, 3}), e);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.index, 1u);
  EXPECT_EQ(r.expected, 2);
  EXPECT_EQ(r.actual, 9);
  EXPECT_FALSE(r.message().empty());
  EXPECT_EQ(code_of([&] { verify(s, tensor(ElemWidth::kW8, {4}, {1, 2, 3, 4}), e); }),
            ErrorCode::kShapeMismatch);
}

TEST(Kernels, CapacityChecked) {
  EXPECT_EQ(code_of([] { gen_caesar(spec(KernelName::kAdd, ElemWidth::kW32, {5000})); }),
            ErrorCode::kDoesNotFit);
  EXPECT_EQ(code_of([] { gen_carus(spec(KernelName::kAdd, ElemWidth::kW8, {20000})); }),
            ErrorCode::kDoesNotFit);
}

TEST(Kernels, CarusProgramsFitProgramMemory) {
  for (KernelName k : all_kernels()) {
    for (ElemWidth w : kWidths) {
      std::mt19937_64 rng(1);
      const CarusKernel ck = gen_carus(random_spec(k, w, rng));
      EXPECT_LE(ck.program.size() * 4, kCarusArgBase) << to_string(k);
    }
  }
}

// Every kernel on both devices against the scalar oracle over random shapes.
class KernelProperty
    : public ::testing::TestWithParam<std::tuple<KernelName, ElemWidth, DeviceKind>> {};

TEST_P(KernelProperty, BitExactAgainstOracle) {
  const auto [k, w, dev] = GetParam();
  const TimingTable timing = TimingTable::preset("table-v");
  std::mt19937_64 rng(1000 + 37 * static_cast<unsigned>(k) + static_cast<unsigned>(w));
  for (int i = 0; i < 8; ++i) {
    const KernelSpec s = random_spec(k, w, rng);
    const KernelRun r = run_kernel(dev, s, rng(), timing);
    ASSERT_TRUE(r.check.pass) << to_string(dev) << " " << s.id() << ": " << r.check.message();
    EXPECT_GT(r.cycles, 0u);
  }
}

INSTANTIATE_TEST_SUITE_P(
    AllKernels, KernelProperty,
    ::testing::Combine(::testing::ValuesIn(all_kernels()), ::testing::ValuesIn(kWidths),
                       ::testing::Values(DeviceKind::kCaesar, DeviceKind::kCarus)),
    [](const auto& info) {
      std::string n = std::string(to_string(std::get<0>(info.param))) + "_" +
                      std::string(to_string(std::get<1>(info.param))) + "_" +
                      std::string(to_string(std::get<2>(info.param)));
      return n;
    });

TEST(Kernels, CaesarElementwiseRate) {
  const KernelRun r = run_kernel(DeviceKind::kCaesar, spec(KernelName::kAdd, ElemWidth::kW8, {8192}),
                                 1, TimingTable::preset("table-v"));
  EXPECT_TRUE(r.check.pass);
  EXPECT_NEAR(static_cast<double>(r.cycles) / 8192, 0.5, 0.01);
  EXPECT_EQ(r.program_size, 2049u);
}

TEST(Kernels, CaesarMaxpoolUsesHost) {
  const KernelRun r = run_kernel(DeviceKind::kCaesar,
                                 spec(KernelName::kMaxpool, ElemWidth::kW8, {8, 64}), 1,
                                 TimingTable::preset("table-v"));
  EXPECT_TRUE(r.check.pass);
  EXPECT_GT(r.host_ops, 0u);
}

}  // namespace
}  // namespace nmcsim
