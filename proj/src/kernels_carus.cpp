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

// Kernel programs for NM-Carus. Programs are shape-independent per element
// width: shapes, base indices and strides arrive as argument words in eMEM.
// Operands live in logical vectors (128-byte units) addressed through
// indirect instructions; units 232..255 (v29..v31) are scratch.

#include <algorithm>

#include "nmcsim/carus.hpp"
#include "nmcsim/error.hpp"
#include "nmcsim/kernels.hpp"
#include "nmcsim/xvnmc_asm.hpp"

namespace nmcsim {

namespace {

constexpr std::uint32_t kUnitBytes = 128;
constexpr std::uint32_t kUserUnits = 232;
constexpr std::uint32_t kV29 = 232;
constexpr std::uint32_t kV30 = 240;
constexpr std::uint32_t kV31 = 248;
constexpr std::uint32_t kChunkUnits = kVectorRegisterBytes / kUnitBytes;

class UnitAlloc {
 public:
  explicit UnitAlloc(const KernelSpec& spec) : id_(spec.id()) {}

  std::uint32_t take(std::uint32_t units, const char* what) {
    if (units > kUserUnits - next_) {
      throw Error(ErrorCode::kDoesNotFit,
                  id_ + ": " + what + " needs " + std::to_string(units) +
                      " vector units, " + std::to_string(kUserUnits - next_) +
                      " left");
    }
    const std::uint32_t base = next_;
    next_ += units;
    return base;
  }
  std::uint32_t used() const { return next_; }

 private:
  std::string id_;
  std::uint32_t next_ = 0;
};

std::uint32_t units_for(std::uint32_t elems, ElemWidth w) {
  return (elems * elem_bytes(w) + kUnitBytes - 1) / kUnitBytes;
}

[[noreturn]] void no_fit(const KernelSpec& spec, const std::string& why) {
  throw Error(ErrorCode::kDoesNotFit, spec.id() + ": " + why);
}

void require_vlmax(const KernelSpec& spec, std::uint32_t elems) {
  if (elems > vlmax(spec.width)) {
    no_fit(spec, "rows longer than " + std::to_string(vlmax(spec.width)) +
                     " elements do not fit one vector");
  }
}

// n elements at VRF byte offset `byte`.
void pack(WordWrites& out, std::uint32_t byte, const std::int32_t* data,
          std::uint32_t n, ElemWidth w) {
  const unsigned epw = elements_per_word(w);
  for (std::uint32_t j = 0; j * epw < n; ++j) {
    Word32 word = 0;
    for (unsigned lane = 0; lane < epw && j * epw + lane < n; ++lane) {
      word = with_lane(word, lane, static_cast<Word32>(data[j * epw + lane]), w);
    }
    out.emplace_back(byte + 4 * j, word);
  }
}

void unpack(const WordReader& rd, std::uint32_t byte, std::int32_t* out,
            std::uint32_t n, ElemWidth w) {
  const unsigned epw = elements_per_word(w);
  for (std::uint32_t i = 0; i < n; ++i) {
    out[i] = lane_signed(rd(byte + 4 * (i / epw)), i % epw, w);
  }
}

std::string substitute(std::string text, ElemWidth w) {
  const std::string e = "e" + std::to_string(elem_bits(w));
  for (std::size_t pos; (pos = text.find("{E}")) != std::string::npos;) {
    text.replace(pos, 3, e);
  }
  return text;
}

constexpr std::string_view kTerminate = R"(
    lui  x13, 0x8
    sw   x0, 0(x13)
)";

CarusKernel assemble(CarusKernel k, const std::string& body, ElemWidth w,
                     const std::vector<Word32>& args, std::uint32_t units) {
  k.source = substitute(body, w) + std::string(kTerminate);
  k.program = asm_xvnmc(k.source, kCarusArgBase);
  for (std::size_t i = 0; i < args.size(); ++i) {
    k.args.emplace_back(kCarusArgBase + 4 * static_cast<std::uint32_t>(i), args[i]);
  }
  k.units_used = units;
  return k;
}

std::uint32_t idx(std::uint32_t vd, std::uint32_t vs2 = 0, std::uint32_t vs1 = 0) {
  return vd | (vs2 << 8) | (vs1 << 16);
}

// Strip-mined over 1 KiB chunks; one indirect instruction per chunk.
CarusKernel gen_elementwise(const KernelSpec& spec) {
  const ElemWidth w = spec.width;
  const std::uint32_t n = spec.shape[0];
  const std::uint32_t chunks =
      (n * elem_bytes(w) + kVectorRegisterBytes - 1) / kVectorRegisterBytes;
  UnitAlloc alloc(spec);
  const bool binary = spec.name == KernelName::kXor ||
                      spec.name == KernelName::kAdd ||
                      spec.name == KernelName::kMul;
  const std::uint32_t a = alloc.take(chunks * kChunkUnits, "x");
  const std::uint32_t b = binary ? alloc.take(chunks * kChunkUnits, "b") : 0;
  const std::uint32_t c = binary ? alloc.take(chunks * kChunkUnits, "result") : a;

  std::string body;
  std::vector<Word32> args;
  if (binary) {
    const char* op = spec.name == KernelName::kXor   ? "vxorr"
                     : spec.name == KernelName::kAdd ? "vaddr"
                                                     : "vmulr";
    body = R"(
    lw   x1, 0x1C0(x0)      # elements left
    lw   x2, 0x1C4(x0)      # result | a << 8 | b << 16
    lw   x3, 0x1C8(x0)      # per-chunk index step
loop:
    vsetvli x4, x1, {E}
    xvnmc.)" + std::string(op) + R"(.vv x2
    sub  x1, x1, x4
    add  x2, x2, x3
    bnez x1, loop
)";
    args = {n, idx(c, a, b), idx(kChunkUnits, kChunkUnits, kChunkUnits)};
  } else if (spec.name == KernelName::kRelu) {
    body = R"(
    lw   x1, 0x1C0(x0)      # elements left
    lw   x2, 0x1C4(x0)      # x | x << 8
    lw   x3, 0x1C8(x0)      # per-chunk index step
loop:
    vsetvli x4, x1, {E}
    xvnmc.vmaxr.vx x2, x0
    sub  x1, x1, x4
    add  x2, x2, x3
    bnez x1, loop
)";
    args = {n, idx(a, a), idx(kChunkUnits, kChunkUnits)};
  } else {
    body = R"(
    lw   x1, 0x1C0(x0)      # elements left
    lw   x2, 0x1C4(x0)      # x | x << 8 | t << 16
    lw   x3, 0x1C8(x0)      # per-chunk step for x2
    lw   x5, 0x1CC(x0)      # shift
    lw   x6, 0x1D0(x0)      # t | x << 8
    lw   x7, 0x1D4(x0)      # per-chunk step for x6
loop:
    vsetvli x4, x1, {E}
    xvnmc.vsrar.vx x6, x5
    xvnmc.vmaxr.vv x2
    sub  x1, x1, x4
    add  x2, x2, x3
    add  x6, x6, x7
    bnez x1, loop
)";
    args = {n,        idx(a, a, kV31), idx(kChunkUnits, kChunkUnits),
            spec.shift, idx(kV31, a),  idx(0, kChunkUnits)};
  }

  CarusKernel k;
  k.layout = [=](const std::vector<Tensor>& in) {
    WordWrites out;
    pack(out, a * kUnitBytes, in[0].data.data(), n, w);
    if (binary) pack(out, b * kUnitBytes, in[1].data.data(), n, w);
    return out;
  };
  k.extract = [=](const WordReader& rd) {
    Tensor t = make_tensor(w, {n});
    unpack(rd, c * kUnitBytes, t.data.data(), n, w);
    return t;
  };
  return assemble(std::move(k), body, w, args, alloc.used());
}

// Row-wise outer-product form: C[i,:] = sum_k A[i,k] * B[k,:]. A sits in v31
// and each A element is moved to a scalar register with emvx.
constexpr std::string_view kMatmulBody = R"(
    lw   x1, 0x1C0(x0)      # M
    lw   x2, 0x1C4(x0)      # K
    lw   x3, 0x1C8(x0)      # P
    lw   x4, 0x1CC(x0)      # C row | B row << 8
    lw   x5, 0x1D0(x0)      # B row step
    lw   x6, 0x1D4(x0)      # C row step
    lw   x10, 0x1D8(x0)
    lw   x13, 0x1DC(x0)
    li   x12, -1
    li   x7, 0              # flat index into A
row:
    mv   x8, x4
    vsetvli x0, x12, {E}
    xvnmc.emvx x11, v31, x7
    vsetvli x0, x3, {E}
    xvnmc.vmulr.vx x8, x11
    addi x7, x7, 1
    li   x9, 1
k:
    bge  x9, x2, kdone
    add  x8, x8, x5
    vsetvli x0, x12, {E}
    xvnmc.emvx x11, v31, x7
    vsetvli x0, x3, {E}
    xvnmc.vmaccr.vx x8, x11
    addi x7, x7, 1
    addi x9, x9, 1
    j    k
kdone:
)";

constexpr std::string_view kGemmEpilogue = R"(
    lw   x14, 0x1E0(x0)     # alpha
    xvnmc.vmulr.vx x10, x14
    lw   x14, 0x1E4(x0)     # beta
    xvnmc.vmaccr.vx x13, x14
    lw   x14, 0x1E8(x0)
    add  x10, x10, x14
    add  x13, x13, x14
)";

constexpr std::string_view kMatmulTail = R"(
    add  x4, x4, x6
    addi x1, x1, -1
    bnez x1, row
)";

CarusKernel gen_matmul(const KernelSpec& spec) {
  const ElemWidth w = spec.width;
  const std::uint32_t m = spec.shape[0], kk = spec.shape[1], p = spec.shape[2];
  const bool gemm = spec.name == KernelName::kGemm;
  require_vlmax(spec, p);
  if (m * kk * elem_bytes(w) > kVectorRegisterBytes) {
    no_fit(spec, "A does not fit one vector register");
  }
  const std::uint32_t rs = units_for(p, w);
  UnitAlloc alloc(spec);
  const std::uint32_t b = alloc.take(kk * rs, "B");
  const std::uint32_t d = alloc.take(m * rs, "result");
  const std::uint32_t c = gemm ? alloc.take(m * rs, "C") : 0;

  std::string body = std::string(kMatmulBody);
  if (gemm) body += kGemmEpilogue;
  body += kMatmulTail;
  std::vector<Word32> args = {m,      kk, p, idx(d, b), idx(0, rs), idx(rs),
                              idx(d, d), idx(d, c)};
  if (gemm) {
    args.push_back(static_cast<Word32>(spec.alpha));
    args.push_back(static_cast<Word32>(spec.beta));
    args.push_back(idx(rs, rs));
  }

  CarusKernel k;
  k.layout = [=](const std::vector<Tensor>& in) {
    WordWrites out;
    pack(out, kV31 * kUnitBytes, in[0].data.data(), m * kk, w);
    for (std::uint32_t t = 0; t < kk; ++t) {
      pack(out, (b + t * rs) * kUnitBytes, in[1].data.data() + t * p, p, w);
    }
    if (gemm) {
      for (std::uint32_t i = 0; i < m; ++i) {
        pack(out, (c + i * rs) * kUnitBytes, in[2].data.data() + i * p, p, w);
      }
    }
    return out;
  };
  k.extract = [=](const WordReader& rd) {
    Tensor t = make_tensor(w, {m, p});
    for (std::uint32_t i = 0; i < m; ++i) {
      unpack(rd, (d + i * rs) * kUnitBytes, t.data.data() + i * p, p, w);
    }
    return t;
  };
  return assemble(std::move(k), body, w, args, alloc.used());
}

// Every input row r gets f slots: slot 0 holds the row, slot v the row slid
// down by v. Output row o is then a sum of f*f scaled slots, consecutive in
// memory starting at slot (o, 0).
CarusKernel gen_conv2d(const KernelSpec& spec) {
  const ElemWidth w = spec.width;
  const std::uint32_t r = spec.shape[0], n = spec.shape[1], f = spec.shape[2];
  const std::uint32_t ro = r - f + 1, no = n - f + 1;
  require_vlmax(spec, n);
  if (f * f * elem_bytes(w) > kVectorRegisterBytes) {
    no_fit(spec, "filter does not fit one vector register");
  }
  const std::uint32_t rs = units_for(n, w);
  UnitAlloc alloc(spec);
  const std::uint32_t slots = alloc.take(r * f * rs, "input slots");
  const std::uint32_t y = alloc.take(ro * rs, "result");

  const std::string body = R"(
    lw   x1, 0x1C0(x0)      # input rows
    lw   x2, 0x1C4(x0)      # shifted copies per row
    lw   x3, 0x1C8(x0)      # N
    lw   x4, 0x1CC(x0)      # slot(0,1) | slot(0,0) << 8
    lw   x5, 0x1D0(x0)      # slot step
    lw   x6, 0x1D4(x0)      # row group step
    vsetvli x0, x3, {E}
    beqz x2, conv
prow:
    mv   x8, x4
    li   x9, 1
pslot:
    xvnmc.vslidedownr.vx x8, x9
    add  x8, x8, x5
    addi x9, x9, 1
    ble  x9, x2, pslot
    add  x4, x4, x6
    addi x1, x1, -1
    bnez x1, prow
conv:
    lw   x1, 0x1D8(x0)      # output rows
    lw   x2, 0x1DC(x0)      # taps
    lw   x4, 0x1E0(x0)      # Y row | slot(0,0) << 8
    lw   x5, 0x1E4(x0)      # tap step
    lw   x6, 0x1E8(x0)      # output row step
    li   x12, -1
orow:
    mv   x8, x4
    li   x9, 0
    vsetvli x0, x3, {E}
    xvnmc.vmvr.vi x8, 0
tap:
    vsetvli x0, x12, {E}
    xvnmc.emvx x11, v31, x9
    vsetvli x0, x3, {E}
    xvnmc.vmaccr.vx x8, x11
    add  x8, x8, x5
    addi x9, x9, 1
    blt  x9, x2, tap
    add  x4, x4, x6
    addi x1, x1, -1
    bnez x1, orow
)";
  const std::vector<Word32> args = {
      r,          f - 1,          n,    idx(slots + rs, slots),
      idx(rs),    idx(f * rs, f * rs), ro, f * f,
      idx(y, slots), idx(0, rs),  idx(rs, f * rs)};

  CarusKernel k;
  k.layout = [=](const std::vector<Tensor>& in) {
    WordWrites out;
    for (std::uint32_t i = 0; i < r; ++i) {
      pack(out, (slots + i * f * rs) * kUnitBytes, in[0].data.data() + i * n, n, w);
    }
    pack(out, kV31 * kUnitBytes, in[1].data.data(), f * f, w);
    return out;
  };
  k.extract = [=](const WordReader& rd) {
    Tensor t = make_tensor(w, {ro, no});
    for (std::uint32_t o = 0; o < ro; ++o) {
      unpack(rd, (y + o * rs) * kUnitBytes, t.data.data() + o * no, no, w);
    }
    return t;
  };
  return assemble(std::move(k), body, w, args, alloc.used());
}

// Vertical max of a row pair into v30, then the horizontal pair max against a
// copy slid down by one. Even elements are compacted into v29 with emvx/emvv
// and copied to the output row.
CarusKernel gen_maxpool(const KernelSpec& spec) {
  const ElemWidth w = spec.width;
  const std::uint32_t r = spec.shape[0], n = spec.shape[1];
  require_vlmax(spec, n);
  const std::uint32_t rs = units_for(n, w);
  const std::uint32_t rso = units_for(n / 2, w);
  UnitAlloc alloc(spec);
  const std::uint32_t x = alloc.take(r * rs, "input");
  const std::uint32_t y = alloc.take((r / 2) * rso, "result");

  const std::string body = R"(
    lw   x1, 0x1C0(x0)      # output rows
    lw   x2, 0x1C4(x0)      # N
    lw   x3, 0x1C8(x0)      # N / 2
    lw   x4, 0x1CC(x0)      # v30 | even row << 8 | odd row << 16
    lw   x5, 0x1D0(x0)      # row pair step
    lw   x6, 0x1D4(x0)      # v31 | v30 << 8
    lw   x7, 0x1D8(x0)      # v30 | v30 << 8 | v31 << 16
    lw   x10, 0x1DC(x0)     # output row | v29 << 16
    lw   x14, 0x1E0(x0)     # output row step
    li   x9, 1
row:
    vsetvli x0, x2, {E}
    xvnmc.vmaxr.vv x4
    xvnmc.vslidedownr.vx x6, x9
    xvnmc.vmaxr.vv x7
    li   x12, 0
    li   x13, 0
col:
    xvnmc.emvx x11, v30, x13
    xvnmc.emvv v29, x11, x12
    addi x12, x12, 1
    addi x13, x13, 2
    blt  x12, x3, col
    vsetvli x0, x3, {E}
    xvnmc.vmvr.vv x10
    add  x4, x4, x5
    add  x10, x10, x14
    addi x1, x1, -1
    bnez x1, row
)";
  const std::vector<Word32> args = {r / 2,
                                    n,
                                    n / 2,
                                    idx(kV30, x, x + rs),
                                    idx(0, 2 * rs, 2 * rs),
                                    idx(kV31, kV30),
                                    idx(kV30, kV30, kV31),
                                    idx(y, 0, kV29),
                                    idx(rso)};
  CarusKernel k;
  k.layout = [=](const std::vector<Tensor>& in) {
    WordWrites out;
    for (std::uint32_t i = 0; i < r; ++i) {
      pack(out, (x + i * rs) * kUnitBytes, in[0].data.data() + i * n, n, w);
    }
    return out;
  };
  k.extract = [=](const WordReader& rd) {
    Tensor t = make_tensor(w, {r / 2, n / 2});
    for (std::uint32_t o = 0; o < r / 2; ++o) {
      unpack(rd, (y + o * rso) * kUnitBytes, t.data.data() + o * (n / 2), n / 2, w);
    }
    return t;
  };
  return assemble(std::move(k), body, w, args, alloc.used());
}

// Activations stay in v30. Each layer accumulates the transposed weight rows
// scaled by the activations into v31, clamps at zero and copies back to v30.
CarusKernel gen_autoencoder(const KernelSpec& spec) {
  const ElemWidth w = spec.width;
  const auto dims = spec.shape;
  const std::size_t layers = dims.size() - 1;
  if (layers > 15) no_fit(spec, "at most 15 layers fit the argument block");
  for (std::size_t l = 0; l < dims.size(); ++l) {
    if (l > 0 && dims[l] * elem_bytes(w) > kUnitBytes) {
      no_fit(spec, "layer outputs are limited to one 128-byte unit");
    }
    if (dims[l] > 255 || dims[l] > vlmax(w)) no_fit(spec, "layer too wide");
  }
  UnitAlloc alloc(spec);
  std::vector<std::uint32_t> wt;
  std::vector<Word32> args = {static_cast<Word32>(layers)};
  for (std::size_t l = 0; l < layers; ++l) {
    wt.push_back(alloc.take(dims[l], "weights"));
    args.push_back(dims[l] | (dims[l + 1] << 8) | (wt.back() << 16));
  }

  const std::string body = R"(
    lw   x1, 0x1C0(x0)      # layers
    li   x2, 0x1C4          # layer descriptors: d_in | d_out << 8 | W << 16
    li   x12, -1
layer:
    lw   x3, 0(x2)
    andi x4, x3, 255
    srli x5, x3, 8
    andi x5, x5, 255
    srli x6, x3, 16
    slli x6, x6, 8
    ori  x8, x6, 248
    li   x7, 0
    vsetvli x0, x12, {E}
    xvnmc.emvx x11, v30, x7
    vsetvli x0, x5, {E}
    xvnmc.vmulr.vx x8, x11
    li   x9, 1
k:
    bge  x9, x4, kdone
    addi x7, x7, 1
    addi x8, x8, 256
    addi x9, x9, 1
    vsetvli x0, x12, {E}
    xvnmc.emvx x11, v30, x7
    vsetvli x0, x5, {E}
    xvnmc.vmaccr.vx x8, x11
    j    k
kdone:
    li   x10, 0xF8F8
    xvnmc.vmaxr.vx x10, x0
    li   x10, 0xF800F0
    xvnmc.vmvr.vv x10
    addi x2, x2, 4
    addi x1, x1, -1
    bnez x1, layer
)";
  CarusKernel k;
  k.layout = [=](const std::vector<Tensor>& in) {
    WordWrites out;
    pack(out, kV30 * kUnitBytes, in[0].data.data(), dims[0], w);
    std::vector<std::int32_t> row;
    for (std::size_t l = 0; l < layers; ++l) {
      const std::uint32_t din = dims[l], dout = dims[l + 1];
      row.resize(dout);
      for (std::uint32_t i = 0; i < din; ++i) {
        for (std::uint32_t o = 0; o < dout; ++o) row[o] = in[l + 1].data[o * din + i];
        pack(out, (wt[l] + i) * kUnitBytes, row.data(), dout, w);
      }
    }
    return out;
  };
  k.extract = [=](const WordReader& rd) {
    Tensor t = make_tensor(w, {dims.back()});
    unpack(rd, kV30 * kUnitBytes, t.data.data(), dims.back(), w);
    return t;
  };
  return assemble(std::move(k), body, w, args, alloc.used());
}

}  // namespace

CarusKernel gen_carus(const KernelSpec& spec) {
  validate(spec);
  switch (spec.name) {
    case KernelName::kXor:
    case KernelName::kAdd:
    case KernelName::kMul:
    case KernelName::kRelu:
    case KernelName::kLeakyRelu:
      return gen_elementwise(spec);
    case KernelName::kMatmul:
    case KernelName::kGemm:
      return gen_matmul(spec);
    case KernelName::kConv2d:
      return gen_conv2d(spec);
    case KernelName::kMaxpool:
      return gen_maxpool(spec);
    case KernelName::kAutoencoder:
      return gen_autoencoder(spec);
  }
  throw Error(ErrorCode::kUnsupportedKernel, spec.id());
}

}  // namespace nmcsim
