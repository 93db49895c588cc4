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

// Kernel mappings for NM-Caesar. Every kernel is a host-side command stream
// over operands placed so that the two sources of each instruction sit in
// different banks whenever the algorithm allows it.

#include <algorithm>

#include "nmcsim/caesar.hpp"
#include "nmcsim/error.hpp"
#include "nmcsim/kernels.hpp"

namespace nmcsim {

namespace {

using Op = CaesarOpcode;

struct Region {
  std::uint32_t base = 0;
  std::uint32_t words = 0;

  std::uint32_t at(std::uint32_t i) const { return base + i; }
};

class BankAlloc {
 public:
  explicit BankAlloc(const KernelSpec& spec) : id_(spec.id()) {}

  Region take(unsigned bank, std::uint32_t words, const char* what) {
    const std::uint32_t end = (bank + 1) * kCaesarBankWords;
    if (words > end - next_[bank]) {
      throw Error(ErrorCode::kDoesNotFit,
                  id_ + ": " + what + " needs " + std::to_string(words) +
                      " words, bank " + std::to_string(bank) + " has " +
                      std::to_string(end - next_[bank]) + " left");
    }
    Region r{next_[bank], words};
    next_[bank] += words;
    return r;
  }

  std::uint32_t used(unsigned bank) const {
    return next_[bank] - bank * kCaesarBankWords;
  }

 private:
  std::string id_;
  std::uint32_t next_[2] = {0, kCaesarBankWords};
};

struct Emitter {
  CommandStream s;

  void op(Op o, std::uint32_t dest, std::uint32_t a, std::uint32_t b) {
    s.push(CaesarInstr{o, static_cast<std::uint16_t>(a),
                       static_cast<std::uint16_t>(b),
                       static_cast<std::uint16_t>(dest)});
  }
  void width(ElemWidth w) { s.push(caesar_csrw(w)); }
};

std::uint32_t words_for(std::uint32_t elems, ElemWidth w) {
  const unsigned epw = elements_per_word(w);
  return (elems + epw - 1) / epw;
}

// Packs n elements into consecutive words starting at `base`.
void pack(WordWrites& out, std::uint32_t base, const std::int32_t* data,
          std::uint32_t n, ElemWidth w) {
  const unsigned epw = elements_per_word(w);
  for (std::uint32_t j = 0; j < words_for(n, w); ++j) {
    Word32 word = 0;
    for (unsigned lane = 0; lane < epw && j * epw + lane < n; ++lane) {
      word = with_lane(word, lane, static_cast<Word32>(data[j * epw + lane]), w);
    }
    out.emplace_back(base + j, word);
  }
}

void unpack(const WordReader& rd, std::uint32_t base, std::int32_t* out,
            std::uint32_t n, ElemWidth w) {
  const unsigned epw = elements_per_word(w);
  for (std::uint32_t i = 0; i < n; ++i) {
    out[i] = lane_signed(rd(base + i / epw), i % epw, w);
  }
}

// Accumulating chain over (a, b) word pairs, stored to `dest`.
void mac_chain(Emitter& em, std::uint32_t dest,
               const std::vector<std::pair<std::uint32_t, std::uint32_t>>& terms) {
  if (terms.size() == 1) {
    em.op(Op::kMul, dest, terms[0].first, terms[0].second);
    return;
  }
  em.op(Op::kMacInit, 0, terms[0].first, terms[0].second);
  for (std::size_t t = 1; t + 1 < terms.size(); ++t) {
    em.op(Op::kMac, 0, terms[t].first, terms[t].second);
  }
  em.op(Op::kMacStore, dest, terms.back().first, terms.back().second);
}

CaesarKernel finish(CaesarKernel k, const BankAlloc& alloc, Emitter& em) {
  k.stream = std::move(em.s);
  k.bank_words[0] = alloc.used(0);
  k.bank_words[1] = alloc.used(1);
  return k;
}

CaesarKernel gen_binary(const KernelSpec& spec) {
  const ElemWidth w = spec.width;
  const std::uint32_t n = spec.shape[0];
  const std::uint32_t words = words_for(n, w);
  BankAlloc alloc(spec);
  const Region a = alloc.take(0, words, "a");
  const Region c = alloc.take(0, words, "result");
  const Region b = alloc.take(1, words, "b");
  const Op op = spec.name == KernelName::kXor   ? Op::kXor
                : spec.name == KernelName::kAdd ? Op::kAdd
                                                : Op::kMul;
  Emitter em;
  em.width(w);
  for (std::uint32_t j = 0; j < words; ++j) em.op(op, c.at(j), a.at(j), b.at(j));

  CaesarKernel k;
  k.layout = [=](const std::vector<Tensor>& in) {
    WordWrites out;
    pack(out, a.base, in[0].data.data(), n, w);
    pack(out, b.base, in[1].data.data(), n, w);
    return out;
  };
  k.extract = [=](const WordReader& rd, std::uint64_t&) {
    Tensor t = make_tensor(w, {n});
    unpack(rd, c.base, t.data.data(), n, w);
    return t;
  };
  return finish(std::move(k), alloc, em);
}

CaesarKernel gen_relu(const KernelSpec& spec) {
  const ElemWidth w = spec.width;
  const std::uint32_t n = spec.shape[0];
  const std::uint32_t words = words_for(n, w);
  BankAlloc alloc(spec);
  const Region x = alloc.take(1, words, "x");
  const Region zero = alloc.take(0, 1, "zero");
  Emitter em;
  em.width(w);
  for (std::uint32_t j = 0; j < words; ++j) {
    em.op(Op::kMax, x.at(j), x.at(j), zero.base);
  }
  CaesarKernel k;
  k.layout = [=](const std::vector<Tensor>& in) {
    WordWrites out;
    pack(out, x.base, in[0].data.data(), n, w);
    out.emplace_back(zero.base, 0);
    return out;
  };
  k.extract = [=](const WordReader& rd, std::uint64_t&) {
    Tensor t = make_tensor(w, {n});
    unpack(rd, x.base, t.data.data(), n, w);
    return t;
  };
  return finish(std::move(k), alloc, em);
}

// max(x, x >> s). There is no arithmetic shift, so the shifted value is
// sign-extended by hand: v = x >>> s, then (v ^ k) - k with k = 2^(bits-1-s).
CaesarKernel gen_leaky(const KernelSpec& spec) {
  const ElemWidth w = spec.width;
  const std::uint32_t n = spec.shape[0];
  const std::uint32_t words = words_for(n, w);
  BankAlloc alloc(spec);
  const Region x = alloc.take(1, words, "x");
  const Region t = alloc.take(1, words, "temporary");
  const Region v = alloc.take(0, words, "temporary");
  const Region sh = alloc.take(0, 1, "shift");
  const Region k0 = alloc.take(0, 1, "sign bit");
  const Region k1 = alloc.take(1, 1, "sign bit");
  const Word32 shift_word = splat(spec.shift, w);
  const Word32 k_word = splat(std::int64_t{1} << (elem_bits(w) - 1 - spec.shift), w);

  Emitter em;
  em.width(w);
  for (std::uint32_t j = 0; j < words; ++j) em.op(Op::kSlr, v.at(j), x.at(j), sh.base);
  for (std::uint32_t j = 0; j < words; ++j) em.op(Op::kXor, t.at(j), v.at(j), k1.base);
  for (std::uint32_t j = 0; j < words; ++j) em.op(Op::kSub, v.at(j), t.at(j), k0.base);
  for (std::uint32_t j = 0; j < words; ++j) em.op(Op::kMax, x.at(j), x.at(j), v.at(j));

  CaesarKernel k;
  k.layout = [=](const std::vector<Tensor>& in) {
    WordWrites out;
    pack(out, x.base, in[0].data.data(), n, w);
    out.emplace_back(sh.base, shift_word);
    out.emplace_back(k0.base, k_word);
    out.emplace_back(k1.base, k_word);
    return out;
  };
  k.extract = [=](const WordReader& rd, std::uint64_t&) {
    Tensor out = make_tensor(w, {n});
    unpack(rd, x.base, out.data.data(), n, w);
    return out;
  };
  return finish(std::move(k), alloc, em);
}

// A is stored as one splatted word per element, B row-major in the other
// bank; each output word is a MAC chain over the K rows of B.
CaesarKernel gen_matmul(const KernelSpec& spec) {
  const ElemWidth w = spec.width;
  const std::uint32_t m = spec.shape[0], kk = spec.shape[1], p = spec.shape[2];
  const std::uint32_t pw = words_for(p, w);
  const bool gemm = spec.name == KernelName::kGemm;
  BankAlloc alloc(spec);
  const Region a = alloc.take(0, m * kk, "A splats");
  const Region d = alloc.take(0, m * pw, "result");
  const Region alpha = gemm ? alloc.take(0, 1, "alpha") : Region{};
  const Region beta = gemm ? alloc.take(0, 1, "beta") : Region{};
  const Region b = alloc.take(1, kk * pw, "B");
  const Region c = gemm ? alloc.take(1, m * pw, "C") : Region{};
  const Region prod = gemm ? alloc.take(1, m * pw, "A*B") : Region{};

  Emitter em;
  em.width(w);
  const Region& ab = gemm ? prod : d;
  for (std::uint32_t i = 0; i < m; ++i) {
    for (std::uint32_t j = 0; j < pw; ++j) {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> terms;
      for (std::uint32_t t = 0; t < kk; ++t) {
        terms.emplace_back(a.at(i * kk + t), b.at(t * pw + j));
      }
      mac_chain(em, ab.at(i * pw + j), terms);
    }
  }
  if (gemm) {
    for (std::uint32_t j = 0; j < m * pw; ++j) {
      mac_chain(em, d.at(j), {{alpha.base, prod.at(j)}, {beta.base, c.at(j)}});
    }
  }

  const std::int32_t av = spec.alpha, bv = spec.beta;
  CaesarKernel k;
  k.layout = [=](const std::vector<Tensor>& in) {
    WordWrites out;
    for (std::uint32_t e = 0; e < m * kk; ++e) {
      out.emplace_back(a.at(e), splat(in[0].data[e], w));
    }
    for (std::uint32_t t = 0; t < kk; ++t) {
      pack(out, b.at(t * pw), in[1].data.data() + t * p, p, w);
    }
    if (gemm) {
      for (std::uint32_t i = 0; i < m; ++i) {
        pack(out, c.at(i * pw), in[2].data.data() + i * p, p, w);
      }
      out.emplace_back(alpha.base, splat(av, w));
      out.emplace_back(beta.base, splat(bv, w));
    }
    return out;
  };
  k.extract = [=](const WordReader& rd, std::uint64_t&) {
    Tensor t = make_tensor(w, {m, p});
    for (std::uint32_t i = 0; i < m; ++i) {
      unpack(rd, d.at(i * pw), t.data.data() + i * p, p, w);
    }
    return t;
  };
  return finish(std::move(k), alloc, em);
}

// Sub-word column shifts are materialised once per input row as shifted
// copies S_s (elements s, s+1, ... of each word window), built at 32-bit
// width from adjacent words. Each output word is then a MAC chain over the
// f*f taps with filter splats in the opposite bank.
CaesarKernel gen_conv2d(const KernelSpec& spec) {
  const ElemWidth w = spec.width;
  const std::uint32_t r = spec.shape[0], n = spec.shape[1], f = spec.shape[2];
  const std::uint32_t ro = r - f + 1, no = n - f + 1;
  const unsigned epw = elements_per_word(w);
  const unsigned bits = elem_bits(w);
  const std::uint32_t ow = words_for(no, w);
  const std::uint32_t sw = ow + (f - 1) / epw;
  const std::uint32_t copies = std::min<std::uint32_t>(epw - 1, f - 1);
  const std::uint32_t xw = std::max(words_for(n, w), sw) + (copies > 0 ? 1 : 0);

  BankAlloc alloc(spec);
  const Region x = alloc.take(1, r * xw, "input");
  std::vector<Region> shifted(copies + 1);
  for (std::uint32_t s = 1; s <= copies; ++s) {
    shifted[s] = alloc.take(1, r * sw, "shifted copy");
  }
  const Region t2 = copies ? alloc.take(1, r * sw, "temporary") : Region{};
  const Region t1 = copies ? alloc.take(0, r * sw, "temporary") : Region{};
  const Region shr = alloc.take(0, copies, "shift amounts");
  const Region shl = alloc.take(0, copies, "shift amounts");
  const Region fs = alloc.take(0, f * f, "filter splats");
  const Region y = alloc.take(0, ro * ow, "result");

  Emitter em;
  if (copies > 0) em.width(ElemWidth::kW32);
  for (std::uint32_t s = 1; s <= copies; ++s) {
    for (std::uint32_t i = 0; i < r; ++i) {
      for (std::uint32_t j = 0; j < sw; ++j) {
        em.op(Op::kSlr, t1.at(i * sw + j), x.at(i * xw + j), shr.at(s - 1));
      }
    }
    for (std::uint32_t i = 0; i < r; ++i) {
      for (std::uint32_t j = 0; j < sw; ++j) {
        em.op(Op::kSll, t2.at(i * sw + j), x.at(i * xw + j + 1), shl.at(s - 1));
      }
    }
    for (std::uint32_t i = 0; i < r * sw; ++i) {
      em.op(Op::kOr, shifted[s].at(i), t1.at(i), t2.at(i));
    }
  }
  em.width(w);
  for (std::uint32_t o = 0; o < ro; ++o) {
    for (std::uint32_t j = 0; j < ow; ++j) {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> terms;
      for (std::uint32_t u = 0; u < f; ++u) {
        for (std::uint32_t v = 0; v < f; ++v) {
          const std::uint32_t s = v % epw;
          const std::uint32_t col = j + v / epw;
          const std::uint32_t src = s == 0 ? x.at((o + u) * xw + col)
                                           : shifted[s].at((o + u) * sw + col);
          terms.emplace_back(fs.at(u * f + v), src);
        }
      }
      mac_chain(em, y.at(o * ow + j), terms);
    }
  }

  CaesarKernel k;
  k.layout = [=](const std::vector<Tensor>& in) {
    WordWrites out;
    for (std::uint32_t i = 0; i < r; ++i) {
      pack(out, x.at(i * xw), in[0].data.data() + i * n, n, w);
      for (std::uint32_t j = words_for(n, w); j < xw; ++j) {
        out.emplace_back(x.at(i * xw + j), 0);
      }
    }
    for (std::uint32_t s = 1; s <= copies; ++s) {
      out.emplace_back(shr.at(s - 1), s * bits);
      out.emplace_back(shl.at(s - 1), 32 - s * bits);
    }
    for (std::uint32_t e = 0; e < f * f; ++e) {
      out.emplace_back(fs.at(e), splat(in[1].data[e], w));
    }
    return out;
  };
  k.extract = [=](const WordReader& rd, std::uint64_t&) {
    Tensor t = make_tensor(w, {ro, no});
    for (std::uint32_t o = 0; o < ro; ++o) {
      unpack(rd, y.at(o * ow), t.data.data() + o * no, no, w);
    }
    return t;
  };
  return finish(std::move(k), alloc, em);
}

// Vertical maxima on the macro; the horizontal pair reduction is left to the
// host and reported as host operations.
CaesarKernel gen_maxpool(const KernelSpec& spec) {
  const ElemWidth w = spec.width;
  const std::uint32_t r = spec.shape[0], n = spec.shape[1];
  const std::uint32_t rw = words_for(n, w);
  const std::uint32_t half = r / 2;
  BankAlloc alloc(spec);
  const Region even = alloc.take(0, half * rw, "even rows");
  const Region v = alloc.take(0, half * rw, "vertical maxima");
  const Region odd = alloc.take(1, half * rw, "odd rows");
  Emitter em;
  em.width(w);
  for (std::uint32_t j = 0; j < half * rw; ++j) {
    em.op(Op::kMax, v.at(j), even.at(j), odd.at(j));
  }
  CaesarKernel k;
  k.layout = [=](const std::vector<Tensor>& in) {
    WordWrites out;
    for (std::uint32_t i = 0; i < r; ++i) {
      const Region& dst = i % 2 == 0 ? even : odd;
      pack(out, dst.at((i / 2) * rw), in[0].data.data() + i * n, n, w);
    }
    return out;
  };
  k.extract = [=](const WordReader& rd, std::uint64_t& host_ops) {
    Tensor t = make_tensor(w, {half, n / 2});
    std::vector<std::int32_t> row(n);
    for (std::uint32_t o = 0; o < half; ++o) {
      unpack(rd, v.at(o * rw), row.data(), n, w);
      for (std::uint32_t c = 0; c < n / 2; ++c) {
        t.data[o * (n / 2) + c] = std::max(row[2 * c], row[2 * c + 1]);
        ++host_ops;
      }
    }
    return t;
  };
  return finish(std::move(k), alloc, em);
}

// Fully connected layers with ReLU. Each output is a DOT chain over a weight
// row; the 32-bit scalars are truncated and packed into lanes at 32-bit width
// (AND, SLL, OR), then clamped with MAX against zero.
CaesarKernel gen_autoencoder(const KernelSpec& spec) {
  const ElemWidth w = spec.width;
  const auto dims = spec.shape;
  const unsigned epw = elements_per_word(w);
  const unsigned bits = elem_bits(w);
  const std::size_t layers = dims.size() - 1;
  std::uint32_t max_words = 0;
  std::uint32_t max_dim = 0;
  for (std::uint32_t d : dims) {
    max_words = std::max(max_words, words_for(d, w));
    max_dim = std::max(max_dim, d);
  }

  BankAlloc alloc(spec);
  std::vector<Region> weights;
  for (std::size_t l = 0; l < layers; ++l) {
    weights.push_back(alloc.take(0, dims[l + 1] * words_for(dims[l], w), "weights"));
  }
  const Region bufs[2] = {alloc.take(1, max_words, "activations"),
                          alloc.take(1, max_words, "activations")};
  const Region z0 = alloc.take(0, 1, "zero");
  const Region z1 = alloc.take(1, 1, "zero");
  const bool packed = epw > 1;
  const Region ys = packed ? alloc.take(0, max_dim, "scalars") : Region{};
  const Region ts = packed ? alloc.take(0, max_dim, "temporary") : Region{};
  const Region us = packed ? alloc.take(0, max_dim, "temporary") : Region{};
  const Region mask = packed ? alloc.take(1, 1, "mask") : Region{};
  const Region lane_sh = packed ? alloc.take(1, epw - 1, "lane shifts") : Region{};

  Emitter em;
  for (std::size_t l = 0; l < layers; ++l) {
    const Region& in = bufs[l % 2];
    const Region& out = bufs[(l + 1) % 2];
    const std::uint32_t din = dims[l], dout = dims[l + 1];
    const std::uint32_t iw = words_for(din, w);
    em.width(w);
    for (std::uint32_t o = 0; o < dout; ++o) {
      const std::uint32_t dest = packed ? ys.at(o) : out.at(o);
      const Region& wr = weights[l];
      em.op(Op::kDotInit, 0, wr.at(o * iw), in.at(0));
      if (iw == 1) {
        em.op(Op::kDotStore, dest, z0.base, z1.base);
        continue;
      }
      for (std::uint32_t j = 1; j + 1 < iw; ++j) {
        em.op(Op::kDot, 0, wr.at(o * iw + j), in.at(j));
      }
      em.op(Op::kDotStore, dest, wr.at(o * iw + iw - 1), in.at(iw - 1));
    }
    if (packed) {
      em.width(ElemWidth::kW32);
      for (std::uint32_t o = 0; o < dout; ++o) {
        const std::uint32_t dest = o % epw == 0 ? out.at(o / epw) : ts.at(o);
        em.op(Op::kAnd, dest, ys.at(o), mask.base);
      }
      for (std::uint32_t o = 0; o < dout; ++o) {
        if (o % epw == 0) continue;
        em.op(Op::kSll, us.at(o), ts.at(o), lane_sh.at(o % epw - 1));
      }
      for (std::uint32_t o = 0; o < dout; ++o) {
        if (o % epw == 0) continue;
        em.op(Op::kOr, out.at(o / epw), out.at(o / epw), us.at(o));
      }
      em.width(w);
    }
    for (std::uint32_t j = 0; j < words_for(dout, w); ++j) {
      em.op(Op::kMax, out.at(j), out.at(j), z0.base);
    }
  }

  const Region result = bufs[layers % 2];
  CaesarKernel k;
  k.layout = [=](const std::vector<Tensor>& in) {
    WordWrites out;
    pack(out, bufs[0].base, in[0].data.data(), dims[0], w);
    for (std::size_t l = 0; l < layers; ++l) {
      const std::uint32_t iw = words_for(dims[l], w);
      for (std::uint32_t o = 0; o < dims[l + 1]; ++o) {
        pack(out, weights[l].at(o * iw), in[l + 1].data.data() + o * dims[l],
             dims[l], w);
      }
    }
    out.emplace_back(z0.base, 0);
    out.emplace_back(z1.base, 0);
    if (packed) {
      out.emplace_back(mask.base, elem_mask(w));
      for (unsigned lane = 1; lane < epw; ++lane) {
        out.emplace_back(lane_sh.at(lane - 1), lane * bits);
      }
    }
    return out;
  };
  k.extract = [=](const WordReader& rd, std::uint64_t&) {
    Tensor t = make_tensor(w, {dims.back()});
    unpack(rd, result.base, t.data.data(), dims.back(), w);
    return t;
  };
  return finish(std::move(k), alloc, em);
}

}  // namespace

CaesarKernel gen_caesar(const KernelSpec& spec) {
  validate(spec);
  switch (spec.name) {
    case KernelName::kXor:
    case KernelName::kAdd:
    case KernelName::kMul:
      return gen_binary(spec);
    case KernelName::kRelu:
      return gen_relu(spec);
    case KernelName::kLeakyRelu:
      return gen_leaky(spec);
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
