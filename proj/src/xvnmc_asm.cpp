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

#include "nmcsim/xvnmc_asm.hpp"

#include <map>
#include <optional>
#include <string>

#include "nmcsim/error.hpp"
#include "text_util.hpp"

namespace nmcsim {

namespace {

using text::Token;

constexpr std::string_view kAbiNames[16] = {
    "zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2",
    "s0",   "s1", "a0", "a1", "a2", "a3", "a4", "a5"};

std::optional<std::uint8_t> parse_gpr(std::string_view s) {
  const std::string l = text::lower(text::trim(s));
  if (l == "fp") return 8;
  for (unsigned i = 0; i < 16; ++i) {
    if (l == kAbiNames[i]) return static_cast<std::uint8_t>(i);
  }
  if (l.size() >= 2 && l[0] == 'x') {
    auto n = text::parse_int(std::string_view(l).substr(1));
    if (n && *n >= 0 && *n < 16 && l[1] != '+' && l[1] != '-') {
      return static_cast<std::uint8_t>(*n);
    }
  }
  return std::nullopt;
}

std::optional<std::uint8_t> parse_vreg(std::string_view s) {
  const std::string l = text::lower(text::trim(s));
  if (l.size() >= 2 && l[0] == 'v') {
    auto n = text::parse_int(std::string_view(l).substr(1));
    if (n && *n >= 0 && *n < 32 && l[1] != '+' && l[1] != '-') {
      return static_cast<std::uint8_t>(*n);
    }
  }
  return std::nullopt;
}

struct SourceLine {
  int line;
  int col;
  std::string mn;
  std::vector<Token> ops;
  std::uint32_t addr;
};

class XvnmcAssembler {
 public:
  std::vector<std::uint32_t> run(std::string_view source,
                                 std::uint32_t max_bytes) {
    std::vector<SourceLine> program;
    std::uint32_t addr = 0;
    int line_no = 0;
    for (std::string_view raw : text::lines(source)) {
      ++line_no;
      line_ = line_no;
      std::string_view body = text::strip_comment(raw, "#;");
      std::size_t pos = 0;
      auto skip_ws = [&] {
        while (pos < body.size() && text::is_space(body[pos])) ++pos;
      };
      skip_ws();
      // Leading labels.
      while (true) {
        const std::size_t colon = body.find(':', pos);
        if (colon == std::string_view::npos) break;
        std::string_view name = text::trim(body.substr(pos, colon - pos));
        if (!text::is_identifier(name)) break;
        if (labels_.count(std::string(name)) != 0) {
          fail(static_cast<int>(pos) + 1,
               "duplicate label '" + std::string(name) + "'");
        }
        labels_[std::string(name)] = addr;
        pos = colon + 1;
        skip_ws();
      }
      if (pos >= body.size()) continue;
      std::size_t end = pos;
      while (end < body.size() && !text::is_space(body[end])) ++end;
      SourceLine sl;
      sl.line = line_no;
      sl.col = static_cast<int>(pos) + 1;
      sl.mn = text::lower(body.substr(pos, end - pos));
      sl.ops = text::split_operands(body.substr(end), static_cast<int>(end) + 1);
      sl.addr = addr;
      addr += 4 * size_of(sl);
      program.push_back(std::move(sl));
    }
    if (addr > max_bytes) {
      throw Error(ErrorCode::kProgramTooLarge,
                  std::to_string(addr) + " bytes exceed the " +
                      std::to_string(max_bytes) + " byte program memory");
    }
    std::vector<std::uint32_t> out;
    out.reserve(addr / 4);
    for (const SourceLine& sl : program) {
      line_ = sl.line;
      cur_ = &sl;
      try {
        emit(sl, out);
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        fail(sl.col, e.what());
      }
    }
    return out;
  }

 private:
  [[noreturn]] void fail(int col, const std::string& msg) const {
    throw ParseError(line_, col, msg);
  }

  void expect_ops(const SourceLine& sl, std::size_t n) const {
    if (sl.ops.size() != n) {
      fail(sl.col, "'" + sl.mn + "' expects " + std::to_string(n) +
                       " operand" + (n == 1 ? "" : "s") + ", got " +
                       std::to_string(sl.ops.size()));
    }
  }

  std::uint8_t gpr(const Token& t) const {
    auto r = parse_gpr(t.text);
    if (!r) fail(t.column, "expected a register x0..x15, got '" +
                               std::string(t.text) + "'");
    return *r;
  }

  std::uint8_t vreg(const Token& t) const {
    auto r = parse_vreg(t.text);
    if (!r) fail(t.column, "expected a vector register v0..v31, got '" +
                               std::string(t.text) + "'");
    return *r;
  }

  std::int64_t imm(const Token& t) const {
    auto v = text::parse_int(t.text);
    if (!v) fail(t.column, "expected an integer, got '" +
                               std::string(t.text) + "'");
    return *v;
  }

  std::int32_t target(const Token& t, std::uint32_t addr) const {
    auto it = labels_.find(std::string(t.text));
    if (it != labels_.end()) {
      return static_cast<std::int32_t>(it->second) -
             static_cast<std::int32_t>(addr);
    }
    if (auto v = text::parse_int(t.text)) return static_cast<std::int32_t>(*v);
    fail(t.column, "unknown label '" + std::string(t.text) + "'");
  }

  // Parses `imm(reg)`; a bare `(reg)` means offset 0.
  std::pair<std::int32_t, std::uint8_t> mem(const Token& t) const {
    const std::size_t open = t.text.find('(');
    const std::size_t close = t.text.rfind(')');
    if (open == std::string_view::npos || close != t.text.size() - 1) {
      fail(t.column, "expected offset(register)");
    }
    std::string_view off = text::trim(t.text.substr(0, open));
    std::int64_t value = 0;
    if (!off.empty()) {
      auto v = text::parse_int(off);
      if (!v) fail(t.column, "bad offset '" + std::string(off) + "'");
      value = *v;
    }
    auto r = parse_gpr(t.text.substr(open + 1, close - open - 1));
    if (!r) fail(t.column, "bad base register");
    return {static_cast<std::int32_t>(value), *r};
  }

  static bool li_fits12(std::int64_t v) { return v >= -2048 && v <= 2047; }

  unsigned size_of(const SourceLine& sl) const {
    if (sl.mn == "li" && sl.ops.size() == 2) {
      auto v = text::parse_int(sl.ops[1].text);
      if (!v || li_fits12(*v)) return 1;
      const auto u = static_cast<std::uint32_t>(*v);
      return (u & 0xFFF) == 0 ? 1 : 2;
    }
    return 1;
  }

  void emit_rv(std::vector<std::uint32_t>& out, RvOp op, std::uint8_t rd,
               std::uint8_t rs1, std::uint8_t rs2, std::int64_t imm) const {
    RvInstr in;
    in.op = op;
    in.rd = rd;
    in.rs1 = rs1;
    in.rs2 = rs2;
    if (imm < INT32_MIN || imm > UINT32_MAX) {
      throw Error(ErrorCode::kFieldOverflow, "immediate out of range");
    }
    in.imm = static_cast<std::int32_t>(static_cast<std::uint32_t>(imm));
    out.push_back(encode(in));
  }

  void emit(const SourceLine& sl, std::vector<std::uint32_t>& out) const {
    const std::string& mn = sl.mn;
    const auto& o = sl.ops;
    if (mn == ".word") {
      expect_ops(sl, 1);
      out.push_back(static_cast<std::uint32_t>(imm(o[0])));
      return;
    }
    if (emit_pseudo(sl, out)) return;
    if (mn == "vsetvli" || mn == "vsetivli" || mn == "vsetvl") {
      emit_vset(sl, out);
      return;
    }
    if (auto op = rvop_from_name(mn)) {
      emit_base(sl, *op, out);
      return;
    }
    emit_vector(sl, out);
  }

  bool emit_pseudo(const SourceLine& sl, std::vector<std::uint32_t>& out) const {
    const std::string& mn = sl.mn;
    const auto& o = sl.ops;
    if (mn == "nop") {
      expect_ops(sl, 0);
      emit_rv(out, RvOp::kAddi, 0, 0, 0, 0);
    } else if (mn == "li") {
      expect_ops(sl, 2);
      const std::uint8_t rd = gpr(o[0]);
      const std::int64_t v = imm(o[1]);
      if (li_fits12(v)) {
        emit_rv(out, RvOp::kAddi, rd, 0, 0, v);
      } else {
        const auto u = static_cast<std::uint32_t>(v);
        const std::uint32_t hi = (u + 0x800u) & 0xFFFFF000u;
        const auto lo = static_cast<std::int32_t>(u - hi);
        emit_rv(out, RvOp::kLui, rd, 0, 0, hi);
        if ((u & 0xFFF) != 0) emit_rv(out, RvOp::kAddi, rd, rd, 0, lo);
      }
    } else if (mn == "mv") {
      expect_ops(sl, 2);
      emit_rv(out, RvOp::kAddi, gpr(o[0]), gpr(o[1]), 0, 0);
    } else if (mn == "not") {
      expect_ops(sl, 2);
      emit_rv(out, RvOp::kXori, gpr(o[0]), gpr(o[1]), 0, -1);
    } else if (mn == "neg") {
      expect_ops(sl, 2);
      emit_rv(out, RvOp::kSub, gpr(o[0]), 0, gpr(o[1]), 0);
    } else if (mn == "j") {
      expect_ops(sl, 1);
      emit_rv(out, RvOp::kJal, 0, 0, 0, target(o[0], sl.addr));
    } else if (mn == "jr") {
      expect_ops(sl, 1);
      emit_rv(out, RvOp::kJalr, 0, gpr(o[0]), 0, 0);
    } else if (mn == "ret") {
      expect_ops(sl, 0);
      emit_rv(out, RvOp::kJalr, 0, 1, 0, 0);
    } else if (mn == "beqz" || mn == "bnez") {
      expect_ops(sl, 2);
      emit_rv(out, mn == "beqz" ? RvOp::kBeq : RvOp::kBne, 0, gpr(o[0]), 0,
              target(o[1], sl.addr));
    } else if (mn == "bgt" || mn == "ble" || mn == "bgtu" || mn == "bleu") {
      expect_ops(sl, 3);
      const RvOp op = mn == "bgt"    ? RvOp::kBlt
                      : mn == "ble"  ? RvOp::kBge
                      : mn == "bgtu" ? RvOp::kBltu
                                     : RvOp::kBgeu;
      emit_rv(out, op, 0, gpr(o[1]), gpr(o[0]), target(o[2], sl.addr));
    } else {
      return false;
    }
    return true;
  }

  void emit_base(const SourceLine& sl, RvOp op,
                 std::vector<std::uint32_t>& out) const {
    const auto& o = sl.ops;
    switch (op) {
      case RvOp::kLui:
      case RvOp::kAuipc: {
        expect_ops(sl, 2);
        const std::int64_t v = imm(o[1]);
        if (v < -(1 << 19) || v > 0xFFFFF) fail(o[1].column, "20-bit immediate");
        emit_rv(out, op, gpr(o[0]), 0, 0,
                static_cast<std::uint32_t>(v) << 12);
        return;
      }
      case RvOp::kJal:
        if (o.size() == 1) {
          emit_rv(out, op, 1, 0, 0, target(o[0], sl.addr));
        } else {
          expect_ops(sl, 2);
          emit_rv(out, op, gpr(o[0]), 0, 0, target(o[1], sl.addr));
        }
        return;
      case RvOp::kJalr:
        if (o.size() == 1) {
          emit_rv(out, op, 1, gpr(o[0]), 0, 0);
        } else if (o.size() == 2) {
          auto [off, base] = mem(o[1]);
          emit_rv(out, op, gpr(o[0]), base, 0, off);
        } else {
          expect_ops(sl, 3);
          emit_rv(out, op, gpr(o[0]), gpr(o[1]), 0, imm(o[2]));
        }
        return;
      case RvOp::kBeq:
      case RvOp::kBne:
      case RvOp::kBlt:
      case RvOp::kBge:
      case RvOp::kBltu:
      case RvOp::kBgeu:
        expect_ops(sl, 3);
        emit_rv(out, op, 0, gpr(o[0]), gpr(o[1]), target(o[2], sl.addr));
        return;
      case RvOp::kLb:
      case RvOp::kLh:
      case RvOp::kLw:
      case RvOp::kLbu:
      case RvOp::kLhu: {
        expect_ops(sl, 2);
        auto [off, base] = mem(o[1]);
        emit_rv(out, op, gpr(o[0]), base, 0, off);
        return;
      }
      case RvOp::kSb:
      case RvOp::kSh:
      case RvOp::kSw: {
        expect_ops(sl, 2);
        auto [off, base] = mem(o[1]);
        emit_rv(out, op, 0, base, gpr(o[0]), off);
        return;
      }
      case RvOp::kAddi:
      case RvOp::kSlti:
      case RvOp::kSltiu:
      case RvOp::kXori:
      case RvOp::kOri:
      case RvOp::kAndi:
      case RvOp::kSlli:
      case RvOp::kSrli:
      case RvOp::kSrai:
        expect_ops(sl, 3);
        emit_rv(out, op, gpr(o[0]), gpr(o[1]), 0, imm(o[2]));
        return;
      case RvOp::kFence:
        expect_ops(sl, 0);
        emit_rv(out, op, 0, 0, 0, 0x0FF);
        return;
      default:
        expect_ops(sl, 3);
        emit_rv(out, op, gpr(o[0]), gpr(o[1]), gpr(o[2]), 0);
        return;
    }
  }

  ElemWidth sew(const std::vector<Token>& o, std::size_t first) const {
    if (o.size() <= first) fail(cur_->col, "missing element width");
    const std::string e = text::lower(o[first].text);
    ElemWidth w = ElemWidth::kW8;
    if (e == "e8") {
      w = ElemWidth::kW8;
    } else if (e == "e16") {
      w = ElemWidth::kW16;
    } else if (e == "e32") {
      w = ElemWidth::kW32;
    } else {
      fail(o[first].column, "element width must be e8, e16 or e32");
    }
    for (std::size_t i = first + 1; i < o.size(); ++i) {
      if (text::lower(o[i].text) != "m1") {
        fail(o[i].column, "only m1 register grouping is supported");
      }
    }
    return w;
  }

  void emit_vset(const SourceLine& sl, std::vector<std::uint32_t>& out) const {
    const auto& o = sl.ops;
    VsetInstr v;
    if (o.size() < 3) fail(sl.col, "'" + sl.mn + "' expects rd, avl, vtype");
    v.rd = gpr(o[0]);
    if (sl.mn == "vsetvl") {
      expect_ops(sl, 3);
      v.kind = VsetInstr::Kind::kVsetvl;
      v.rs1 = gpr(o[1]);
      v.rs2 = gpr(o[2]);
    } else if (sl.mn == "vsetvli") {
      v.kind = VsetInstr::Kind::kVsetvli;
      v.rs1 = gpr(o[1]);
      v.sew = sew(o, 2);
    } else {
      v.kind = VsetInstr::Kind::kVsetivli;
      const std::int64_t avl = imm(o[1]);
      if (avl < 0 || avl > 31) fail(o[1].column, "AVL immediate must be 0..31");
      v.rs1 = static_cast<std::uint8_t>(avl);
      v.sew = sew(o, 2);
    }
    out.push_back(encode(v));
  }

  void emit_vector(const SourceLine& sl, std::vector<std::uint32_t>& out) const {
    std::string_view name = sl.mn;
    if (name.substr(0, 6) == "xvnmc.") name.remove_prefix(6);
    std::string_view base = name;
    std::string_view var;
    const std::size_t dot = name.find('.');
    if (dot != std::string_view::npos) {
      base = name.substr(0, dot);
      var = name.substr(dot + 1);
    }
    XvnmcInstr in;
    auto op = vmnemonic_from_name(base);
    if (!op && base.size() > 1 && base.back() == 'r') {
      op = vmnemonic_from_name(base.substr(0, base.size() - 1));
      in.indirect = op.has_value();
    }
    if (!op) {
      throw ParseError(line_, sl.col, "unknown mnemonic '" + sl.mn + "'");
    }
    in.op = *op;
    if (var.empty()) {
      if (*op == VMnemonic::kEmvv) {
        in.variant = VVariant::kEX;
      } else if (*op == VMnemonic::kEmvx) {
        in.variant = VVariant::kXE;
      } else {
        fail(sl.col, "missing .vv/.vx/.vi variant");
      }
    } else if (var == "vv") {
      in.variant = VVariant::kVV;
    } else if (var == "vx") {
      in.variant = VVariant::kVX;
    } else if (var == "vi") {
      in.variant = VVariant::kVI;
    } else if (var == "ex") {
      in.variant = VVariant::kEX;
    } else if (var == "xe") {
      in.variant = VVariant::kXE;
    } else {
      fail(sl.col, "unknown variant '." + std::string(var) + "'");
    }
    const auto& o = sl.ops;
    if (in.variant == VVariant::kEX || in.variant == VVariant::kXE) {
      expect_ops(sl, 3);
      if (in.op == VMnemonic::kEmvx) {
        in.rd = gpr(o[0]);
        in.vs2 = vreg(o[1]);
      } else {
        in.vd = vreg(o[0]);
        in.rs1 = gpr(o[1]);
      }
      if (in.op == VMnemonic::kEmvx) {
        in.rs1 = gpr(o[2]);
      } else {
        in.rs2 = gpr(o[2]);
      }
    } else {
      std::size_t next = 0;
      if (in.indirect) {
        expect_ops(sl, in.variant == VVariant::kVV ? 1 : 2);
        in.idx = gpr(o[next++]);
      } else {
        const bool is_vmv = in.op == VMnemonic::kVmv;
        expect_ops(sl, is_vmv ? 2 : 3);
        in.vd = vreg(o[next++]);
        if (!is_vmv) in.vs2 = vreg(o[next++]);
      }
      switch (in.variant) {
        case VVariant::kVV:
          if (!in.indirect) in.vs1 = vreg(o[next]);
          break;
        case VVariant::kVX:
          in.rs1 = gpr(o[next]);
          break;
        case VVariant::kVI:
          in.imm = static_cast<std::int32_t>(imm(o[next]));
          break;
        default:
          break;
      }
    }
    out.push_back(encode(in));
  }

  int line_ = 0;
  const SourceLine* cur_ = nullptr;
  std::map<std::string, std::uint32_t> labels_;
};

std::string x(unsigned r) { return "x" + std::to_string(r); }
std::string v(unsigned r) { return "v" + std::to_string(r); }

std::string disasm_rv(const RvInstr& in) {
  const std::string mn(mnemonic(in.op));
  const std::string imm = std::to_string(in.imm);
  switch (in.op) {
    case RvOp::kLui:
    case RvOp::kAuipc:
      return mn + ' ' + x(in.rd) + ", 0x" +
             text::hex(static_cast<std::uint32_t>(in.imm) >> 12);
    case RvOp::kJal:
      return mn + ' ' + x(in.rd) + ", " + imm;
    case RvOp::kJalr:
    case RvOp::kLb:
    case RvOp::kLh:
    case RvOp::kLw:
    case RvOp::kLbu:
    case RvOp::kLhu:
      return mn + ' ' + x(in.rd) + ", " + imm + "(" + x(in.rs1) + ")";
    case RvOp::kSb:
    case RvOp::kSh:
    case RvOp::kSw:
      return mn + ' ' + x(in.rs2) + ", " + imm + "(" + x(in.rs1) + ")";
    case RvOp::kBeq:
    case RvOp::kBne:
    case RvOp::kBlt:
    case RvOp::kBge:
    case RvOp::kBltu:
    case RvOp::kBgeu:
      return mn + ' ' + x(in.rs1) + ", " + x(in.rs2) + ", " + imm;
    case RvOp::kAddi:
    case RvOp::kSlti:
    case RvOp::kSltiu:
    case RvOp::kXori:
    case RvOp::kOri:
    case RvOp::kAndi:
    case RvOp::kSlli:
    case RvOp::kSrli:
    case RvOp::kSrai:
      return mn + ' ' + x(in.rd) + ", " + x(in.rs1) + ", " + imm;
    case RvOp::kFence:
      if (in.imm == 0x0FF && in.rd == 0 && in.rs1 == 0) return "fence";
      return ".word 0x" + text::hex(encode(in), 8);
    default:
      return mn + ' ' + x(in.rd) + ", " + x(in.rs1) + ", " + x(in.rs2);
  }
}

std::string disasm_vset(const VsetInstr& in) {
  const std::string e = "e" + std::to_string(elem_bits(in.sew));
  switch (in.kind) {
    case VsetInstr::Kind::kVsetvli:
      return "vsetvli " + x(in.rd) + ", " + x(in.rs1) + ", " + e;
    case VsetInstr::Kind::kVsetivli:
      return "vsetivli " + x(in.rd) + ", " + std::to_string(in.rs1) + ", " + e;
    case VsetInstr::Kind::kVsetvl:
      return "vsetvl " + x(in.rd) + ", " + x(in.rs1) + ", " + x(in.rs2);
  }
  return "";
}

std::string disasm_vector(const XvnmcInstr& in) {
  std::string out = "xvnmc." + std::string(mnemonic(in.op));
  if (in.op == VMnemonic::kEmvv) {
    return out + ' ' + v(in.vd) + ", " + x(in.rs1) + ", " + x(in.rs2);
  }
  if (in.op == VMnemonic::kEmvx) {
    return out + ' ' + x(in.rd) + ", " + v(in.vs2) + ", " + x(in.rs1);
  }
  if (in.indirect) out += 'r';
  out += '.';
  out += to_string(in.variant);
  out += ' ';
  std::vector<std::string> ops;
  if (in.indirect) {
    ops.push_back(x(in.idx));
  } else {
    ops.push_back(v(in.vd));
    if (in.op != VMnemonic::kVmv) ops.push_back(v(in.vs2));
  }
  switch (in.variant) {
    case VVariant::kVV:
      if (!in.indirect) ops.push_back(v(in.vs1));
      break;
    case VVariant::kVX:
      ops.push_back(x(in.rs1));
      break;
    case VVariant::kVI:
      ops.push_back(std::to_string(in.imm));
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (i != 0) out += ", ";
    out += ops[i];
  }
  return out;
}

}  // namespace

std::vector<std::uint32_t> asm_xvnmc(std::string_view source,
                                     std::uint32_t max_bytes) {
  return XvnmcAssembler().run(source, max_bytes);
}

std::string disasm(const Instruction& instr) {
  if (auto* rv = std::get_if<RvInstr>(&instr)) return disasm_rv(*rv);
  if (auto* vs = std::get_if<VsetInstr>(&instr)) return disasm_vset(*vs);
  return disasm_vector(std::get<XvnmcInstr>(instr));
}

std::string disasm_xvnmc(const std::vector<std::uint32_t>& words,
                         bool listing) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string line;
    try {
      line = disasm(decode(words[i]));
    } catch (const Error&) {
      line = ".word 0x" + text::hex(words[i], 8);
    }
    if (listing) {
      out += text::hex(i * 4, 4) + ": " + text::hex(words[i], 8) + "  ";
    }
    out += line;
    out += '\n';
  }
  return out;
}

std::vector<std::uint8_t> words_to_bytes(const std::vector<std::uint32_t>& w) {
  std::vector<std::uint8_t> out;
  out.reserve(w.size() * 4);
  for (std::uint32_t word : w) {
    for (unsigned b = 0; b < 4; ++b) {
      out.push_back(static_cast<std::uint8_t>(word >> (8 * b)));
    }
  }
  return out;
}

std::vector<std::uint32_t> bytes_to_words(const std::vector<std::uint8_t>& b) {
  if (b.size() % 4 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "binary image size is not a multiple of 4 bytes");
  }
  std::vector<std::uint32_t> out(b.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint32_t>(b[4 * i]) |
             static_cast<std::uint32_t>(b[4 * i + 1]) << 8 |
             static_cast<std::uint32_t>(b[4 * i + 2]) << 16 |
             static_cast<std::uint32_t>(b[4 * i + 3]) << 24;
  }
  return out;
}

}  // namespace nmcsim
