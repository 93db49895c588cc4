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

#include "nmcsim/caesar_asm.hpp"

#include <sstream>

#include "json.hpp"
#include "nmcsim/error.hpp"
#include "text_util.hpp"

namespace nmcsim {

namespace {

using text::Token;

class CaesarAssembler {
 public:
  CommandStream run(std::string_view source) {
    CommandStream out;
    int line_no = 0;
    bool in_layout = false;
    for (std::string_view raw : text::lines(source)) {
      ++line_no;
      line_ = line_no;
      std::string_view line = text::strip_comment(raw, "#;");
      std::string_view body = text::trim(line);
      if (body.empty()) continue;
      const int col0 = static_cast<int>(body.data() - raw.data()) + 1;
      if (body == ".layout") {
        if (in_layout) fail(col0, "nested .layout");
        in_layout = true;
        continue;
      }
      if (body == ".end") {
        if (!in_layout) fail(col0, ".end without .layout");
        in_layout = false;
        continue;
      }
      if (in_layout) {
        define_symbol(body, col0);
        continue;
      }
      out.entries.push_back(assemble_line(body, col0));
    }
    if (in_layout) fail(1, "unterminated .layout block");
    return out;
  }

 private:
  [[noreturn]] void fail(int col, const std::string& msg) const {
    throw ParseError(line_, col, msg);
  }

  void define_symbol(std::string_view body, int col0) {
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) fail(col0, "expected 'name = value'");
    const std::string_view name = text::trim(body.substr(0, eq));
    if (!text::is_identifier(name)) fail(col0, "invalid symbol name");
    if (symbols_.count(std::string(name)) != 0) {
      fail(col0, "duplicate symbol '" + std::string(name) + "'");
    }
    const std::string_view rhs = body.substr(eq + 1);
    const int col = col0 + static_cast<int>(eq) + 1;
    symbols_[std::string(name)] = offset({text::trim(rhs), col});
  }

  std::uint16_t offset(const Token& tok) const {
    if (tok.text.empty()) fail(tok.column, "missing operand");
    std::int64_t value = 0;
    if (auto v = text::parse_int(tok.text)) {
      value = *v;
    } else {
      std::string_view base = tok.text;
      std::int64_t delta = 0;
      const std::size_t pm = tok.text.find_first_of("+-");
      if (pm != std::string_view::npos) {
        base = text::trim(tok.text.substr(0, pm));
        auto d = text::parse_int(tok.text.substr(pm + 1));
        if (!d) fail(tok.column, "bad offset in '" + std::string(tok.text) + "'");
        delta = tok.text[pm] == '-' ? -*d : *d;
      }
      auto it = symbols_.find(std::string(base));
      if (it == symbols_.end()) {
        fail(tok.column, "unknown symbol '" + std::string(base) + "'");
      }
      value = it->second + delta;
    }
    if (value < 0 || value >= kCaesarWords) {
      throw Error(ErrorCode::kOffsetOutOfRange,
                  "line " + std::to_string(line_) + ": offset " +
                      std::to_string(value) + " outside 0..8191");
    }
    return static_cast<std::uint16_t>(value);
  }

  CommandEntry assemble_line(std::string_view body, int col0) {
    std::size_t split = 0;
    while (split < body.size() && !text::is_space(body[split])) ++split;
    const std::string mn = text::lower(body.substr(0, split));
    auto op = caesar_opcode_from_mnemonic(mn);
    if (!op) {
      throw Error(ErrorCode::kUnknownMnemonic,
                  "line " + std::to_string(line_) + ": '" + mn + "'");
    }
    const std::vector<Token> ops =
        text::split_operands(body.substr(split), col0 + static_cast<int>(split));
    CaesarInstr instr;
    instr.opcode = *op;
    if (*op == CaesarOpcode::kCsrw) {
      if (ops.empty() || ops.size() > 2) {
        fail(col0, "csrw expects [dest,] width");
      }
      if (ops.size() == 2) instr.dest = offset(ops[0]);
      const Token& wt = ops.back();
      auto bits = text::parse_int(wt.text);
      auto w = bits ? width_from_bits(static_cast<unsigned>(*bits))
                    : std::nullopt;
      if (!bits || *bits < 0 || !w) fail(wt.column, "width must be 8, 16 or 32");
      instr.src1 = static_cast<std::uint16_t>(*w);
    } else {
      const bool optional_dest = !caesar_writes_dest(*op);
      std::size_t first_src = 1;
      if (ops.size() == 3) {
        instr.dest = offset(ops[0]);
      } else if (optional_dest && ops.size() == 2) {
        first_src = 0;
      } else {
        const int col = ops.empty() ? col0 + static_cast<int>(split)
                                    : ops.back().column +
                                          static_cast<int>(ops.back().text.size());
        fail(col, std::string(optional_dest ? "expected [dest,] src1, src2"
                                            : "expected dest, src1, src2") +
                      " for '" + mn + "'");
      }
      instr.src1 = offset(ops[first_src]);
      instr.src2 = offset(ops[first_src + 1]);
    }
    return {instr.dest, caesar_encode(instr)};
  }

  int line_ = 0;
  std::map<std::string, std::int64_t> symbols_;
};

std::string off(std::uint16_t v) { return "0x" + text::hex(v); }

}  // namespace

CommandStream asm_caesar(std::string_view source) {
  return CaesarAssembler().run(source);
}

std::string disasm_caesar(const CaesarInstr& instr) {
  std::string out(mnemonic(instr.opcode));
  if (instr.opcode == CaesarOpcode::kCsrw) {
    out += ' ';
    if (instr.dest != 0) out += off(instr.dest) + ", ";
    out += std::to_string(elem_bits(caesar_csrw_width(instr)));
    return out;
  }
  out += ' ';
  if (caesar_writes_dest(instr.opcode) || instr.dest != 0) {
    out += off(instr.dest) + ", ";
  }
  out += off(instr.src1) + ", " + off(instr.src2);
  return out;
}

std::string disasm_caesar(const CommandStream& stream) {
  std::string out;
  for (const CommandEntry& e : stream.entries) {
    out += disasm_caesar(caesar_decode(e.data, e.word_offset));
    out += '\n';
  }
  return out;
}

std::string stream_to_text(const CommandStream& stream) {
  std::string out;
  for (const CommandEntry& e : stream.entries) {
    out += text::hex(e.word_offset, 4) + ' ' + text::hex(e.data, 8) + '\n';
  }
  return out;
}

CommandStream stream_from_text(std::string_view source) {
  CommandStream out;
  int line_no = 0;
  for (std::string_view raw : text::lines(source)) {
    ++line_no;
    std::string_view body = text::trim(text::strip_comment(raw, "#"));
    if (body.empty()) continue;
    std::istringstream in{std::string(body)};
    std::string a, b, extra;
    in >> a >> b >> extra;
    auto o = text::parse_int("0x" + a);
    auto d = text::parse_int("0x" + b);
    if (b.empty() || !extra.empty() || !o || !d) {
      throw ParseError(line_no, 1, "expected 'offset_hex data_hex'");
    }
    if (*o >= kCaesarWords) {
      throw Error(ErrorCode::kOffsetOutOfRange,
                  "line " + std::to_string(line_no) + ": stream offset");
    }
    out.entries.push_back(
        {static_cast<std::uint16_t>(*o), static_cast<Word32>(*d)});
  }
  return out;
}

std::string stream_to_json(const CommandStream& stream) {
  nlohmann::json j = nlohmann::json::array();
  for (const CommandEntry& e : stream.entries) {
    j.push_back({{"offset", e.word_offset}, {"data", e.data}});
  }
  return j.dump(1) + "\n";
}

CommandStream stream_from_json(std::string_view source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(source);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, 1, e.what());
  }
  if (!j.is_array()) throw ParseError(1, 1, "stream JSON must be an array");
  CommandStream out;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("offset") ||
        !item.contains("data")) {
      throw ParseError(1, 1, "stream entries need 'offset' and 'data'");
    }
    const auto o = item.at("offset").get<std::int64_t>();
    const auto d = item.at("data").get<std::int64_t>();
    if (o < 0 || o >= kCaesarWords) {
      throw Error(ErrorCode::kOffsetOutOfRange, "stream offset");
    }
    out.entries.push_back(
        {static_cast<std::uint16_t>(o), static_cast<Word32>(d)});
  }
  return out;
}

}  // namespace nmcsim
