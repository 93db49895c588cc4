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

#ifndef NMCSIM_ERROR_HPP_
#define NMCSIM_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace nmcsim {

enum class ErrorCode {
  kIllegalOpcode,
  kIllegalInstruction,
  kParseError,
  kOffsetOutOfRange,
  kUnknownMnemonic,
  kInvalidVariant,
  kFieldOverflow,
  kProgramTooLarge,
  kInvalidVector,
  kElementIndexOutOfRange,
  kAddressOutOfRange,
  kDeviceRejected,
  kKernelFault,
  kTimeout,
  kUnsupportedKernel,
  kDoesNotFit,
  kShapeMismatch,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

// All simulator, toolchain and harness failures are reported through this
// exception type; code() identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Assembler diagnostics carry a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(ErrorCode::kParseError, std::to_string(line) + ":" +
                                          std::to_string(column) + ": " +
                                          message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace nmcsim

#endif  // NMCSIM_ERROR_HPP_
