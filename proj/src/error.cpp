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

#include "nmcsim/error.hpp"

namespace nmcsim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIllegalOpcode:
      return "IllegalOpcode";
    case ErrorCode::kIllegalInstruction:
      return "IllegalInstruction";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kOffsetOutOfRange:
      return "OffsetOutOfRange";
    case ErrorCode::kUnknownMnemonic:
      return "UnknownMnemonic";
    case ErrorCode::kInvalidVariant:
      return "InvalidVariant";
    case ErrorCode::kFieldOverflow:
      return "FieldOverflow";
    case ErrorCode::kProgramTooLarge:
      return "ProgramTooLarge";
    case ErrorCode::kInvalidVector:
      return "InvalidVector";
    case ErrorCode::kElementIndexOutOfRange:
      return "ElementIndexOutOfRange";
    case ErrorCode::kAddressOutOfRange:
      return "AddressOutOfRange";
    case ErrorCode::kDeviceRejected:
      return "DeviceRejected";
    case ErrorCode::kKernelFault:
      return "KernelFault";
    case ErrorCode::kTimeout:
      return "Timeout";
    case ErrorCode::kUnsupportedKernel:
      return "UnsupportedKernel";
    case ErrorCode::kDoesNotFit:
      return "DoesNotFit";
    case ErrorCode::kShapeMismatch:
      return "ShapeMismatch";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace nmcsim
