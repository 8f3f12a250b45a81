/*
 * Copyright 2026 The proxysim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace proxysim {

// Numeric values are mirrored by psim_status in the C header.
enum class ErrorCode : int {
  InvalidArgument = 1,
  OutOfRange = 2,
  Accounting = 3,
  Protocol = 4,
  Consistency = 5,
  State = 6,
  Parse = 7,
  Io = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define PROXYSIM_DEFINE_ERROR(Name, Code)                                   \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {} \
  }

PROXYSIM_DEFINE_ERROR(InvalidArgument, InvalidArgument);
/// Delay or buffer position outside the legal window.
PROXYSIM_DEFINE_ERROR(OutOfRangeError, OutOfRange);
/// Arena freed more bytes than it holds, or exceeded its cap.
PROXYSIM_DEFINE_ERROR(AccountingError, Accounting);
/// A transport round or packet broke the synchronous exchange contract.
PROXYSIM_DEFINE_ERROR(ProtocolError, Protocol);
/// Internal structures disagree with each other.
PROXYSIM_DEFINE_ERROR(ConsistencyError, Consistency);
/// Operation called in the wrong lifecycle phase.
PROXYSIM_DEFINE_ERROR(StateError, State);
PROXYSIM_DEFINE_ERROR(ParseError, Parse);
PROXYSIM_DEFINE_ERROR(IoError, Io);

#undef PROXYSIM_DEFINE_ERROR

}  // namespace proxysim
