// Copyright 2026 The genesyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace genesyn {

// Every failure the library reports carries one of these codes. The CLI maps
// them to exit statuses and prints them verbatim.
enum class ErrorCode {
  kContractViolation,
  kConfig,
  kData,
  kDataMalformedHeader,
  kDataTruncated,
  kDataWidthMismatch,
  kModel,
  kModelVersion,
  kModelChecksum,
  kModelShape,
  kNonFiniteLoss,
  kRetryBudget,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::kContractViolation, what);
}

}  // namespace genesyn
