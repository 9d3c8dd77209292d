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

#include "genesyn/error.hpp"

namespace genesyn {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kContractViolation: return "CONTRACT_VIOLATION";
    case ErrorCode::kConfig: return "CONFIG_ERROR";
    case ErrorCode::kData: return "DATA_ERROR";
    case ErrorCode::kDataMalformedHeader: return "DATA_MALFORMED_HEADER";
    case ErrorCode::kDataTruncated: return "DATA_TRUNCATED";
    case ErrorCode::kDataWidthMismatch: return "DATA_WIDTH_MISMATCH";
    case ErrorCode::kModel: return "MODEL_ERROR";
    case ErrorCode::kModelVersion: return "MODEL_VERSION_MISMATCH";
    case ErrorCode::kModelChecksum: return "MODEL_CHECKSUM_MISMATCH";
    case ErrorCode::kModelShape: return "MODEL_SHAPE_MISMATCH";
    case ErrorCode::kNonFiniteLoss: return "NON_FINITE_LOSS";
    case ErrorCode::kRetryBudget: return "RETRY_BUDGET_EXHAUSTED";
  }
  return "UNKNOWN_ERROR";
}

}  // namespace genesyn
