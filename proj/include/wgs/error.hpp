// Copyright 2026 The wgs-mbc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WGS_ERROR_HPP
#define WGS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wgs {

enum class ErrorCode {
    NotRepresentable,
    SingularAngle,
    ZeroWeight,
    InvalidParams,
    InvalidK,
    TooManyQubits,
    BranchExplosion,
    QubitAbsent,
    NonTargetResidue,
    UnscheduledGraph,
    IoError,
};

const char *error_code_name(ErrorCode code);

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
    }
    ErrorCode code() const {
        return code_;
    }

   private:
    ErrorCode code_;
};

}  // namespace wgs

#endif
