// Copyright 2026 The hywf Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "hywf/error.hpp"

namespace hywf {

const char *to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument:
        return "invalid-argument";
    case ErrorCode::Capacity:
        return "capacity";
    case ErrorCode::UnsupportedGate:
        return "unsupported-gate";
    case ErrorCode::MissingParameter:
        return "missing-parameter";
    case ErrorCode::Encoding:
        return "encoding";
    case ErrorCode::Io:
        return "io";
    case ErrorCode::Parse:
        return "parse";
    case ErrorCode::Validation:
        return "validation";
    case ErrorCode::Execution:
        return "execution";
    }
    return "unknown";
}

} // namespace hywf
