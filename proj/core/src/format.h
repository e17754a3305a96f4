// Copyright 2026 The phasewitness Authors
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

#ifndef PHASEWITNESS_SRC_FORMAT_H_
#define PHASEWITNESS_SRC_FORMAT_H_

#include <sstream>
#include <string>

namespace phasewitness::internal {

/// Short human-readable rendering of a double for error messages.
inline std::string fmt_double(double x) {
    std::ostringstream out;
    out.precision(6);
    out << x;
    return out.str();
}

}  // namespace phasewitness::internal

#endif  // PHASEWITNESS_SRC_FORMAT_H_
