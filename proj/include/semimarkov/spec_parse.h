// Copyright 2026 The semimarkov Authors
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

#ifndef SEMIMARKOV_SPEC_PARSE_H
#define SEMIMARKOV_SPEC_PARSE_H

#include <string_view>

#include "semimarkov/qubit.h"
#include "semimarkov/waiting_time.h"

namespace semimarkov {

/// Parses exp:RATE, erlang:M:RATE or conv:R1,R2,... Throws SpecError on any
/// malformed or invalid input; the result prints back via to_string().
HypoExpWTD parse_wtd(std::string_view text);

/// Parses pauli:P0,PX,PY,PZ, phaseflip, ep or mix:NU. Throws SpecError.
PauliChannel parse_channel(std::string_view text);

/// Strict decimal parse of a whole field; throws SpecError naming the field.
double parse_number(std::string_view text, std::string_view what);

}  // namespace semimarkov

#endif
