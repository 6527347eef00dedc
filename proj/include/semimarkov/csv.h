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

#ifndef SEMIMARKOV_CSV_H
#define SEMIMARKOV_CSV_H

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace semimarkov {

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_double(double x);

/// One comma-separated line terminated by '\n'.
void write_csv_row(std::ostream& out, std::initializer_list<std::string_view> fields);

}  // namespace semimarkov

#endif
