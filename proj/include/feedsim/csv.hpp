// Copyright 2026 The feedsim Authors.
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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace feedsim {

// Fixed six-decimal rendering. Negative zero prints as "0.000000".
std::string fixed6(double v);

// Splits one CSV line on commas; no quoting support.
std::vector<std::string> split_csv_line(std::string_view line);

// Quotes a field when it holds a comma, quote or line break (RFC 4180).
std::string csv_field(std::string_view text);

// Strict numeric parse of a whole field; throws std::invalid_argument.
double parse_double(std::string_view field);

}  // namespace feedsim
