// Copyright 2026 The srbench Authors
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

// Decimal rendering shared by the record, leaderboard and CLI output.

#ifndef SRBENCH_FORMAT_H_
#define SRBENCH_FORMAT_H_

#include <optional>
#include <string>
#include <string_view>

namespace srbench {

// Shortest decimal that parses back to `v` exactly; "inf", "-inf", "nan" for
// non-finite values.
std::string format_shortest(double v);

// `decimals` fractional digits, rounding the shortest decimal form of `v`
// half away from zero (4.34725 -> "4.3473", -0.125 -> "-0.13" at 2).
std::string format_fixed(double v, int decimals);

// Strict full-string parse accepting what format_shortest produces.
std::optional<double> parse_double(std::string_view s);

}  // namespace srbench

#endif  // SRBENCH_FORMAT_H_
