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

#include "srbench/format.h"

#include <charconv>
#include <cmath>

#include "srbench/errors.h"

namespace srbench {

std::string format_shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string format_fixed(double v, int decimals) {
  if (decimals < 0) throw InvalidArgument("negative decimal count");
  if (!std::isfinite(v)) return format_shortest(v);
  char buf[400];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
  std::string s(buf, end);

  const bool negative = !s.empty() && s[0] == '-';
  std::string digits = negative ? s.substr(1) : s;
  std::size_t dot = digits.find('.');
  if (dot == std::string::npos) {
    dot = digits.size();
    digits += '.';
  }
  std::string frac = digits.substr(dot + 1);
  std::string whole = digits.substr(0, dot);
  const bool round_up = frac.size() > static_cast<std::size_t>(decimals) &&
                        frac[decimals] >= '5';
  frac.resize(decimals, '0');

  std::string all = whole + frac;
  if (round_up) {
    int i = static_cast<int>(all.size()) - 1;
    while (i >= 0 && all[i] == '9') all[i--] = '0';
    if (i >= 0) {
      ++all[i];
    } else {
      all.insert(all.begin(), '1');
    }
  }
  const std::size_t int_len = all.size() - decimals;
  std::string out = all.substr(0, int_len);
  if (decimals > 0) out += "." + all.substr(int_len);
  const bool zero = out.find_first_not_of("0.") == std::string::npos;
  return negative && !zero ? "-" + out : out;
}

std::optional<double> parse_double(std::string_view s) {
  if (s == "inf" || s == "+inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || first == ptr) {
    return std::nullopt;
  }
  return v;
}

}  // namespace srbench
