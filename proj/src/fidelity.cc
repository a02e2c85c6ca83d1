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

#include "srbench/fidelity.h"

#include <cmath>
#include <string>
#include <vector>

#include "filter.h"
#include "srbench/errors.h"

namespace srbench {
namespace {

constexpr double kCodeScale = 255.0;

void check_same_dims(const LumaPlane& a, const LumaPlane& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidArgument("plane dimensions differ: " +
                          std::to_string(a.width()) + "x" +
                          std::to_string(a.height()) + " vs " +
                          std::to_string(b.width()) + "x" +
                          std::to_string(b.height()));
  }
}

std::vector<double> to_codes(const LumaPlane& p) {
  std::vector<double> out(p.samples().begin(), p.samples().end());
  for (double& v : out) v *= kCodeScale;
  return out;
}

}  // namespace

double psnr(const LumaPlane& ref, const LumaPlane& test, double peak) {
  check_same_dims(ref, test);
  if (!(peak > 0.0)) throw InvalidArgument("psnr peak must be positive");
  if (ref.size() == 0) throw InvalidArgument("psnr of an empty plane");
  const auto a = ref.samples();
  const auto b = test.samples();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = (a[i] - b[i]) * kCodeScale;
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(a.size());
  if (mse == 0.0) return kPsnrIdentical;
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const LumaPlane& ref, const LumaPlane& test,
            const SSIMConfig& cfg) {
  check_same_dims(ref, test);
  if (cfg.k1 <= 0.0 || cfg.k2 <= 0.0) {
    throw InvalidArgument("SSIM constants must be positive");
  }
  if (cfg.window_size < 3 || cfg.window_size % 2 == 0) {
    throw InvalidArgument("SSIM window size must be odd and >= 3");
  }
  if (ref.width() < cfg.window_size || ref.height() < cfg.window_size) {
    throw InvalidArgument("image smaller than the SSIM window");
  }
  const int w = ref.width();
  const int h = ref.height();
  const auto taps = internal::gaussian_taps(cfg.window_size, cfg.window_sigma);
  const std::vector<double> x = to_codes(ref);
  const std::vector<double> y = to_codes(test);
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mu_x = internal::filter_valid(x, w, h, taps);
  const auto mu_y = internal::filter_valid(y, w, h, taps);
  const auto e_xx = internal::filter_valid(xx, w, h, taps);
  const auto e_yy = internal::filter_valid(yy, w, h, taps);
  const auto e_xy = internal::filter_valid(xy, w, h, taps);

  const double c1 = (cfg.k1 * cfg.dynamic_range) * (cfg.k1 * cfg.dynamic_range);
  const double c2 = (cfg.k2 * cfg.dynamic_range) * (cfg.k2 * cfg.dynamic_range);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i];
    const double my = mu_y[i];
    const double vx = e_xx[i] - mx * mx;
    const double vy = e_yy[i] - my * my;
    const double cov = e_xy[i] - mx * my;
    total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
             ((mx * mx + my * my + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(mu_x.size());
}

}  // namespace srbench
