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

// Natural Image Quality Evaluator.
//
// Pipeline: MSCN coefficients (7x7 Gaussian, sigma 7/6, 0-255 scale) ->
// 96x96 patches at two scales -> AGGD fits of the coefficients and of four
// neighbour-product orientations (18 features per scale) -> multivariate
// Gaussian fit over the sharp patches -> distance to a pristine model.

#ifndef SRBENCH_NIQE_H_
#define SRBENCH_NIQE_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "srbench/errors.h"
#include "srbench/image.h"

namespace srbench {

inline constexpr int kNiqeFeaturesPerScale = 18;
inline constexpr int kNiqeFeatureCount = 2 * kNiqeFeaturesPerScale;

// Unbounded real-valued plane (MSCN coefficients, deviation fields).
struct RealPlane {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
};

struct MscnResult {
  RealPlane coefficients;
  RealPlane deviation;  // local Gaussian-weighted standard deviation
};

// (I - mu) / (sigma + 1) on the 0-255 scale with edge replication.
MscnResult mscn(const LumaPlane& plane);
MscnResult mscn_codes(const RealPlane& codes);

struct AGGDParams {
  double alpha = 0.0;        // shape, on the grid 0.2:0.001:10
  double sigma_left = 0.0;   // RMS of the negative samples
  double sigma_right = 0.0;  // RMS of the positive samples
  double mean_offset = 0.0;  // (beta_r - beta_l) * G(2/a) / G(1/a)
  bool degenerate = false;   // a side had no samples; alpha is the grid max

  // Scale parameters of the two half-densities.
  double beta_left() const;
  double beta_right() const;
};

inline constexpr double kAggdAlphaMin = 0.2;
inline constexpr double kAggdAlphaMax = 10.0;
inline constexpr double kAggdAlphaStep = 0.001;

// Moment-matching AGGD estimate. Throws InvalidArgument on empty input.
AGGDParams aggd_fit(std::span<const double> samples);

struct NIQEModel {
  std::vector<double> mu;     // kNiqeFeatureCount
  std::vector<double> sigma;  // row-major kNiqeFeatureCount^2
  int patch_size = 96;
  double sharpness_threshold = 0.75;

  // Checks dimensions, symmetry and positive semi-definiteness.
  void validate() const;
};

using NiqeFeatureRow = std::array<double, kNiqeFeatureCount>;

struct NiqeFeatures {
  std::vector<NiqeFeatureRow> rows;  // one per selected patch
  std::size_t total_patches = 0;     // patches before sharpness selection
};

// Raised when no patch survives sharpness selection.
class NoSharpPatches : public Error {
 public:
  using Error::Error;
};

enum class PatchSelection {
  kSharp,    // deviation average >= threshold * max (pristine fitting)
  kNonFlat,  // every patch with nonzero deviation (quality scoring)
};

// Throws NoSharpPatches when nothing is selected.
NiqeFeatures niqe_features(const LumaPlane& plane, const NIQEModel& model,
                           PatchSelection selection = PatchSelection::kSharp);

// Distance between the model and an MVG fit (mean, covariance).
double niqe_distance(const NIQEModel& model, std::span<const double> mean,
                     std::span<const double> covariance);

// Scores every non-flat patch; the sharpness threshold only shapes the
// pristine statistics.
double niqe(const LumaPlane& plane, const NIQEModel& model,
            PatchSelection selection = PatchSelection::kNonFlat);

struct PristineFit {
  NIQEModel model;
  std::size_t patch_count = 0;
  bool degenerate = false;  // covariance numerically zero
};

inline constexpr std::size_t kMinPristineCorpus = 50;

PristineFit fit_pristine_model(std::span<const LumaPlane> corpus,
                               int patch_size = 96,
                               double sharpness_threshold = 0.75);

// Binary model container; layout in docs/niqe-model-format.md.
void save_niqe_model(const NIQEModel& model, const std::filesystem::path& path);
NIQEModel load_niqe_model(const std::filesystem::path& path);

// $SRBENCH_NIQE_MODEL if set, otherwise the model shipped in data/.
std::filesystem::path default_niqe_model_path();
const NIQEModel& default_niqe_model();

}  // namespace srbench

#endif  // SRBENCH_NIQE_H_
