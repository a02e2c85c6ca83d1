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

#include "srbench/niqe.h"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <limits>
#include <mutex>
#include <string>

#include "filter.h"

#ifndef SRBENCH_DATA_DIR
#define SRBENCH_DATA_DIR "data"
#endif

namespace srbench {
namespace {

constexpr double kCodeScale = 255.0;
constexpr int kNormWindow = 7;
constexpr double kNormSigma = 7.0 / 6.0;
constexpr double kPinvTolerance = 1e-10;
constexpr char kModelMagic[8] = {'S', 'R', 'B', 'N', 'I', 'Q', 'E', '\0'};
constexpr std::uint8_t kModelVersion = 1;

const std::vector<double>& norm_taps() {
  static const std::vector<double> taps =
      internal::gaussian_taps(kNormWindow, kNormSigma);
  return taps;
}

// r(a) = G(2/a)^2 / (G(1/a) G(3/a)) over the shape grid.
struct ShapeGrid {
  std::vector<double> alpha;
  std::vector<double> ratio;
};

const ShapeGrid& shape_grid() {
  static const ShapeGrid grid = [] {
    ShapeGrid g;
    const int n = static_cast<int>(
        std::lround((kAggdAlphaMax - kAggdAlphaMin) / kAggdAlphaStep)) + 1;
    g.alpha.resize(n);
    g.ratio.resize(n);
    for (int i = 0; i < n; ++i) {
      const double a = kAggdAlphaMin + i * kAggdAlphaStep;
      g.alpha[i] = a;
      g.ratio[i] = std::exp(2.0 * std::lgamma(2.0 / a) - std::lgamma(1.0 / a) -
                            std::lgamma(3.0 / a));
    }
    return g;
  }();
  return grid;
}

double beta_factor(double alpha) {
  return std::sqrt(std::exp(std::lgamma(1.0 / alpha) - std::lgamma(3.0 / alpha)));
}

RealPlane to_codes(const LumaPlane& plane) {
  RealPlane out{plane.width(), plane.height(),
                std::vector<double>(plane.samples().begin(),
                                    plane.samples().end())};
  for (double& v : out.values) v *= kCodeScale;
  return out;
}

// Gaussian low-pass followed by 2:1 decimation sampled at the centre of each
// 2x2 cell, so the grid stays symmetric under flips.
RealPlane half_scale(const RealPlane& in) {
  const auto lp = internal::filter_replicate(in.values, in.width, in.height,
                                             norm_taps());
  RealPlane out{in.width / 2, in.height / 2, {}};
  out.values.resize(static_cast<std::size_t>(out.width) * out.height);
  for (int y = 0; y < out.height; ++y) {
    const double* r0 = lp.data() + static_cast<std::size_t>(2 * y) * in.width;
    const double* r1 = r0 + in.width;
    for (int x = 0; x < out.width; ++x) {
      out.values[static_cast<std::size_t>(y) * out.width + x] =
          0.25 * ((r0[2 * x] + r0[2 * x + 1]) + (r1[2 * x] + r1[2 * x + 1]));
    }
  }
  return out;
}

RealPlane crop(const RealPlane& in, int width, int height) {
  if (width == in.width && height == in.height) return in;
  RealPlane out{width, height, {}};
  out.values.reserve(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    const auto row = in.values.begin() + static_cast<std::ptrdiff_t>(y) * in.width;
    out.values.insert(out.values.end(), row, row + width);
  }
  return out;
}

// Writes 18 features for one block; false if any fit was degenerate.
bool block_features(const RealPlane& coeff, int x0, int y0, int size,
                    double* out) {
  std::vector<double> block(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      block[static_cast<std::size_t>(y) * size + x] = coeff.at(x0 + x, y0 + y);
    }
  }
  bool ok = true;
  const AGGDParams base = aggd_fit(block);
  ok = ok && !base.degenerate;
  out[0] = base.alpha;
  out[1] = (base.beta_left() + base.beta_right()) / 2.0;

  // Circular neighbour products within the block: H, V, D1, D2.
  static constexpr int kShifts[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
  std::vector<double> prod(block.size());
  for (int s = 0; s < 4; ++s) {
    const int dy = kShifts[s][0];
    const int dx = kShifts[s][1];
    for (int y = 0; y < size; ++y) {
      const int sy = ((y - dy) % size + size) % size;
      for (int x = 0; x < size; ++x) {
        const int sx = ((x - dx) % size + size) % size;
        prod[static_cast<std::size_t>(y) * size + x] =
            block[static_cast<std::size_t>(y) * size + x] *
            block[static_cast<std::size_t>(sy) * size + sx];
      }
    }
    const AGGDParams p = aggd_fit(prod);
    ok = ok && !p.degenerate;
    out[2 + 4 * s] = p.alpha;
    out[3 + 4 * s] = p.mean_offset;
    out[4 + 4 * s] = p.beta_left();
    out[5 + 4 * s] = p.beta_right();
  }
  return ok;
}

bool row_finite(const NiqeFeatureRow& row) {
  return std::all_of(row.begin(), row.end(),
                     [](double v) { return std::isfinite(v); });
}

// Mean and (n - 1)-normalised covariance of the finite rows.
void mvg_fit(const std::vector<NiqeFeatureRow>& rows, Eigen::VectorXd* mean,
             Eigen::MatrixXd* cov, std::size_t* used) {
  constexpr int n = kNiqeFeatureCount;
  std::vector<const NiqeFeatureRow*> good;
  for (const auto& r : rows) {
    if (row_finite(r)) good.push_back(&r);
  }
  *used = good.size();
  *mean = Eigen::VectorXd::Zero(n);
  *cov = Eigen::MatrixXd::Zero(n, n);
  if (good.empty()) return;
  for (const auto* r : good) *mean += Eigen::Map<const Eigen::VectorXd>(r->data(), n);
  *mean /= static_cast<double>(good.size());
  if (good.size() < 2) return;
  for (const auto* r : good) {
    const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(r->data(), n) - *mean;
    *cov += d * d.transpose();
  }
  *cov /= static_cast<double>(good.size() - 1);
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw CorruptStream(path_, "truncated NIQE model");
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= std::uint32_t{static_cast<std::uint8_t>(bytes_[pos_++])} << (8 * i);
    }
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= std::uint64_t{static_cast<std::uint8_t>(bytes_[pos_++])} << (8 * i);
    }
    return std::bit_cast<double>(v);
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 0;
};

}  // namespace

double AGGDParams::beta_left() const { return sigma_left * beta_factor(alpha); }
double AGGDParams::beta_right() const { return sigma_right * beta_factor(alpha); }

MscnResult mscn_codes(const RealPlane& codes) {
  if (codes.width < kNormWindow || codes.height < kNormWindow) {
    throw InvalidArgument("MSCN needs at least 7x7 pixels");
  }
  // Statistics are taken around a pivot sample so that flat regions give
  // exactly zero numerators.
  const double pivot = codes.values.front();
  std::vector<double> d(codes.values.size());
  std::vector<double> d2(codes.values.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = codes.values[i] - pivot;
    d2[i] = d[i] * d[i];
  }
  const auto mu = internal::filter_replicate(d, codes.width, codes.height, norm_taps());
  const auto mu2 = internal::filter_replicate(d2, codes.width, codes.height, norm_taps());
  MscnResult out;
  out.coefficients = {codes.width, codes.height, std::vector<double>(d.size())};
  out.deviation = {codes.width, codes.height, std::vector<double>(d.size())};
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double sigma = std::sqrt(std::abs(mu2[i] - mu[i] * mu[i]));
    out.deviation.values[i] = sigma;
    out.coefficients.values[i] = (d[i] - mu[i]) / (sigma + 1.0);
  }
  return out;
}

MscnResult mscn(const LumaPlane& plane) { return mscn_codes(to_codes(plane)); }

AGGDParams aggd_fit(std::span<const double> samples) {
  if (samples.empty()) throw InvalidArgument("aggd_fit needs samples");
  double left_sq = 0.0, right_sq = 0.0, abs_sum = 0.0, sq_sum = 0.0;
  std::size_t left_n = 0, right_n = 0;
  for (const double v : samples) {
    if (v < 0.0) {
      left_sq += v * v;
      ++left_n;
    } else if (v > 0.0) {
      right_sq += v * v;
      ++right_n;
    }
    abs_sum += std::abs(v);
    sq_sum += v * v;
  }
  AGGDParams p;
  p.sigma_left = left_n ? std::sqrt(left_sq / left_n) : 0.0;
  p.sigma_right = right_n ? std::sqrt(right_sq / right_n) : 0.0;
  if (left_n == 0 || right_n == 0) {
    p.alpha = kAggdAlphaMax;
    p.degenerate = true;
    return p;
  }
  const double n = static_cast<double>(samples.size());
  const double gamma_hat = p.sigma_left / p.sigma_right;
  const double r_hat = (abs_sum / n) * (abs_sum / n) / (sq_sum / n);
  const double g2 = gamma_hat * gamma_hat;
  const double r_norm =
      r_hat * (g2 * gamma_hat + 1.0) * (gamma_hat + 1.0) / ((g2 + 1.0) * (g2 + 1.0));

  const ShapeGrid& grid = shape_grid();
  std::size_t best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.ratio.size(); ++i) {
    const double e = (grid.ratio[i] - r_norm) * (grid.ratio[i] - r_norm);
    if (e < best_err) {
      best_err = e;
      best = i;
    }
  }
  p.alpha = grid.alpha[best];
  p.mean_offset = (p.beta_right() - p.beta_left()) *
                  std::exp(std::lgamma(2.0 / p.alpha) - std::lgamma(1.0 / p.alpha));
  return p;
}

void NIQEModel::validate() const {
  constexpr std::size_t n = kNiqeFeatureCount;
  if (mu.size() != n || sigma.size() != n * n) {
    throw InvalidArgument("NIQE model must hold 36 means and a 36x36 covariance");
  }
  if (patch_size < 8 || patch_size % 2 != 0) {
    throw InvalidArgument("NIQE patch size must be even and >= 8");
  }
  if (!(sharpness_threshold > 0.0 && sharpness_threshold <= 1.0)) {
    throw InvalidArgument("NIQE sharpness threshold must lie in (0, 1]");
  }
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>
      s(sigma.data(), n, n);
  if (!s.allFinite() || !Eigen::Map<const Eigen::VectorXd>(mu.data(), n).allFinite()) {
    throw InvalidArgument("NIQE model contains non-finite values");
  }
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw InvalidArgument("NIQE covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  if (eig.eigenvalues().minCoeff() < -1e-8 * scale) {
    throw InvalidArgument("NIQE covariance is not positive semi-definite");
  }
}

NiqeFeatures niqe_features(const LumaPlane& plane, const NIQEModel& model,
                           PatchSelection selection) {
  const int p = model.patch_size;
  const int cols = plane.width() / p;
  const int rows = plane.height() / p;
  if (cols == 0 || rows == 0) {
    throw InvalidArgument("image " + std::to_string(plane.width()) + "x" +
                          std::to_string(plane.height()) +
                          " is smaller than the NIQE patch size " +
                          std::to_string(p));
  }
  const RealPlane full = crop(to_codes(plane), cols * p, rows * p);
  const MscnResult s1 = mscn_codes(full);
  const MscnResult s2 = mscn_codes(half_scale(full));

  NiqeFeatures out;
  out.total_patches = static_cast<std::size_t>(cols) * rows;
  std::vector<double> sharpness(out.total_patches, 0.0);
  for (int by = 0; by < rows; ++by) {
    for (int bx = 0; bx < cols; ++bx) {
      double acc = 0.0;
      for (int y = 0; y < p; ++y) {
        for (int x = 0; x < p; ++x) acc += s1.deviation.at(bx * p + x, by * p + y);
      }
      sharpness[static_cast<std::size_t>(by) * cols + bx] = acc / (p * p);
    }
  }
  const double max_sharp = *std::max_element(sharpness.begin(), sharpness.end());
  if (!(max_sharp > 0.0)) {
    throw NoSharpPatches(
        "no patch passed NIQE sharpness selection (flat image); lower the "
        "sharpness threshold or supply a textured image");
  }
  const double cut = selection == PatchSelection::kSharp
                        ? model.sharpness_threshold * max_sharp
                        : std::numeric_limits<double>::min();
  const int half = p / 2;
  for (int by = 0; by < rows; ++by) {
    for (int bx = 0; bx < cols; ++bx) {
      if (sharpness[static_cast<std::size_t>(by) * cols + bx] < cut) continue;
      NiqeFeatureRow row;
      bool ok = block_features(s1.coefficients, bx * p, by * p, p, row.data());
      ok = block_features(s2.coefficients, bx * half, by * half, half,
                          row.data() + kNiqeFeaturesPerScale) && ok;
      if (!ok) row.fill(std::numeric_limits<double>::quiet_NaN());
      out.rows.push_back(row);
    }
  }
  return out;
}

double niqe_distance(const NIQEModel& model, std::span<const double> mean,
                     std::span<const double> covariance) {
  constexpr int n = kNiqeFeatureCount;
  if (mean.size() != n || covariance.size() != static_cast<std::size_t>(n) * n) {
    throw InvalidArgument("niqe_distance: feature statistics have wrong size");
  }
  using RowMat = Eigen::Matrix<double, n, n, Eigen::RowMajor>;
  const Eigen::Matrix<double, n, n> pooled =
      (Eigen::Map<const RowMat>(model.sigma.data()) +
       Eigen::Map<const RowMat>(covariance.data())) / 2.0;
  const Eigen::Matrix<double, n, 1> d =
      Eigen::Map<const Eigen::Matrix<double, n, 1>>(model.mu.data()) -
      Eigen::Map<const Eigen::Matrix<double, n, 1>>(mean.data());

  double q = 0.0;
  Eigen::LLT<Eigen::Matrix<double, n, n>> llt(pooled);
  if (llt.info() == Eigen::Success) {
    q = d.dot(llt.solve(d));
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, n, n>> eig(pooled);
    const auto& lambda = eig.eigenvalues();
    const double cutoff = kPinvTolerance * lambda.cwiseAbs().maxCoeff();
    const Eigen::Matrix<double, n, 1> proj = eig.eigenvectors().transpose() * d;
    for (int i = 0; i < n; ++i) {
      if (std::abs(lambda[i]) > cutoff) q += proj[i] * proj[i] / lambda[i];
    }
  }
  return std::sqrt(std::max(q, 0.0));
}

double niqe(const LumaPlane& plane, const NIQEModel& model,
            PatchSelection selection) {
  const NiqeFeatures f = niqe_features(plane, model, selection);
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::size_t used = 0;
  mvg_fit(f.rows, &mean, &cov, &used);
  if (used == 0) {
    throw NoSharpPatches("every selected NIQE patch produced a degenerate fit");
  }
  // Column-major storage of a symmetric matrix reads the same row-major.
  return niqe_distance(model, std::span<const double>(mean.data(), mean.size()),
                       std::span<const double>(cov.data(), cov.size()));
}

PristineFit fit_pristine_model(std::span<const LumaPlane> corpus,
                               int patch_size, double sharpness_threshold) {
  if (corpus.size() < kMinPristineCorpus) {
    throw InvalidArgument("pristine corpus needs at least " +
                          std::to_string(kMinPristineCorpus) + " images, got " +
                          std::to_string(corpus.size()));
  }
  NIQEModel probe;
  probe.patch_size = patch_size;
  probe.sharpness_threshold = sharpness_threshold;
  probe.mu.assign(kNiqeFeatureCount, 0.0);
  probe.sigma.assign(kNiqeFeatureCount * kNiqeFeatureCount, 0.0);

  std::vector<NiqeFeatureRow> all;
  for (const LumaPlane& image : corpus) {
    if (image.width() < patch_size || image.height() < patch_size) {
      throw InvalidArgument("pristine corpus image smaller than the patch size");
    }
    NiqeFeatures f = niqe_features(image, probe, PatchSelection::kSharp);
    all.insert(all.end(), f.rows.begin(), f.rows.end());
  }
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  PristineFit fit;
  mvg_fit(all, &mean, &cov, &fit.patch_count);
  if (fit.patch_count == 0) {
    throw NoSharpPatches("pristine corpus produced no usable patches");
  }
  const double mean_scale = std::max(1.0, mean.cwiseAbs().maxCoeff());
  fit.degenerate = fit.patch_count < 2 ||
                   cov.cwiseAbs().maxCoeff() <= 1e-12 * mean_scale * mean_scale;
  if (fit.degenerate) cov.setZero();
  fit.model = probe;
  fit.model.mu.assign(mean.data(), mean.data() + mean.size());
  fit.model.sigma.assign(cov.data(), cov.data() + cov.size());
  // Symmetrise away rounding so the model validates.
  for (int i = 0; i < kNiqeFeatureCount; ++i) {
    for (int j = i + 1; j < kNiqeFeatureCount; ++j) {
      fit.model.sigma[j * kNiqeFeatureCount + i] =
          fit.model.sigma[i * kNiqeFeatureCount + j];
    }
  }
  return fit;
}

void save_niqe_model(const NIQEModel& model, const std::filesystem::path& path) {
  model.validate();
  std::string bytes(kModelMagic, sizeof(kModelMagic));
  bytes.push_back(static_cast<char>(kModelVersion));
  put_u32(bytes, kNiqeFeatureCount);
  put_u32(bytes, static_cast<std::uint32_t>(model.patch_size));
  put_f64(bytes, model.sharpness_threshold);
  for (double v : model.mu) put_f64(bytes, v);
  for (double v : model.sigma) put_f64(bytes, v);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteFailed(path, "cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw WriteFailed(path, "write error");
}

NIQEModel load_niqe_model(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw FileNotFound(path);
  std::ifstream in(path, std::ios::binary);
  const std::string bytes(std::istreambuf_iterator<char>(in), {});
  if (bytes.size() < sizeof(kModelMagic) ||
      !std::equal(kModelMagic, kModelMagic + sizeof(kModelMagic), bytes.begin())) {
    throw CorruptStream(path, "not a NIQE model file (bad magic)");
  }
  Reader r(bytes, path);
  for (std::size_t i = 0; i < sizeof(kModelMagic); ++i) r.u8();
  const std::uint8_t version = r.u8();
  if (version != kModelVersion) {
    throw UnsupportedFormat(path, "NIQE model version " + std::to_string(version));
  }
  const std::uint32_t n = r.u32();
  if (n != kNiqeFeatureCount) {
    throw CorruptStream(path, "NIQE model feature count " + std::to_string(n));
  }
  NIQEModel model;
  model.patch_size = static_cast<int>(r.u32());
  model.sharpness_threshold = r.f64();
  model.mu.resize(n);
  for (auto& v : model.mu) v = r.f64();
  model.sigma.resize(static_cast<std::size_t>(n) * n);
  for (auto& v : model.sigma) v = r.f64();
  if (!r.done()) throw CorruptStream(path, "trailing bytes after NIQE model");
  try {
    model.validate();
  } catch (const InvalidArgument& e) {
    throw CorruptStream(path, e.what());
  }
  return model;
}

std::filesystem::path default_niqe_model_path() {
  if (const char* env = std::getenv("SRBENCH_NIQE_MODEL"); env && *env) {
    return env;
  }
  return std::filesystem::path(SRBENCH_DATA_DIR) / "niqe_pristine.bin";
}

const NIQEModel& default_niqe_model() {
  static const NIQEModel model = load_niqe_model(default_niqe_model_path());
  return model;
}

}  // namespace srbench
