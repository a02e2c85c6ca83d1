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

#include <png.h>

#include <cmath>
#include <cstdio>

#include <gtest/gtest.h>

#include "srbench/errors.h"
#include "srbench/image.h"
#include "srbench/png_io.h"
#include "test_util.h"

namespace srbench {
namespace {

using testing::TempDir;

// Minimal libpng writer for layouts save_png never produces.
void write_raw_png(const std::filesystem::path& path, int w, int h, int color_type,
                   int bit_depth, const std::vector<png_byte>& rows,
                   const std::vector<png_color>& palette = {}) {
  FILE* f = std::fopen(path.c_str(), "wb");
  ASSERT_NE(f, nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(f);
    FAIL() << "libpng write failed";
  }
  png_init_io(png, f);
  png_set_IHDR(png, info, w, h, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  if (!palette.empty()) {
    png_set_PLTE(png, info, palette.data(), static_cast<int>(palette.size()));
  }
  png_write_info(png, info);
  const std::size_t stride = rows.size() / h;
  for (int y = 0; y < h; ++y) {
    png_write_row(png, const_cast<png_bytep>(rows.data() + y * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
}

TEST(ImageBuffer, RejectsBadShapes) {
  EXPECT_THROW(ImageBuffer(4, 4, 2), InvalidArgument);
  EXPECT_THROW(ImageBuffer(-1, 4, 3), InvalidArgument);
  EXPECT_THROW(ImageBuffer(2, 2, 3, std::vector<double>(5)), InvalidArgument);
}

TEST(ImageBuffer, InterleavedLayout) {
  ImageBuffer img(3, 2, 3);
  img.at(2, 1, 1) = 0.5;
  EXPECT_EQ(img.samples()[(1 * 3 + 2) * 3 + 1], 0.5);
}

TEST(Luma, StudioSwingEndpoints) {
  ImageBuffer img(3, 1, 3);
  for (int c = 0; c < 3; ++c) img.at(1, 0, c) = 1.0;
  img.at(2, 0, 0) = 1.0;
  const LumaPlane y = rgb_to_luma(img);
  EXPECT_NEAR(y.at(0, 0), 16.0 / 255.0, 1e-15);
  EXPECT_NEAR(y.at(1, 0), 235.0 / 255.0, 1e-12);
  EXPECT_NEAR(y.at(2, 0), (16.0 + 65.481) / 255.0, 1e-15);
}

TEST(Luma, CoefficientsPerChannel) {
  const double coeff[3] = {65.481, 128.553, 24.966};
  for (int c = 0; c < 3; ++c) {
    ImageBuffer img(1, 1, 3);
    img.at(0, 0, c) = 0.25;
    EXPECT_NEAR(rgb_to_luma(img).at(0, 0), (16.0 + 0.25 * coeff[c]) / 255.0, 1e-15);
  }
}

TEST(Luma, RejectsGrayAndPassesItThroughToLuma) {
  ImageBuffer gray(2, 2, 1, 0.3);
  EXPECT_THROW(rgb_to_luma(gray), InvalidArgument);
  EXPECT_EQ(to_luma(gray).at(1, 1), 0.3);
}

TEST(Luma, StaysInUnitRange) {
  const ImageBuffer img = testing::random_image(32, 32, 3, 7);
  const LumaPlane y = rgb_to_luma(img);
  for (double v : y.samples()) {
    EXPECT_GE(v, 16.0 / 255.0 - 1e-12);
    EXPECT_LE(v, 235.0 / 255.0 + 1e-12);
  }
}

TEST(Shave, DropsMarginOnEverySide) {
  LumaPlane p(10, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 10; ++x) p.at(x, y) = y * 10 + x;
  const LumaPlane s = shave_border(p, 2);
  ASSERT_EQ(s.width(), 6);
  ASSERT_EQ(s.height(), 4);
  EXPECT_EQ(s.at(0, 0), 22);
  EXPECT_EQ(s.at(5, 3), 57);
  EXPECT_EQ(shave_border(p, 0), p);
}

TEST(Shave, RejectsMarginThatEatsThePlane) {
  LumaPlane p(8, 8);
  EXPECT_THROW(shave_border(p, 4), InvalidArgument);
  EXPECT_THROW(shave_border(p, -1), InvalidArgument);
  EXPECT_NO_THROW(shave_border(p, 3));
}

TEST(Quantize, RoundsHalfAwayFromZero) {
  EXPECT_EQ(quantize_code(0.0), 0);
  EXPECT_EQ(quantize_code(1.0), 255);
  EXPECT_EQ(quantize_code(2.5 / 255.0), 3);
  EXPECT_EQ(quantize_code(2.4999 / 255.0), 2);
  EXPECT_EQ(quantize_code(-0.3), 0);
  EXPECT_EQ(quantize_code(1.7), 255);
  EXPECT_EQ(quantize_code16(1.0), 65535);
  EXPECT_EQ(quantize_code16(0.5), 32768);
}

TEST(Quantize, IsIdempotent) {
  LumaPlane p(16, 16);
  const ImageBuffer r = testing::random_image(16, 16, 1, 3);
  std::copy(r.samples().begin(), r.samples().end(), p.samples().begin());
  const LumaPlane q = quantize_8bit(p);
  EXPECT_EQ(quantize_8bit(q), q);
  for (double v : q.samples()) EXPECT_EQ(v * 255.0, std::round(v * 255.0));
}

TEST(CenterCrop, OddRemainderComesOffRightAndBottom) {
  ImageBuffer img(7, 5, 1);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 7; ++x) img.at(x, y) = y * 7 + x;
  const ImageBuffer c = center_crop(img, 4, 2);
  // offsets (7-4)/2 = 1 and (5-2)/2 = 1
  EXPECT_EQ(c.at(0, 0), 8);
  EXPECT_EQ(c.at(3, 1), 18);
  EXPECT_THROW(center_crop(img, 8, 5), InvalidArgument);
}

TEST(Png, RoundTripsEightBitRgbExactly) {
  TempDir dir;
  const ImageBuffer img = testing::random_codes(37, 23, 3, 11);
  save_png(img, dir / "a.png");
  const ImageBuffer back = load_png(dir / "a.png");
  EXPECT_EQ(back, img);
  const PngInfo info = read_png_info(dir / "a.png");
  EXPECT_EQ(info.width, 37);
  EXPECT_EQ(info.height, 23);
  EXPECT_EQ(info.channels, 3);
  EXPECT_EQ(info.bit_depth, 8);
}

TEST(Png, RoundTripsSixteenBitGray) {
  TempDir dir;
  ImageBuffer img(9, 4, 1);
  for (std::size_t i = 0; i < img.samples().size(); ++i) {
    img.samples()[i] = static_cast<double>(i * 1021 % 65536) / 65535.0;
  }
  save_png(img, dir / "g.png", 16);
  EXPECT_EQ(load_png(dir / "g.png"), img);
  EXPECT_EQ(read_png_info(dir / "g.png").bit_depth, 16);
}

TEST(Png, SavingQuantizesHalfAwayFromZero) {
  TempDir dir;
  ImageBuffer img(2, 1, 1);
  img.at(0, 0) = 10.5 / 255.0;
  img.at(1, 0) = 1.2;
  save_png(img, dir / "q.png");
  const ImageBuffer back = load_png(dir / "q.png");
  EXPECT_EQ(back.at(0, 0), 11.0 / 255.0);
  EXPECT_EQ(back.at(1, 0), 1.0);
}

TEST(Png, DropsAlpha) {
  TempDir dir;
  std::vector<png_byte> rows = {10, 20, 30, 255, 40, 50, 60, 0};
  write_raw_png(dir / "rgba.png", 2, 1, PNG_COLOR_TYPE_RGBA, 8, rows);
  const ImageBuffer img = load_png(dir / "rgba.png");
  ASSERT_EQ(img.channels(), 3);
  EXPECT_EQ(img.at(1, 0, 2), 60.0 / 255.0);

  std::vector<png_byte> ga = {100, 7, 200, 9};
  write_raw_png(dir / "ga.png", 2, 1, PNG_COLOR_TYPE_GRAY_ALPHA, 8, ga);
  const ImageBuffer g = load_png(dir / "ga.png");
  ASSERT_EQ(g.channels(), 1);
  EXPECT_EQ(g.at(1, 0), 200.0 / 255.0);
}

TEST(Png, RejectsPalette) {
  TempDir dir;
  std::vector<png_color> palette = {{0, 0, 0}, {255, 255, 255}};
  write_raw_png(dir / "p.png", 2, 1, PNG_COLOR_TYPE_PALETTE, 8, {0, 1}, palette);
  EXPECT_THROW(load_png(dir / "p.png"), UnsupportedFormat);
}

TEST(Png, ReportsMissingAndCorruptFiles) {
  TempDir dir;
  EXPECT_THROW(load_png(dir / "nope.png"), FileNotFound);
  testing::write_bytes(dir / "junk.png", "definitely not a png");
  EXPECT_THROW(load_png(dir / "junk.png"), CorruptStream);

  save_png(testing::random_codes(64, 64, 3, 2), dir / "ok.png");
  std::string bytes = testing::read_bytes(dir / "ok.png");
  bytes.resize(bytes.size() / 2);
  testing::write_bytes(dir / "trunc.png", bytes);
  EXPECT_THROW(load_png(dir / "trunc.png"), CorruptStream);
  try {
    load_png(dir / "trunc.png");
  } catch (const IoError& e) {
    EXPECT_EQ(e.path(), dir / "trunc.png");
  }
}

TEST(Png, WriteFailureNamesThePath) {
  TempDir dir;
  EXPECT_THROW(save_png(ImageBuffer(2, 2, 1), dir / "no" / "such" / "dir.png"),
               WriteFailed);
}

TEST(Png, LoadsTheNaturalFixtures) {
  for (const auto& path : testing::natural_images()) {
    const ImageBuffer img = load_png(path);
    EXPECT_GT(img.width(), 96) << path;
    EXPECT_GT(img.height(), 96) << path;
  }
  EXPECT_EQ(testing::natural_images().size(), 10u);
}

}  // namespace
}  // namespace srbench
