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

#ifndef SRBENCH_PNG_IO_H_
#define SRBENCH_PNG_IO_H_

#include <filesystem>

#include "srbench/image.h"

namespace srbench {

struct PngInfo {
  int width = 0;
  int height = 0;
  int channels = 0;  // after alpha stripping
  int bit_depth = 0;
};

// Loads an 8- or 16-bit grayscale/RGB PNG (alpha is dropped) and normalises
// samples to code / (2^depth - 1). Throws FileNotFound, UnsupportedFormat or
// CorruptStream.
ImageBuffer load_png(const std::filesystem::path& path);

// Reads only the header. Same error contract as load_png.
PngInfo read_png_info(const std::filesystem::path& path);

// Writes with round-half-away-from-zero quantisation. bit_depth is 8 or 16.
void save_png(const ImageBuffer& image, const std::filesystem::path& path,
              int bit_depth = 8);

}  // namespace srbench

#endif  // SRBENCH_PNG_IO_H_
