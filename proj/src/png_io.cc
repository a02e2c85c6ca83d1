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

#include "srbench/png_io.h"

#include <png.h>

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include "srbench/errors.h"

namespace srbench {
namespace {

enum class DecodeStatus { kOk, kNotPng, kCorrupt, kUnsupported };

struct ReadSource {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
  char message[256];
};

struct Decoded {
  PngInfo info;
  std::vector<std::uint8_t> raw;  // rows as delivered by libpng
};

void read_callback(png_structp png, png_bytep out, png_size_t length) {
  auto* src = static_cast<ReadSource*>(png_get_io_ptr(png));
  if (src->size - src->pos < length) {
    png_error(png, "unexpected end of stream");
  }
  std::memcpy(out, src->data + src->pos, length);
  src->pos += length;
}

void error_callback(png_structp png, png_const_charp message) {
  auto* src = static_cast<ReadSource*>(png_get_error_ptr(png));
  std::snprintf(src->message, sizeof(src->message), "%s", message);
  png_longjmp(png, 1);
}

void warning_callback(png_structp, png_const_charp) {}

// No objects with non-trivial destructors are created between setjmp and any
// libpng call that may longjmp.
DecodeStatus decode(const std::vector<std::uint8_t>& bytes, bool header_only,
                    Decoded* out, ReadSource* src) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    std::snprintf(src->message, sizeof(src->message), "not a PNG stream");
    return DecodeStatus::kNotPng;
  }
  src->data = bytes.data();
  src->size = bytes.size();
  src->pos = 0;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, src,
                                           error_callback, warning_callback);
  if (png == nullptr) return DecodeStatus::kCorrupt;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return DecodeStatus::kCorrupt;
  }
  png_bytep* rows = nullptr;
  if (setjmp(png_jmpbuf(png))) {
    png_free(png, rows);
    png_destroy_read_struct(&png, &info, nullptr);
    return DecodeStatus::kCorrupt;
  }
  png_set_read_fn(png, src, read_callback);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  int channels = 0;
  switch (color_type) {
    case PNG_COLOR_TYPE_GRAY:
    case PNG_COLOR_TYPE_GRAY_ALPHA:
      channels = 1;
      break;
    case PNG_COLOR_TYPE_RGB:
    case PNG_COLOR_TYPE_RGB_ALPHA:
      channels = 3;
      break;
    default:
      break;
  }
  if (channels == 0 || (depth != 8 && depth != 16)) {
    std::snprintf(src->message, sizeof(src->message),
                  "unsupported PNG colour type %d at bit depth %d", color_type,
                  depth);
    png_destroy_read_struct(&png, &info, nullptr);
    return DecodeStatus::kUnsupported;
  }
  out->info.width = static_cast<int>(png_get_image_width(png, info));
  out->info.height = static_cast<int>(png_get_image_height(png, info));
  out->info.channels = channels;
  out->info.bit_depth = depth;
  if (header_only) {
    png_destroy_read_struct(&png, &info, nullptr);
    return DecodeStatus::kOk;
  }

  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const std::size_t row_bytes = png_get_rowbytes(png, info);
  const std::size_t height = out->info.height;
  out->raw.resize(row_bytes * height);
  rows = static_cast<png_bytep*>(png_malloc(png, height * sizeof(png_bytep)));
  for (std::size_t y = 0; y < height; ++y) {
    rows[y] = out->raw.data() + y * row_bytes;
  }
  png_read_image(png, rows);
  png_read_end(png, nullptr);
  png_free(png, rows);
  png_destroy_read_struct(&png, &info, nullptr);
  return DecodeStatus::kOk;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw FileNotFound(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

Decoded decode_or_throw(const std::filesystem::path& path, bool header_only) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  auto decoded = std::make_unique<Decoded>();
  ReadSource src{};
  switch (decode(bytes, header_only, decoded.get(), &src)) {
    case DecodeStatus::kOk:
      return std::move(*decoded);
    case DecodeStatus::kUnsupported:
      throw UnsupportedFormat(path, src.message);
    case DecodeStatus::kNotPng:
    case DecodeStatus::kCorrupt:
      break;
  }
  throw CorruptStream(path, std::string("corrupt PNG stream: ") + src.message);
}

struct WriteSink {
  std::vector<std::uint8_t> bytes;
  char message[256];
};

void write_callback(png_structp png, png_bytep data, png_size_t length) {
  auto* sink = static_cast<WriteSink*>(png_get_io_ptr(png));
  sink->bytes.insert(sink->bytes.end(), data, data + length);
}

void flush_callback(png_structp) {}

void write_error_callback(png_structp png, png_const_charp message) {
  auto* sink = static_cast<WriteSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof(sink->message), "%s", message);
  png_longjmp(png, 1);
}

bool encode(const std::vector<std::uint8_t>& raw, int width, int height,
            int channels, int depth, WriteSink* sink) {
  png_structp png = png_create_write_struct(
      PNG_LIBPNG_VER_STRING, sink, write_error_callback, warning_callback);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, sink, write_callback, flush_callback);
  png_set_IHDR(png, info, width, height, depth,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  // zlib level; the default (6) is about 3x slower on 2K frames.
  png_set_compression_level(png, 3);
  png_write_info(png, info);
  const std::size_t row_bytes =
      static_cast<std::size_t>(width) * channels * (depth / 8);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(raw.data() + y * row_bytes));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

ImageBuffer load_png(const std::filesystem::path& path) {
  Decoded d = decode_or_throw(path, /*header_only=*/false);
  const PngInfo& info = d.info;
  ImageBuffer image(info.width, info.height, info.channels);
  auto samples = image.samples();
  if (info.bit_depth == 8) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      samples[i] = d.raw[i] / 255.0;
    }
  } else {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const unsigned code = (unsigned{d.raw[2 * i]} << 8) | d.raw[2 * i + 1];
      samples[i] = code / 65535.0;
    }
  }
  return image;
}

PngInfo read_png_info(const std::filesystem::path& path) {
  return decode_or_throw(path, /*header_only=*/true).info;
}

void save_png(const ImageBuffer& image, const std::filesystem::path& path,
              int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw InvalidArgument("save_png supports bit depth 8 or 16");
  }
  if (image.empty()) throw InvalidArgument("cannot save an empty image");
  const auto samples = image.samples();
  std::vector<std::uint8_t> raw;
  if (bit_depth == 8) {
    raw.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      raw[i] = quantize_code(samples[i]);
    }
  } else {
    raw.resize(samples.size() * 2);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const std::uint16_t code = quantize_code16(samples[i]);
      raw[2 * i] = static_cast<std::uint8_t>(code >> 8);
      raw[2 * i + 1] = static_cast<std::uint8_t>(code & 0xff);
    }
  }
  auto sink = std::make_unique<WriteSink>();
  sink->message[0] = '\0';
  if (!encode(raw, image.width(), image.height(), image.channels(), bit_depth,
              sink.get())) {
    throw WriteFailed(path, std::string("PNG encoding failed: ") +
                                sink->message);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteFailed(path, "cannot open for writing");
  out.write(reinterpret_cast<const char*>(sink->bytes.data()),
            static_cast<std::streamsize>(sink->bytes.size()));
  if (!out) throw WriteFailed(path, "write error");
}

}  // namespace srbench
