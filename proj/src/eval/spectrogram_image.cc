// Copyright 2026 The spse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "spse/eval/spectrogram_image.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "spse/error.h"

namespace spse::eval {

namespace {

// Anchor colours from floor (black) through purple and orange to pale yellow.
constexpr std::array<std::array<double, 3>, 5> kRamp = {{
    {0, 0, 4}, {81, 18, 124}, {183, 55, 121}, {252, 137, 97}, {252, 253, 191}}};

}  // namespace

std::array<std::uint8_t, 3> LevelColour(double db) {
  const double u = std::clamp((db - kSpectrogramFloorDb) / -kSpectrogramFloorDb, 0.0, 1.0);
  const double pos = u * (kRamp.size() - 1);
  const size_t i = std::min(static_cast<size_t>(pos), kRamp.size() - 2);
  const double f = pos - static_cast<double>(i);
  std::array<std::uint8_t, 3> c;
  for (int k = 0; k < 3; ++k)
    c[k] = static_cast<std::uint8_t>(std::lround(kRamp[i][k] + f * (kRamp[i + 1][k] - kRamp[i][k])));
  return c;
}

Image RenderSpectrogram(const audio::ComplexSpectrogram& s) {
  Image img;
  img.width = s.frames();
  img.height = s.bins();
  img.rgb.resize(static_cast<size_t>(img.width) * img.height * 3);
  double peak = 0.0;
  for (const auto& v : s.data()) peak = std::max(peak, std::abs(v));
  for (int t = 0; t < s.frames(); ++t) {
    for (int f = 0; f < s.bins(); ++f) {
      const double mag = std::abs(s.at(t, f));
      const double db = peak > 0.0 && mag > 0.0 ? 20.0 * std::log10(mag / peak) : kSpectrogramFloorDb;
      const auto c = LevelColour(db);
      std::copy(c.begin(), c.end(),
                img.rgb.begin() + (static_cast<size_t>(s.bins() - 1 - f) * img.width + t) * 3);
    }
  }
  return img;
}

void WritePng(const Image& image, const std::string& path) {
  if (image.width <= 0 || image.height <= 0) throw DataError("WritePng: empty image");
  const std::string tmp = path + ".tmp";
  FILE* fp = std::fopen(tmp.c_str(), "wb");
  if (fp == nullptr) throw DataError("cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    std::remove(tmp.c_str());
    throw DataError("PNG encoding failed for " + path);
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y)
    png_write_row(png, const_cast<png_bytep>(image.pixel(0, y)));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fclose(fp) != 0) {
    std::remove(tmp.c_str());
    throw DataError("cannot write " + path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DataError("cannot write " + path + ": " + ec.message());
}

}  // namespace spse::eval
