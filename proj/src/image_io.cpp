// Copyright 2026 The bevhd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <png.h>

#include "bevhd/feature_viz.hpp"

namespace bevhd
{

std::string encode_ppm(const RgbImage & img)
{
  std::string out =
    "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char *>(img.pixels.data()), img.pixels.size());
  return out;
}

RgbImage decode_ppm(std::string_view bytes)
{
  std::size_t pos = 0;
  auto skip_space = [&] {
      while (pos < bytes.size()) {
        if (bytes[pos] == '#') {
          while (pos < bytes.size() && bytes[pos] != '\n') {
            ++pos;
          }
        } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
          ++pos;
        } else {
          break;
        }
      }
    };
  auto read_int = [&]() -> long {
      skip_space();
      long v = 0;
      std::size_t start = pos;
      while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
        v = v * 10 + (bytes[pos] - '0');
        if (v > 1'000'000) {
          throw FormatError("ppm: header value too large");
        }
        ++pos;
      }
      if (pos == start) {
        throw FormatError("ppm: malformed header");
      }
      return v;
    };

  if (bytes.substr(0, 2) != "P6") {
    throw FormatError("ppm: expected P6 magic");
  }
  pos = 2;
  const long w = read_int();
  const long h = read_int();
  const long maxval = read_int();
  if (maxval != 255) {
    throw FormatError("ppm: only maxval 255 is supported");
  }
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw FormatError("ppm: missing header terminator");
  }
  ++pos;
  const std::size_t need = 3 * static_cast<std::size_t>(w) * h;
  if (bytes.size() - pos != need) {
    throw FormatError("ppm: pixel payload size mismatch");
  }
  RgbImage img(static_cast<int>(h), static_cast<int>(w));
  std::copy(bytes.begin() + pos, bytes.end(), img.pixels.begin());
  return img;
}

void write_ppm(const RgbImage & img, const std::string & path)
{
  std::ofstream out(path, std::ios::binary);
  const std::string bytes = encode_ppm(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
}

RgbImage read_ppm(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_ppm(ss.str());
}

void write_png(const RgbImage & img, const std::string & path)
{
  std::unique_ptr<FILE, int (*)(FILE *)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) {
    throw std::runtime_error("cannot write " + path);
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng failed writing " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(
    png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
    PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < img.height; ++r) {
    png_write_row(png, img.pixels.data() + 3 * static_cast<std::size_t>(r) * img.width);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace bevhd
