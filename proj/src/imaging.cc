// Copyright 2026 The dpiov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpiov/imaging.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "dpiov/laplace.h"
#include "dpiov/rng.h"

namespace dpiov {
namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string NextToken(const std::string& bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      ++pos;
    } else if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  if (start == pos) {
    throw ImageFormatError("malformed header: unexpected end of file at byte " +
                           std::to_string(pos));
  }
  return bytes.substr(start, pos - start);
}

int HeaderInt(const std::string& bytes, std::size_t& pos, const char* what) {
  const std::size_t at = pos;
  const std::string token = NextToken(bytes, pos);
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used != token.size() || v <= 0) throw std::invalid_argument(what);
    return v;
  } catch (const std::logic_error&) {
    throw ImageFormatError(std::string("malformed header: bad ") + what + " near byte " +
                           std::to_string(at));
  }
}

}  // namespace

ImageMatrix::ImageMatrix(int h, int w, int c)
    : height(h), width(w), channels(c), pixels(PixelArray::Zero(h, w * c)) {
  if (h < 1 || w < 1 || (c != 1 && c != 3)) throw std::invalid_argument("bad image shape");
}

ImageMatrix DecodeNetpbm(const std::string& bytes) {
  std::size_t pos = 0;
  const std::string magic = NextToken(bytes, pos);
  int channels = 0;
  if (magic == "P5") {
    channels = 1;
  } else if (magic == "P6") {
    channels = 3;
  } else {
    throw ImageFormatError("malformed header: expected P5 or P6 magic at byte 0");
  }
  const int width = HeaderInt(bytes, pos, "width");
  const int height = HeaderInt(bytes, pos, "height");
  const int maxval = HeaderInt(bytes, pos, "maxval");
  if (maxval > 255) throw ImageFormatError("only 8-bit images are supported (maxval <= 255)");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw ImageFormatError("malformed header: missing separator at byte " + std::to_string(pos));
  }
  ++pos;  // single whitespace byte before the raster
  const std::size_t needed = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - pos < needed) {
    throw ImageFormatError("truncated payload: expected " + std::to_string(needed) +
                           " bytes from offset " + std::to_string(pos) + ", file ends at byte " +
                           std::to_string(bytes.size()));
  }
  ImageMatrix img(height, width, channels);
  for (int y = 0; y < height; ++y) {
    for (int i = 0; i < width * channels; ++i) {
      const auto v = static_cast<unsigned char>(bytes[pos++]);
      img.pixels(y, i) = static_cast<double>(v) / maxval;
    }
  }
  return img;
}

std::string EncodeNetpbm(const ImageMatrix& img) {
  std::string out = (img.channels == 1 ? "P5\n" : "P6\n") + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(img.pixels.size()));
  for (int y = 0; y < img.height; ++y) {
    for (int i = 0; i < img.width * img.channels; ++i) {
      const double v = std::clamp(img.pixels(y, i), 0.0, 1.0);
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
  }
  return out;
}

ImageMatrix LoadImage(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageFormatError("cannot open image " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return DecodeNetpbm(bytes);
  } catch (const ImageFormatError& e) {
    throw ImageFormatError(path.string() + ": " + e.what());
  }
}

void SaveImage(const ImageMatrix& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image " + path.string());
  const std::string bytes = EncodeNetpbm(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ImageMatrix DpNoiseImage(const ImageMatrix& img, double epsilon, std::uint64_t seed) {
  PrivacyParams{epsilon, true}.Validate();
  ImageMatrix out = img;
  Rng rng(seed);
  const double scale = 1.0 / epsilon;
  for (Eigen::Index y = 0; y < out.pixels.rows(); ++y) {
    for (Eigen::Index i = 0; i < out.pixels.cols(); ++i) {
      out.pixels(y, i) = std::clamp(out.pixels(y, i) + SampleLaplace(scale, rng), 0.0, 1.0);
    }
  }
  return out;
}

Montage MakeMontage(const std::vector<ImageMatrix>& images,
                    const std::vector<std::string>& labels) {
  if (images.empty()) throw std::invalid_argument("montage needs at least one image");
  if (labels.size() != images.size()) {
    throw std::invalid_argument("montage needs one label per image");
  }
  const auto& first = images.front();
  for (const auto& img : images) {
    if (img.height != first.height || img.width != first.width ||
        img.channels != first.channels) {
      throw std::invalid_argument("montage images differ in dimensions");
    }
  }
  constexpr int kGutter = 2;
  const int n = static_cast<int>(images.size());
  Montage m;
  m.image = ImageMatrix(first.height, n * first.width + (n - 1) * kGutter, first.channels);
  m.image.pixels.setOnes();
  const int panel_cols = first.width * first.channels;
  for (int i = 0; i < n; ++i) {
    m.image.pixels.middleCols(i * (first.width + kGutter) * first.channels, panel_cols) =
        images[i].pixels;
    m.caption += "panel " + std::to_string(i + 1) + ": " + labels[i] + "\n";
  }
  return m;
}

double MeanAbsoluteDifference(const ImageMatrix& a, const ImageMatrix& b) {
  if (a.pixels.rows() != b.pixels.rows() || a.pixels.cols() != b.pixels.cols()) {
    throw std::invalid_argument("images differ in dimensions");
  }
  return (a.pixels - b.pixels).abs().mean();
}

double Psnr(const ImageMatrix& a, const ImageMatrix& b) {
  if (a.pixels.rows() != b.pixels.rows() || a.pixels.cols() != b.pixels.cols()) {
    throw std::invalid_argument("images differ in dimensions");
  }
  const double mse = (a.pixels - b.pixels).square().mean();
  if (mse == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace dpiov
