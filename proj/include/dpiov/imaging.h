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

#ifndef DPIOV_IMAGING_H_
#define DPIOV_IMAGING_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dpiov {

// The image-noise sweep used for the emulation figures.
inline constexpr std::array<double, 6> kSweepEpsilons = {0.005, 0.01, 0.02, 0.05, 0.1, 1.0};

using PixelArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Unit-range image. `pixels` is height x (width * channels), interleaved.
struct ImageMatrix {
  int height = 0;
  int width = 0;
  int channels = 1;  // 1 (PGM) or 3 (PPM)
  PixelArray pixels;

  ImageMatrix() = default;
  ImageMatrix(int h, int w, int c);

  double& at(int y, int x, int c = 0) { return pixels(y, x * channels + c); }
  double at(int y, int x, int c = 0) const { return pixels(y, x * channels + c); }
};

class ImageFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary PGM (P5) / PPM (P6) with maxval <= 255; pixel v maps to v/maxval.
ImageMatrix DecodeNetpbm(const std::string& bytes);
// Canonical "P5\n<w> <h>\n255\n" header; values rounded to v*255.
std::string EncodeNetpbm(const ImageMatrix& img);

ImageMatrix LoadImage(const std::filesystem::path& path);
void SaveImage(const ImageMatrix& img, const std::filesystem::path& path);

// Every pixel plus Laplace(1/epsilon), clamped back to [0, 1].
ImageMatrix DpNoiseImage(const ImageMatrix& img, double epsilon, std::uint64_t seed);

struct Montage {
  ImageMatrix image;
  std::string caption;  // one "panel <i>: <label>" line per image
};

// Single row of equally sized panels separated by 2-pixel white gutters.
Montage MakeMontage(const std::vector<ImageMatrix>& images, const std::vector<std::string>& labels);

double MeanAbsoluteDifference(const ImageMatrix& a, const ImageMatrix& b);
// Peak signal-to-noise ratio in dB for unit peak; +inf for identical images.
double Psnr(const ImageMatrix& a, const ImageMatrix& b);

}  // namespace dpiov

#endif  // DPIOV_IMAGING_H_
