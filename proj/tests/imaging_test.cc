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

#include <cmath>
#include <filesystem>

#include "gtest/gtest.h"

namespace dpiov {
namespace {

ImageMatrix Gradient(int h, int w, int c) {
  ImageMatrix img(h, w, c);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int k = 0; k < c; ++k) img.at(y, x, k) = ((x * 7 + y * 3 + k * 50) % 256) / 255.0;
    }
  }
  return img;
}

TEST(NetpbmTest, RoundTripsGrayAndColor) {
  for (int c : {1, 3}) {
    const ImageMatrix img = Gradient(5, 7, c);
    const std::string bytes = EncodeNetpbm(img);
    EXPECT_EQ(bytes.substr(0, 3), c == 1 ? "P5\n" : "P6\n");
    const ImageMatrix back = DecodeNetpbm(bytes);
    EXPECT_EQ(back.channels, c);
    EXPECT_LT((back.pixels - img.pixels).abs().maxCoeff(), 1e-12);
    EXPECT_EQ(EncodeNetpbm(back), bytes);
  }
}

TEST(NetpbmTest, AcceptsCommentsAndSmallMaxval) {
  const std::string bytes = std::string("P5\n# made by hand\n2 1\n3\n") + '\0' + '\3';
  const ImageMatrix img = DecodeNetpbm(bytes);
  EXPECT_EQ(img.width, 2);
  EXPECT_EQ(img.at(0, 0), 0.0);
  EXPECT_EQ(img.at(0, 1), 1.0);
}

TEST(NetpbmTest, ReportsMalformedInput) {
  EXPECT_THROW(DecodeNetpbm("P3\n1 1\n255\n0"), ImageFormatError);
  EXPECT_THROW(DecodeNetpbm("P5\n1 1\n65535\n\0\0"), ImageFormatError);
  EXPECT_THROW(DecodeNetpbm("P5\nx 1\n255\n\0"), ImageFormatError);
  try {
    DecodeNetpbm("P5\n4 4\n255\nabc");
    FAIL() << "expected ImageFormatError";
  } catch (const ImageFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("truncated payload"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("offset 11"), std::string::npos) << e.what();
  }
}

TEST(NetpbmTest, MissingFile) {
  EXPECT_THROW(LoadImage("/nonexistent/dir/x.pgm"), ImageFormatError);
}

TEST(NoiseImageTest, StaysInRangeAndIsSeeded) {
  const ImageMatrix img = Gradient(16, 16, 1);
  const ImageMatrix a = DpNoiseImage(img, 0.1, 3);
  EXPECT_GE(a.pixels.minCoeff(), 0.0);
  EXPECT_LE(a.pixels.maxCoeff(), 1.0);
  EXPECT_EQ(a.pixels.matrix(), DpNoiseImage(img, 0.1, 3).pixels.matrix());
  EXPECT_NE(a.pixels.matrix(), DpNoiseImage(img, 0.1, 4).pixels.matrix());
  EXPECT_THROW(DpNoiseImage(img, 0.0, 1), std::invalid_argument);
}

TEST(NoiseImageTest, LargeEpsilonIsNearlyIdentity) {
  const ImageMatrix img = Gradient(32, 32, 3);
  const ImageMatrix noised = DpNoiseImage(img, 1000, 1);
  // Laplace(0.001) has mean magnitude 0.001; clamping only shrinks it.
  EXPECT_LT(MeanAbsoluteDifference(img, noised), 0.0015);
  EXPECT_GT(Psnr(img, noised), 55);
}

TEST(NoiseImageTest, MetricsMatchDefinitions) {
  ImageMatrix a(1, 2, 1), b(1, 2, 1);
  a.at(0, 0) = 0.5;
  b.at(0, 0) = 0.3;
  b.at(0, 1) = 0.1;
  EXPECT_NEAR(MeanAbsoluteDifference(a, b), 0.15, 1e-12);
  EXPECT_NEAR(Psnr(a, b), 10 * std::log10(1 / ((0.04 + 0.01) / 2)), 1e-12);
  EXPECT_TRUE(std::isinf(Psnr(a, a)));
  EXPECT_THROW(Psnr(a, ImageMatrix(2, 2, 1)), std::invalid_argument);
}

TEST(MontageTest, LaysPanelsOutWithGutters) {
  const ImageMatrix p = Gradient(4, 3, 1);
  ImageMatrix q(4, 3, 1);
  const Montage m = MakeMontage({p, q}, {"original", "eps=1"});
  EXPECT_EQ(m.image.width, 3 + 2 + 3);
  EXPECT_EQ(m.image.height, 4);
  EXPECT_EQ(m.image.at(1, 3), 1.0);  // gutter is white
  EXPECT_EQ(m.image.at(1, 5), 0.0);
  EXPECT_EQ(m.image.at(2, 1), p.at(2, 1));
  EXPECT_EQ(m.caption, "panel 1: original\npanel 2: eps=1\n");
  EXPECT_THROW(MakeMontage({p, Gradient(4, 4, 1)}, {"a", "b"}), std::invalid_argument);
  EXPECT_THROW(MakeMontage({p}, {}), std::invalid_argument);
}

TEST(NoiseImageTest, SaveAndLoad) {
  const auto path = std::filesystem::temp_directory_path() / "dpiov_imaging_test.ppm";
  const ImageMatrix img = Gradient(6, 4, 3);
  SaveImage(img, path);
  EXPECT_LT((LoadImage(path).pixels - img.pixels).abs().maxCoeff(), 1e-12);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace dpiov
