// Copyright 2026 The mvflow Authors
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

#include "mvflow/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "mvflow/errors.h"

namespace mvflow {
namespace {

DenseFlowField Constant(int w, int h, FlowVector v) {
  DenseFlowField f(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f.set(x, y, v);
  }
  return f;
}

TEST_CASE("summary: order statistics and empty input") {
  const std::vector<double> odd = {3.0, 1.0, 2.0};
  CHECK(Summarize(std::span<const double>(odd)).median == 2.0);
  const std::vector<float> errors = {0.0f, 0.0f, 3.0f, 5.0f};
  const MetricSummary s = Summarize(std::span<const float>(errors));
  CHECK(s.median == 1.5);
  CHECK(s.mean == 2.0);
  CHECK(s.count == 4);
  const MetricSummary empty = Summarize(std::span<const float>());
  CHECK(std::isnan(empty.median));
  CHECK(std::isnan(empty.mean));
  CHECK(empty.count == 0);
}

TEST_CASE("epe: 3-4-5 and identity") {
  const auto gt = Constant(4, 3, {0.0f, 0.0f});
  const PixelMask valid(4, 3, true);
  const EpeResult r = Epe(Constant(4, 3, {3.0f, 4.0f}), gt, valid);
  CHECK(r.summary.median == 5.0);
  CHECK(r.summary.mean == 5.0);
  for (const float e : r.per_pixel) CHECK(e == 5.0f);
  const EpeResult same = Epe(gt, gt, valid);
  CHECK(same.summary.mean == 0.0);
}

TEST_CASE("epe: four pixels with errors 0, 0, 3, 5") {
  DenseFlowField pred(2, 2);
  pred.set(1, 1, {3.0f, 4.0f});
  pred.set(0, 1, {0.0f, 3.0f});
  const EpeResult r = Epe(pred, DenseFlowField(2, 2), PixelMask(2, 2, true));
  CHECK(r.summary.median == 1.5);
  CHECK(r.summary.mean == 2.0);
}

TEST_CASE("epe: invalid pixels are excluded and marked NaN") {
  DenseFlowField gt(2, 1);
  gt.set(1, 0, {std::numeric_limits<float>::quiet_NaN(), 0.0f});
  const PixelMask valid = ValidMaskFromGroundTruth(gt);
  CHECK(valid.CountTrue() == 1);
  const EpeResult r = Epe(Constant(2, 1, {1.0f, 0.0f}), gt, valid);
  CHECK(r.summary.count == 1);
  CHECK(r.per_pixel[0] == 1.0f);
  CHECK(std::isnan(r.per_pixel[1]));
}

TEST_CASE("epe: dimension mismatch") {
  CHECK_THROWS_AS(Epe(DenseFlowField(2, 2), DenseFlowField(2, 3), PixelMask(2, 3, true)),
                  DimensionError);
}

TEST_CASE("epe is symmetric") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<float> value(-10.0f, 10.0f);
  DenseFlowField a(9, 7);
  DenseFlowField b(9, 7);
  for (float& v : a.data()) v = value(rng);
  for (float& v : b.data()) v = value(rng);
  const PixelMask valid(9, 7, true);
  CHECK(Epe(a, b, valid).per_pixel == Epe(b, a, valid).per_pixel);
}

TEST_CASE("mcmse: identical frames with zero flow") {
  GrayImage img(5, 4);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i * 7);
  CHECK(Mcmse(DenseFlowField(5, 4), img, img) == 0.0);
}

TEST_CASE("mcmse: constant offset of 10") {
  const GrayImage prev(6, 6, 100);
  const GrayImage cur(6, 6, 110);
  CHECK(Mcmse(DenseFlowField(6, 6), prev, cur) == 100.0);
}

TEST_CASE("mcmse: one pixel shift, only the clamped column differs") {
  // cur(x, y) = prev(x + 1, y) in backward form; flow (1, 0) samples
  // prev at x + 1, clamped at the right edge.
  const int w = 8;
  const int h = 3;
  GrayImage prev(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) prev.at(x, y) = static_cast<std::uint8_t>(10 * x + y);
  }
  GrayImage cur(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) cur.at(x, y) = static_cast<std::uint8_t>(10 * (x + 1) + y);
  }
  // Warped column w-1 reads prev(w-1) = 10(w-1)+y, cur holds 10w+y: residual 10.
  const double expected = static_cast<double>(h) * 100.0 / (w * h);
  CHECK(Mcmse(Constant(w, h, {1.0f, 0.0f}), prev, cur) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("mcmse: dimension mismatch") {
  CHECK_THROWS_AS(Mcmse(DenseFlowField(2, 2), GrayImage(2, 2), GrayImage(3, 2)),
                  DimensionError);
  CHECK_THROWS_AS(Mcmse(DenseFlowField(3, 2), GrayImage(2, 2), GrayImage(2, 2)),
                  DimensionError);
}

TEST_CASE("coverage examples") {
  const PixelMask valid(8, 8, true);
  const auto gt = Constant(8, 8, {1.0f, 0.0f});
  CHECK(Coverage(gt, gt, valid) == 100.0);
  CHECK(Coverage(DenseFlowField(8, 8), gt, valid) == 0.0);
  CHECK(std::isnan(Coverage(gt, DenseFlowField(8, 8), valid)));

  DenseFlowField gt10(8, 8);
  DenseFlowField pred(8, 8);
  for (int i = 0; i < 10; ++i) gt10.set(i % 8, i / 8, {0.0f, 2.0f});
  for (int i = 0; i < 7; ++i) pred.set(i % 8, i / 8, {1.0f, 1.0f});
  for (int i = 20; i < 30; ++i) pred.set(i % 8, i / 8, {1.0f, 1.0f});
  CHECK(Coverage(pred, gt10, valid) == 70.0);
}

TEST_CASE("coverage threshold is strict") {
  const PixelMask valid(1, 1, true);
  const auto at_eps = Constant(1, 1, {0.0625f, 0.0f});
  const auto moving = Constant(1, 1, {1.0f, 0.0f});
  CHECK(Coverage(at_eps, moving, valid) == 0.0);
  CHECK(Coverage(at_eps, moving, valid, 0.0) == 100.0);
  CHECK_THROWS_AS(Coverage(at_eps, moving, valid, -1.0), InputError);
}

TEST_CASE("magnitude bin edges") {
  const MagnitudeBins bins;
  CHECK(ClassifyMagnitude(0.0, bins) == MagnitudeBin::kShort);
  CHECK(ClassifyMagnitude(std::nextafter(10.0, 0.0), bins) == MagnitudeBin::kShort);
  CHECK(ClassifyMagnitude(10.0, bins) == MagnitudeBin::kMedium);
  CHECK(ClassifyMagnitude(std::nextafter(40.0, 0.0), bins) == MagnitudeBin::kMedium);
  CHECK(ClassifyMagnitude(40.0, bins) == MagnitudeBin::kBig);
}

TEST_CASE("categories: all-true detail mask matches Global") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<float> value(-30.0f, 30.0f);
  DenseFlowField pred(6, 6);
  DenseFlowField gt(6, 6);
  for (float& v : pred.data()) v = value(rng);
  for (float& v : gt.data()) v = value(rng);
  SemanticMaskSet masks;
  masks.detail = PixelMask(6, 6, true);
  const CategoryMap m = MaskedMetrics(pred, gt, PixelMask(6, 6, true), masks);
  const auto& global = m.at(Category::kGlobal);
  const auto& high = m.at(Category::kHighDetails);
  CHECK(high.epe.median == global.epe.median);
  CHECK(high.epe.mean == global.epe.mean);
  CHECK(high.epe.count == global.epe.count);
  CHECK(m.at(Category::kLowDetails).epe.count == 0);
  CHECK_FALSE(m.contains(Category::kSky));
  CHECK_FALSE(m.contains(Category::kRigidObjects));
  CHECK(m.contains(Category::kBigMotion));
}

TEST_CASE("categories: complementary counts sum to Global on random masks") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<float> value(-60.0f, 60.0f);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 40);
    const int h = 1 + static_cast<int>(rng() % 40);
    DenseFlowField pred(w, h);
    DenseFlowField gt(w, h);
    for (float& v : pred.data()) v = value(rng);
    for (float& v : gt.data()) v = rng() % 10 ? value(rng) : std::numeric_limits<float>::infinity();
    SemanticMaskSet masks{PixelMask(w, h), PixelMask(w, h), PixelMask(w, h)};
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        masks.detail->set(x, y, rng() % 2);
        masks.rigid->set(x, y, rng() % 3 == 0);
        masks.sky->set(x, y, rng() % 5 == 0);
      }
    }
    const CategoryMap m = MaskedMetrics(pred, gt, ValidMaskFromGroundTruth(gt), masks);
    const std::size_t global = m.at(Category::kGlobal).epe.count;
    auto count = [&](Category c) { return m.at(c).epe.count; };
    CHECK(count(Category::kHighDetails) + count(Category::kLowDetails) == global);
    CHECK(count(Category::kRigidObjects) + count(Category::kNonRigidObjects) == global);
    CHECK(count(Category::kSky) + count(Category::kNonSky) == global);
    CHECK(count(Category::kShortMotion) + count(Category::kMediumMotion) +
              count(Category::kBigMotion) == global);
  }
}

TEST_CASE("categories: mask dimension mismatch") {
  SemanticMaskSet masks;
  masks.sky = PixelMask(3, 3);
  CHECK_THROWS_AS(MaskedMetrics(DenseFlowField(4, 4), DenseFlowField(4, 4),
                                PixelMask(4, 4, true), masks),
                  DimensionError);
}

TEST_CASE("categories: samples carry membership bits") {
  DenseFlowField gt(3, 1);
  gt.set(0, 0, {3.0f, 4.0f});
  gt.set(1, 0, {10.0f, 0.0f});
  gt.set(2, 0, {0.0f, 40.0f});
  SemanticMaskSet masks;
  masks.sky = PixelMask(3, 1);
  masks.sky->set(2, 0, true);
  const FrameMetrics fm = EvaluateFrame(gt, gt, PixelMask(3, 1, true), masks);
  REQUIRE(fm.samples.size() == 3);
  auto bit = [](Category c) { return 1u << static_cast<unsigned>(c); };
  CHECK(fm.samples[0].categories ==
        (bit(Category::kGlobal) | bit(Category::kNonSky) | bit(Category::kShortMotion)));
  CHECK(fm.samples[1].categories ==
        (bit(Category::kGlobal) | bit(Category::kNonSky) | bit(Category::kMediumMotion)));
  CHECK(fm.samples[2].categories ==
        (bit(Category::kGlobal) | bit(Category::kSky) | bit(Category::kBigMotion)));
}

TEST_CASE("category names round-trip") {
  for (const Category c : kAllCategories) CHECK(ParseCategory(CategoryName(c)) == c);
  CHECK(CategoryName(Category::kNonRigidObjects) == "Non-Rigid Objects");
  CHECK_FALSE(ParseCategory("global").has_value());
}

TEST_CASE("non-finite prediction counts as unbounded error") {
  DenseFlowField pred(2, 1);
  pred.set(0, 0, {std::numeric_limits<float>::quiet_NaN(), 0.0f});
  const EpeResult r = Epe(pred, DenseFlowField(2, 1), PixelMask(2, 1, true));
  CHECK(std::isinf(r.per_pixel[0]));
  CHECK(r.summary.median == std::numeric_limits<double>::infinity());
}

}  // namespace
}  // namespace mvflow
