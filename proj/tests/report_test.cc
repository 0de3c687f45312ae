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

#include "mvflow/report.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "mvflow/errors.h"

namespace mvflow {
namespace {

std::uint16_t Bit(Category c) {
  return static_cast<std::uint16_t>(1u << static_cast<unsigned>(c));
}

// A frame whose Global category holds |errors|, as EvaluateFrame would.
FrameEvaluation FrameWithErrors(std::string sequence, int index,
                                const std::vector<float>& errors,
                                double coverage = 50.0) {
  FrameEvaluation f;
  f.sequence = std::move(sequence);
  f.frame_index = index;
  CategoryMetrics m;
  m.epe = Summarize(std::span<const float>(errors));
  m.coverage = coverage;
  f.categories[Category::kGlobal] = m;
  for (const float e : errors) f.samples.push_back({e, Bit(Category::kGlobal)});
  return f;
}

const CategoryAggregate& Global(const EvaluationReport& r) {
  return r.aggregate.front();
}

TEST_CASE("aggregate: single frame equals its summary in both modes") {
  const std::vector<float> errors = {1.0f, 4.0f, 2.0f};
  for (const Pooling p : {Pooling::kPixelPooled, Pooling::kFramePooled}) {
    const auto r = Aggregate({FrameWithErrors("a", 1, errors)}, p);
    CHECK(Global(r).epe.median == 2.0);
    CHECK(Global(r).epe.mean == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
    CHECK(Global(r).epe.count == 3);
    CHECK(Global(r).coverage.median == 50.0);
  }
}

TEST_CASE("aggregate: equal pixel counts give equal means") {
  std::vector<FrameEvaluation> frames = {FrameWithErrors("a", 1, {1.0f, 3.0f}),
                                         FrameWithErrors("a", 2, {5.0f, 9.0f})};
  const auto pixel = Aggregate(frames, Pooling::kPixelPooled);
  const auto frame = Aggregate(frames, Pooling::kFramePooled);
  CHECK(Global(pixel).epe.mean == Global(frame).epe.mean);
  CHECK(Global(pixel).epe.mean == 4.5);
}

TEST_CASE("aggregate: weighted versus unweighted means") {
  std::vector<FrameEvaluation> frames = {FrameWithErrors("a", 1, {0.0f}),
                                         FrameWithErrors("a", 2, {4.0f, 4.0f, 4.0f})};
  CHECK(Global(Aggregate(frames, Pooling::kPixelPooled)).epe.mean == 3.0);
  CHECK(Global(Aggregate(frames, Pooling::kFramePooled)).epe.mean == 2.0);
}

TEST_CASE("aggregate: frame pooled median is the median of frame medians") {
  std::vector<FrameEvaluation> frames = {FrameWithErrors("a", 1, {1.0f}),
                                         FrameWithErrors("a", 2, {2.0f, 10.0f}),
                                         FrameWithErrors("b", 1, {7.0f})};
  const auto r = Aggregate(frames, Pooling::kFramePooled);
  CHECK(Global(r).epe.median == 6.0);
  CHECK(Global(r).epe.count == 4);
}

TEST_CASE("aggregate: errors") {
  CHECK_THROWS_AS(Aggregate({}, Pooling::kPixelPooled), ProcessingError);
  CHECK_THROWS_AS(Aggregate({FrameWithErrors("a", 1, {1.0f}), FrameWithErrors("a", 1, {2.0f})},
                            Pooling::kFramePooled),
                  ProcessingError);
  auto extra = FrameWithErrors("a", 2, {1.0f});
  extra.categories[Category::kSky] = {};
  CHECK_THROWS_AS(Aggregate({FrameWithErrors("a", 1, {1.0f}), extra}, Pooling::kFramePooled),
                  ProcessingError);
  auto bare = FrameWithErrors("a", 1, {1.0f});
  bare.samples.clear();
  CHECK_THROWS_AS(Aggregate({bare}, Pooling::kPixelPooled), ProcessingError);
  CHECK_NOTHROW(Aggregate({bare}, Pooling::kFramePooled));
}

TEST_CASE("aggregate: permutation invariant and samples dropped") {
  std::mt19937 rng(12);
  std::uniform_real_distribution<float> value(0.0f, 20.0f);
  std::vector<FrameEvaluation> frames;
  for (int i = 0; i < 12; ++i) {
    std::vector<float> errors(1 + rng() % 9);
    for (float& e : errors) e = value(rng);
    frames.push_back(FrameWithErrors(i % 2 ? "odd" : "even", i, errors, value(rng) * 5));
  }
  const std::string reference = EmitJson(Aggregate(frames, Pooling::kPixelPooled, "x"));
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(frames.begin(), frames.end(), rng);
    const auto r = Aggregate(frames, Pooling::kPixelPooled, "x");
    CHECK(EmitJson(r) == reference);
    for (const auto& f : r.per_frame) CHECK(f.samples.empty());
  }
}

TEST_CASE("emit: csv header and rows") {
  const auto r = Aggregate({FrameWithErrors("seq", 1, {0.5f, 1.0f / 3.0f})},
                           Pooling::kFramePooled, "libaom-6");
  const std::string csv = EmitCsv(r);
  CHECK(csv ==
        "# pooling=FRAME_POOLED config_label=libaom-6\n"
        "category,median_epe,mean_epe,coverage_median,coverage_mean,count\n"
        "Global,0.416667,0.416667,50,50,2\n");
}

TEST_CASE("emit: empty category list gives the header only") {
  EvaluationReport r;
  CHECK(EmitCsv(r) ==
        "# pooling=PIXEL_POOLED config_label=\n"
        "category,median_epe,mean_epe,coverage_median,coverage_mean,count\n");
}

TEST_CASE("emit: nan values") {
  CHECK(FormatFloat(std::nan("")) == "nan");
  CHECK(FormatFloat(1234567.0) == "1.23457e+06");
  CHECK(FormatFloat(0.1) == "0.1");
  const auto r = Aggregate({FrameWithErrors("s", 1, {}, std::nan(""))}, Pooling::kFramePooled);
  CHECK(EmitCsv(r).find("Global,nan,nan,nan,nan,0") != std::string::npos);
  CHECK(EmitJson(r).find("\"median_epe\": null") != std::string::npos);
}

TEST_CASE("json: infinite values survive a round trip") {
  auto r = Aggregate({FrameWithErrors("s", 1, {std::numeric_limits<float>::infinity()}, 50.0)},
                     Pooling::kFramePooled);
  const EvaluationReport back = ParseJsonReport(EmitJson(r));
  CHECK(std::isinf(back.aggregate[0].epe.mean));
  CHECK(back.aggregate[0].epe.mean > 0);
}

TEST_CASE("json: parse back recovers the report") {
  std::vector<FrameEvaluation> frames = {FrameWithErrors("a", 1, {1.25f, 3.0f}, 75.0),
                                         FrameWithErrors("b", 4, {0.125f}, std::nan(""))};
  frames[0].mcmse = 12.5;
  auto r = Aggregate(frames, Pooling::kPixelPooled, "nvenc");
  r.skipped.push_back({"b", 5, "missing ground truth"});
  r.vmaf["a"] = 96.25;
  const std::string json = EmitJson(r);
  const EvaluationReport back = ParseJsonReport(json);
  CHECK(back.config_label == "nvenc");
  CHECK(back.pooling == Pooling::kPixelPooled);
  REQUIRE(back.aggregate.size() == 1);
  CHECK(back.aggregate[0].epe.median == Global(r).epe.median);
  CHECK(back.aggregate[0].epe.mean == Global(r).epe.mean);
  CHECK(back.aggregate[0].coverage.count == 1);
  REQUIRE(back.per_frame.size() == 2);
  CHECK(back.per_frame[0].mcmse == 12.5);
  CHECK_FALSE(back.per_frame[1].mcmse.has_value());
  CHECK(std::isnan(back.per_frame[1].categories.at(Category::kGlobal).coverage));
  CHECK(back.per_frame[1].categories.at(Category::kGlobal).epe.median == 0.125);
  REQUIRE(back.skipped.size() == 1);
  CHECK(back.skipped[0].reason == "missing ground truth");
  CHECK(back.vmaf.at("a") == 96.25);
  CHECK(EmitJson(back) == json);
  CHECK_THROWS_AS(ParseJsonReport("{"), FormatError);
  CHECK_THROWS_AS(ParseJsonReport("{}"), FormatError);
}

TEST_CASE("samples sidecar round trip") {
  std::vector<FrameEvaluation> frames = {FrameWithErrors("a", 1, {1.0f, 2.0f}),
                                         FrameWithErrors("b", 3, {0.5f})};
  const auto bytes = WriteSamples(frames);
  std::vector<FrameEvaluation> bare = frames;
  for (auto& f : bare) f.samples.clear();
  AttachSamples(bytes, bare);
  CHECK(bare[0].samples == frames[0].samples);
  CHECK(bare[1].samples == frames[1].samples);

  std::vector<FrameEvaluation> unknown = {FrameWithErrors("c", 1, {})};
  CHECK_THROWS_AS(AttachSamples(bytes, unknown), FormatError);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(AttachSamples(truncated, bare), FormatError);
}

TEST_CASE("frames csv lists skipped frames") {
  auto r = Aggregate({FrameWithErrors("s", 2, {1.0f})}, Pooling::kFramePooled);
  r.skipped.push_back({"s", 1, "missing ground truth"});
  CHECK(EmitFramesCsv(r) ==
        "sequence,frame_index,status,mcmse,reason\n"
        "s,1,skipped,nan,missing ground truth\n"
        "s,2,ok,nan,\n");
}

EvaluationReport ReportWithMean(const std::string& label, float mean) {
  return Aggregate({FrameWithErrors("s", 1, {mean})}, Pooling::kFramePooled, label);
}

TEST_CASE("vmaf join: mean over sequences") {
  const std::vector<EvaluationReport> reports = {ReportWithMean("cfg", 1.5f)};
  const ScatterTable t = EpeVsVmaf(reports, "config_label,sequence,vmaf\ncfg,a,90\ncfg,b,100\n");
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].mean_vmaf == 95.0);
  CHECK(t.rows[0].mean_epe == 1.5);
  CHECK(t.unmatched_reports.empty());
  CHECK(t.unmatched_vmaf.empty());
}

TEST_CASE("vmaf join: unmatched labels") {
  const std::vector<EvaluationReport> reports = {ReportWithMean("cfg", 1.0f),
                                                 ReportWithMean("lonely", 2.0f)};
  const ScatterTable t = EpeVsVmaf(reports, "cfg,a,90\nother,a,80\n");
  CHECK(t.rows.size() == 1);
  CHECK(t.unmatched_reports == std::vector<std::string>{"lonely"});
  CHECK(t.unmatched_vmaf == std::vector<std::string>{"other"});
  CHECK(EmitScatterCsv(t) ==
        "config_label,mean_epe,mean_vmaf\n"
        "cfg,1,90\n"
        "# unmatched_report=lonely\n"
        "# unmatched_vmaf=other\n");
}

TEST_CASE("vmaf join: malformed rows") {
  const std::vector<EvaluationReport> reports = {ReportWithMean("cfg", 1.0f)};
  CHECK_THROWS_AS(EpeVsVmaf(reports, "cfg,a\n"), ParseError);
  CHECK_THROWS_AS(EpeVsVmaf(reports, "cfg,a,high\n"), ParseError);
}

TEST_CASE("pooling names") {
  CHECK(ParsePooling("pixel") == Pooling::kPixelPooled);
  CHECK(ParsePooling("FRAME_POOLED") == Pooling::kFramePooled);
  CHECK_FALSE(ParsePooling("median").has_value());
}

}  // namespace
}  // namespace mvflow
