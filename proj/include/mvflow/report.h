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

#ifndef MVFLOW_REPORT_H_
#define MVFLOW_REPORT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvflow/metrics.h"

namespace mvflow {

// PIXEL_POOLED: medians and means over the concatenated per-pixel errors of
// all frames. FRAME_POOLED: median of per-frame medians, mean of per-frame
// means (frames without pixels in a category are ignored for it).
enum class Pooling { kPixelPooled, kFramePooled };

std::string_view PoolingName(Pooling pooling);
// Accepts "pixel" / "frame" and the PIXEL_POOLED / FRAME_POOLED spellings.
std::optional<Pooling> ParsePooling(std::string_view name);

struct FrameEvaluation {
  std::string sequence;
  int frame_index = 0;
  CategoryMap categories;
  std::optional<double> mcmse;
  // Required for PIXEL_POOLED aggregation; dropped once aggregated.
  std::vector<PixelSample> samples;
};

struct CategoryAggregate {
  Category category = Category::kGlobal;
  MetricSummary epe;
  // Median / mean of the per-frame coverage percentages; count = frames
  // with a defined coverage.
  MetricSummary coverage;
};

struct SkippedFrame {
  std::string sequence;
  int frame_index = 0;
  std::string reason;
};

struct EvaluationReport {
  std::string config_label;
  Pooling pooling = Pooling::kPixelPooled;
  // Sorted by (sequence, frame_index); samples are not retained.
  std::vector<FrameEvaluation> per_frame;
  std::vector<CategoryAggregate> aggregate;  // in Category order
  MetricSummary mcmse;                       // over per-frame MCMSE values
  std::vector<SkippedFrame> skipped;
  std::map<std::string, double> vmaf;        // per sequence, ingested
};

// Pools per-frame results. The output does not depend on the order of
// |frames|. Throws ProcessingError for empty input, duplicate
// (sequence, frame) pairs, inconsistent category sets, or PIXEL_POOLED
// without samples.
EvaluationReport Aggregate(std::vector<FrameEvaluation> frames, Pooling pooling,
                           std::string config_label = {});

// Floats use 6 significant digits; undefined values print as "nan" (CSV) or
// null (JSON).
std::string FormatFloat(double value);
inline constexpr std::string_view kAggregateCsvHeader =
    "category,median_epe,mean_epe,coverage_median,coverage_mean,count";

// "# pooling=<MODE> config_label=<label>" line, then the header and one row
// per aggregate category.
std::string EmitCsv(const EvaluationReport& report);
// sequence,frame_index,category,median_epe,mean_epe,coverage,count
std::string EmitPerFrameCsv(const EvaluationReport& report);
// sequence,frame_index,status,mcmse,reason (evaluated and skipped frames)
std::string EmitFramesCsv(const EvaluationReport& report);
std::string EmitJson(const EvaluationReport& report);

// Inverse of EmitJson (values at their printed precision).
EvaluationReport ParseJsonReport(std::string_view text);

// Per-pixel samples sidecar, needed to re-pool reports at pixel level.
std::vector<std::uint8_t> WriteSamples(std::span<const FrameEvaluation> frames);
// Fills samples of the frames in |frames| matching (sequence, frame_index).
// Throws FormatError on malformed data or a frame missing from the sidecar.
void AttachSamples(std::span<const std::uint8_t> bytes,
                   std::vector<FrameEvaluation>& frames);

struct ScatterRow {
  std::string config_label;
  double mean_epe = 0.0;
  double mean_vmaf = 0.0;
};

struct ScatterTable {
  std::vector<ScatterRow> rows;                 // sorted by label
  std::vector<std::string> unmatched_reports;   // labels without VMAF rows
  std::vector<std::string> unmatched_vmaf;      // VMAF labels without reports
};

// Joins reports with VMAF rows "config_label,sequence,vmaf" on config_label.
// mean_epe averages the Global mean EPE of the reports sharing a label;
// mean_vmaf averages that label's VMAF rows.
ScatterTable EpeVsVmaf(std::span<const EvaluationReport> reports,
                       std::string_view vmaf_csv);

// "config_label,mean_epe,mean_vmaf" rows, then "# unmatched_..." lines.
std::string EmitScatterCsv(const ScatterTable& table);

}  // namespace mvflow

#endif  // MVFLOW_REPORT_H_
