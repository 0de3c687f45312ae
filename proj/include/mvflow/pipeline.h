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

#ifndef MVFLOW_PIPELINE_H_
#define MVFLOW_PIPELINE_H_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mvflow/flow_field.h"
#include "mvflow/flow_io.h"
#include "mvflow/ingest.h"
#include "mvflow/metrics.h"
#include "mvflow/report.h"

namespace mvflow {

enum class DumpFormat { kCanonical, kInspect };

struct PipelineConfig {
  std::vector<std::filesystem::path> dumps;
  DumpFormat format = DumpFormat::kCanonical;
  std::optional<std::filesystem::path> gt_dir;
  std::optional<std::filesystem::path> mask_dir;
  std::optional<std::filesystem::path> frame_dir;
  std::optional<std::filesystem::path> flow_dir;
  std::optional<std::filesystem::path> out_dir;
  std::vector<std::filesystem::path> reports;
  std::optional<std::filesystem::path> vmaf_csv;
  double eps = kDefaultCoverageEps;
  Pooling pooling = Pooling::kPixelPooled;
  int factor = 8;
  int hint_bits = 7;
  FlowFileFormat flow_format = FlowFileFormat::kMiddleburyFlo;
  std::string label;
  std::string sequence;
  std::optional<float> max_magnitude;
  bool write_samples = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Applies one "key=value" setting. Keys: dump (comma-separated), format, gt,
// masks, frames, flow, out, reports (comma-separated), vmaf, eps, pooling,
// factor, hint_bits (or hint-bits), flow_format, label, sequence,
// max_magnitude, samples, threads. Throws InputError on unknown keys or
// invalid values.
void ApplyConfigValue(std::string_view key, std::string_view value,
                      PipelineConfig& config);

// Line-based "key=value" file; '#' comments and blank lines are ignored.
void ApplyConfigFile(const std::filesystem::path& path, PipelineConfig& config);

// Structured "key=value" log lines. Safe to call from worker threads.
class Logger {
 public:
  Logger(std::ostream& out, std::string command)
      : out_(out), command_(std::move(command)) {}

  void Log(std::string_view level,
           std::initializer_list<std::pair<std::string_view, std::string>> fields);

 private:
  std::ostream& out_;
  std::string command_;
  std::mutex mutex_;
};

// One frame pushed through normalize -> paint -> BMVC -> ZOH -> crop.
struct DensifiedFrame {
  int frame_index = 0;
  DenseFlowField flow;   // display resolution, n -> n-1
  GrayImage provenance;  // display resolution, see densify.h levels
  std::size_t coded_cells = 0;
  std::size_t bmvc_cells = 0;
  std::size_t empty_cells = 0;
  int unresolved = 0;
  int rejected = 0;
  int overlapped_cells = 0;
};

DensifiedFrame DensifyFrame(const FrameDump& frame, int hint_bits = 7);

std::vector<FrameDump> LoadDump(const std::filesystem::path& path,
                                DumpFormat format, int hint_bits);

// Frames that produce flow: every shown frame except the first one in
// display order, which has no predecessor.
std::vector<const FrameDump*> FramesWithFlow(const std::vector<FrameDump>& frames);

// "flow_000012.flo", "prov_000012.pgm", ...
std::string IndexedName(std::string_view prefix, int frame_index,
                        std::string_view extension);

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitProcessingError = 2;

// Each command validates its paths before touching any data, logs to |log|
// and returns an exit code.
int RunDensify(const PipelineConfig& config, std::ostream& log);
int RunEval(const PipelineConfig& config, std::ostream& log);
int RunViz(const PipelineConfig& config, std::ostream& log);
int RunWarmstart(const PipelineConfig& config, std::ostream& log);
int RunReport(const PipelineConfig& config, std::ostream& log);

// Dispatches "densify" | "eval" | "viz" | "warmstart" | "report".
int RunCommand(std::string_view command, const PipelineConfig& config,
               std::ostream& log);

}  // namespace mvflow

#endif  // MVFLOW_PIPELINE_H_
