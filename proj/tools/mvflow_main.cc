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

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvflow/errors.h"
#include "mvflow/pipeline.h"

namespace {

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr FlagSpec kDensifyFlags[] = {
    {"--dump", "dump", "Decoder dump file(s), comma-separated"},
    {"--format", "format", "Dump format: canonical | inspect"},
    {"--out", "out", "Output directory"},
    {"--hint-bits", "hint_bits", "Order-hint bit width"},
    {"--flow-format", "flow_format", "Flow file format: flo | raw"},
};

constexpr FlagSpec kEvalFlags[] = {
    {"--flow", "flow", "Directory of flow_NNNNNN.{flo,mvf} predictions"},
    {"--dump", "dump", "Decoder dump, densified in memory instead of --flow"},
    {"--format", "format", "Dump format: canonical | inspect"},
    {"--gt", "gt", "Ground-truth flow directory"},
    {"--masks", "masks", "Semantic mask directory"},
    {"--frames", "frames", "Luma frame directory (frame_NNNNNN.pgm) for MCMSE"},
    {"--out", "out", "Output directory"},
    {"--eps", "eps", "Coverage threshold in pixels"},
    {"--pooling", "pooling", "pixel | frame"},
    {"--label", "label", "Configuration label"},
    {"--sequence", "sequence", "Sequence name"},
    {"--hint-bits", "hint_bits", "Order-hint bit width"},
    {"--samples", "samples", "Write samples.bin for later pixel pooling (0|1)"},
};

constexpr FlagSpec kVizFlags[] = {
    {"--flow", "flow", "Directory of flow files"},
    {"--dump", "dump", "Decoder dump, densified in memory"},
    {"--format", "format", "Dump format: canonical | inspect"},
    {"--out", "out", "Output directory"},
    {"--max-mag", "max_magnitude", "Magnitude mapped to full saturation"},
    {"--hint-bits", "hint_bits", "Order-hint bit width"},
};

constexpr FlagSpec kWarmstartFlags[] = {
    {"--flow", "flow", "Directory of flow files"},
    {"--dump", "dump", "Decoder dump, densified in memory"},
    {"--format", "format", "Dump format: canonical | inspect"},
    {"--out", "out", "Output directory"},
    {"--factor", "factor", "Downsampling factor"},
    {"--flow-format", "flow_format", "Flow file format: flo | raw"},
    {"--hint-bits", "hint_bits", "Order-hint bit width"},
};

constexpr FlagSpec kReportFlags[] = {
    {"--reports", "reports", "report.json files, comma-separated"},
    {"--vmaf", "vmaf", "VMAF CSV rows: config_label,sequence,vmaf"},
    {"--pooling", "pooling", "pixel | frame"},
    {"--out", "out", "Output directory"},
};

struct Subcommand {
  CLI::App* app = nullptr;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::map<std::string, std::string> values;
  std::string config_path;
  unsigned threads = 0;
  CLI::Option* threads_option = nullptr;
};

template <std::size_t N>
void AddSubcommand(CLI::App& root, const char* name, const char* description,
                   const FlagSpec (&flags)[N], Subcommand& sub) {
  sub.app = root.add_subcommand(name, description);
  for (const FlagSpec& f : flags) {
    std::string& slot = sub.values[f.key];
    sub.options.emplace_back(f.key, sub.app->add_option(f.flag, slot, f.help));
  }
  sub.app->add_option("--config", sub.config_path, "key=value configuration file");
  sub.threads_option =
      sub.app->add_option("--threads", sub.threads, "Worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dense optical flow from AV1 decoder motion vectors"};
  app.require_subcommand(1);
  std::map<std::string, Subcommand> subs;
  AddSubcommand(app, "densify", "Build dense flow fields from a decoder dump",
                kDensifyFlags, subs["densify"]);
  AddSubcommand(app, "eval", "Score flow against ground truth", kEvalFlags,
                subs["eval"]);
  AddSubcommand(app, "viz", "Render flow fields as color-wheel images", kVizFlags,
                subs["viz"]);
  AddSubcommand(app, "warmstart", "Write downsampled warm-start initializations",
                kWarmstartFlags, subs["warmstart"]);
  AddSubcommand(app, "report", "Merge evaluation reports and join VMAF results",
                kReportFlags, subs["report"]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? mvflow::kExitOk : mvflow::kExitInputError;
  }

  for (auto& [name, sub] : subs) {
    if (!sub.app->parsed()) continue;
    mvflow::PipelineConfig config;
    try {
      if (!sub.config_path.empty()) mvflow::ApplyConfigFile(sub.config_path, config);
      for (const auto& [key, option] : sub.options) {
        if (option->count() > 0) mvflow::ApplyConfigValue(key, sub.values[key], config);
      }
      if (sub.threads_option->count() > 0) config.threads = sub.threads;
    } catch (const mvflow::InputError& e) {
      mvflow::Logger(std::cerr, name).Log("error", {{"kind", "input"}, {"msg", e.what()}});
      return mvflow::kExitInputError;
    }
    return mvflow::RunCommand(name, config, std::cerr);
  }
  return mvflow::kExitInputError;
}
