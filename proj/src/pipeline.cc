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

#include "mvflow/pipeline.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "mvflow/complete.h"
#include "mvflow/densify.h"
#include "mvflow/errors.h"
#include "mvflow/motion_field.h"
#include "mvflow/normalize.h"
#include "mvflow/parallel.h"

namespace mvflow {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kFlowPrefix = "flow_";
constexpr std::string_view kMaskKinds[3] = {"detail", "rigid", "sky"};

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<fs::path> SplitPaths(std::string_view value) {
  std::vector<fs::path> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto end = value.find(',', start);
    if (end == std::string_view::npos) end = value.size();
    const std::string item = Trim(value.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    throw InputError("invalid value for " + std::string(key) + ": '" +
                     std::string(value) + "'");
  }
  return out;
}

double ParseDouble(std::string_view key, std::string_view value) {
  const std::string s(value);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') {
    throw InputError("invalid value for " + std::string(key) + ": '" + s + "'");
  }
  return out;
}

std::string SanitizeLabel(std::string_view label) {
  std::string out;
  for (const char c : label) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                    c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "unlabeled" : out;
}

void WriteText(const fs::path& path, const std::string& text) {
  WriteFileBytes(path, std::span<const std::uint8_t>(
                           reinterpret_cast<const std::uint8_t*>(text.data()),
                           text.size()));
}

std::string ReadText(const fs::path& path) {
  const auto bytes = ReadFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void RequireFile(const fs::path& path, std::string_view what) {
  if (!fs::is_regular_file(path)) {
    throw InputError(std::string(what) + " not found: " + path.string());
  }
}

void RequireDir(const std::optional<fs::path>& path, std::string_view what) {
  if (!path) throw InputError(std::string(what) + " is required");
  if (!fs::is_directory(*path)) {
    throw InputError(std::string(what) + " is not a directory: " + path->string());
  }
}

fs::path PrepareOutDir(const PipelineConfig& config) {
  if (!config.out_dir) throw InputError("--out is required");
  std::error_code ec;
  fs::create_directories(*config.out_dir, ec);
  if (ec || !fs::is_directory(*config.out_dir)) {
    throw InputError("cannot create output directory " + config.out_dir->string());
  }
  return *config.out_dir;
}

// <prefix><digits>.<ext> files in |dir|, keyed by the integer.
std::map<int, fs::path> ListIndexed(const fs::path& dir, std::string_view prefix,
                                    std::initializer_list<std::string_view> exts) {
  std::map<int, fs::path> out;
  const std::regex pattern("^" + std::string(prefix) + "(\\d+)\\.([A-Za-z0-9]+)$");
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, pattern)) continue;
    const std::string ext = m[2].str();
    if (std::find(exts.begin(), exts.end(), ext) == exts.end()) continue;
    const int index = std::stoi(m[1].str());
    if (out.contains(index)) {
      throw InputError("ambiguous files for frame " + std::to_string(index) +
                       " in " + dir.string());
    }
    out.emplace(index, entry.path());
  }
  return out;
}

std::optional<fs::path> FindIndexed(const fs::path& dir, std::string_view prefix,
                                    int index,
                                    std::initializer_list<std::string_view> exts) {
  std::optional<fs::path> found;
  for (const auto ext : exts) {
    const fs::path p = dir / IndexedName(prefix, index, std::string(".") += ext);
    if (fs::is_regular_file(p)) {
      if (found) {
        throw InputError("ambiguous files for frame " + std::to_string(index) +
                         " in " + dir.string());
      }
      found = p;
    }
  }
  return found;
}

GrayImage ReadMaskFile(const fs::path& path) {
  const auto bytes = ReadFileBytes(path);
  if (path.extension() == ".pgm") return ReadPgm(bytes);
  return ReadRawPlanarMask(bytes);
}

// Predicted flows, either read from a directory or densified from a dump.
class FlowSource {
 public:
  static FlowSource FromConfig(const PipelineConfig& config) {
    FlowSource source;
    if (config.flow_dir) {
      RequireDir(config.flow_dir, "--flow");
      source.files_ = ListIndexed(*config.flow_dir, kFlowPrefix, {"flo", "mvf"});
      for (const auto& [index, path] : source.files_) source.indices_.push_back(index);
      source.name_ = config.flow_dir->filename().string();
      if (source.name_.empty()) source.name_ = config.flow_dir->parent_path().filename().string();
    } else {
      if (config.dumps.size() != 1) {
        throw InputError("exactly one --dump (or --flow) is required");
      }
      RequireFile(config.dumps.front(), "dump");
      source.frames_ = LoadDump(config.dumps.front(), config.format, config.hint_bits);
      if (source.frames_.empty()) throw InputError("dump contains no frames");
      source.hint_bits_ = config.hint_bits;
      for (const FrameDump* f : FramesWithFlow(source.frames_)) {
        source.by_index_[f->header.frame_index] = f;
        source.indices_.push_back(f->header.frame_index);
      }
      source.name_ = config.dumps.front().stem().string();
    }
    if (source.indices_.empty()) throw InputError("no flow frames to process");
    return source;
  }

  const std::vector<int>& indices() const { return indices_; }
  const std::string& name() const { return name_; }

  DenseFlowField Load(int index) const {
    if (!files_.empty()) return ReadFlowBytes(ReadFileBytes(files_.at(index)));
    return DensifyFrame(*by_index_.at(index), hint_bits_).flow;
  }

 private:
  std::map<int, fs::path> files_;
  std::vector<FrameDump> frames_;
  std::map<int, const FrameDump*> by_index_;
  std::vector<int> indices_;
  std::string name_;
  int hint_bits_ = 7;
};

std::string Str(std::size_t v) { return std::to_string(v); }
std::string Str(int v) { return std::to_string(v); }

}  // namespace

void ApplyConfigValue(std::string_view key, std::string_view raw,
                      PipelineConfig& config) {
  const std::string value = Trim(raw);
  if (key == "dump") {
    config.dumps = SplitPaths(value);
  } else if (key == "format") {
    if (value == "canonical") {
      config.format = DumpFormat::kCanonical;
    } else if (value == "inspect") {
      config.format = DumpFormat::kInspect;
    } else {
      throw InputError("format must be canonical or inspect");
    }
  } else if (key == "gt") {
    config.gt_dir = value;
  } else if (key == "masks") {
    config.mask_dir = value;
  } else if (key == "frames") {
    config.frame_dir = value;
  } else if (key == "flow") {
    config.flow_dir = value;
  } else if (key == "out") {
    config.out_dir = value;
  } else if (key == "reports") {
    config.reports = SplitPaths(value);
  } else if (key == "vmaf") {
    config.vmaf_csv = value;
  } else if (key == "eps") {
    config.eps = ParseDouble(key, value);
    if (!(config.eps >= 0.0)) throw InputError("eps must be >= 0");
  } else if (key == "pooling") {
    const auto p = ParsePooling(value);
    if (!p) throw InputError("pooling must be pixel or frame");
    config.pooling = *p;
  } else if (key == "factor") {
    config.factor = ParseNumber<int>(key, value);
    if (config.factor < 1) throw InputError("factor must be >= 1");
  } else if (key == "hint_bits" || key == "hint-bits") {
    config.hint_bits = ParseNumber<int>(key, value);
    if (config.hint_bits < 1 || config.hint_bits > 16) {
      throw InputError("hint_bits must be in [1, 16]");
    }
  } else if (key == "flow_format" || key == "flow-format") {
    if (value == "flo") {
      config.flow_format = FlowFileFormat::kMiddleburyFlo;
    } else if (value == "raw") {
      config.flow_format = FlowFileFormat::kRawPlanar;
    } else {
      throw InputError("flow_format must be flo or raw");
    }
  } else if (key == "label") {
    config.label = value;
  } else if (key == "sequence") {
    config.sequence = value;
  } else if (key == "max_magnitude" || key == "max-mag") {
    const double m = ParseDouble(key, value);
    if (!(m > 0.0)) throw InputError("max_magnitude must be > 0");
    config.max_magnitude = static_cast<float>(m);
  } else if (key == "samples") {
    if (value != "0" && value != "1" && value != "true" && value != "false") {
      throw InputError("samples must be 0/1/true/false");
    }
    config.write_samples = value == "1" || value == "true";
  } else if (key == "threads") {
    config.threads = ParseNumber<unsigned>(key, value);
  } else {
    throw InputError("unknown configuration key '" + std::string(key) + "'");
  }
}

void ApplyConfigFile(const fs::path& path, PipelineConfig& config) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_no, "config line is not key=value");
    }
    try {
      ApplyConfigValue(Trim(trimmed.substr(0, eq)), trimmed.substr(eq + 1), config);
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(line_no, e.what());
    }
  }
}

void Logger::Log(std::string_view level,
                 std::initializer_list<std::pair<std::string_view, std::string>> fields) {
  std::ostringstream line;
  line << "level=" << level << " cmd=" << command_;
  for (const auto& [key, value] : fields) {
    line << ' ' << key << '=';
    const bool quote = value.empty() ||
                       value.find_first_of(" \t\"=") != std::string::npos;
    if (!quote) {
      line << value;
      continue;
    }
    line << '"';
    for (const char c : value) {
      if (c == '"' || c == '\\') line << '\\';
      line << (c == '\n' ? ' ' : c);
    }
    line << '"';
  }
  line << '\n';
  std::lock_guard lock(mutex_);
  out_ << line.str() << std::flush;
}

std::string IndexedName(std::string_view prefix, int frame_index,
                        std::string_view extension) {
  char digits[16];
  std::snprintf(digits, sizeof(digits), "%06d", frame_index);
  return std::string(prefix) + digits + std::string(extension);
}

std::vector<FrameDump> LoadDump(const fs::path& path, DumpFormat format,
                                int hint_bits) {
  const std::string text = ReadText(path);
  const ParseOptions options{hint_bits};
  return format == DumpFormat::kInspect ? ParseInspectDump(text, options)
                                        : ParseCanonicalDump(text, options);
}

std::vector<const FrameDump*> FramesWithFlow(const std::vector<FrameDump>& frames) {
  std::vector<const FrameDump*> shown;
  for (const auto& f : frames) {
    if (f.header.show_frame) shown.push_back(&f);
  }
  std::stable_sort(shown.begin(), shown.end(), [](const FrameDump* a, const FrameDump* b) {
    return a->header.frame_index < b->header.frame_index;
  });
  if (!shown.empty()) shown.erase(shown.begin());
  return shown;
}

DensifiedFrame DensifyFrame(const FrameDump& frame, int hint_bits) {
  const FrameHeader& h = frame.header;
  const FrameNormalization normalized = NormalizeFrame(frame, hint_bits);
  const PaintResult painted = PaintBlocks(frame.records, h, normalized.vectors);
  const SparseMotionField completed = BmvcFill(painted.past, painted.future);

  DensifiedFrame out;
  out.frame_index = h.frame_index;
  for (const Cell& c : completed.cells()) {
    switch (c.provenance) {
      case Provenance::kCoded:
        ++out.coded_cells;
        break;
      case Provenance::kBmvcInferred:
        ++out.bmvc_cells;
        break;
      case Provenance::kEmpty:
        ++out.empty_cells;
        break;
    }
  }
  out.unresolved = normalized.unresolved;
  out.rejected = painted.rejected;
  out.overlapped_cells = painted.overlapped_cells;
  out.flow = CropToDisplay(UpsampleZoh(completed), h.display_width, h.display_height);
  out.provenance =
      CropToDisplay(UpsampleProvenance(completed), h.display_width, h.display_height);
  return out;
}

int RunDensify(const PipelineConfig& config, std::ostream& log_stream) {
  Logger log(log_stream, "densify");
  if (config.dumps.empty()) throw InputError("--dump is required");
  for (const auto& d : config.dumps) RequireFile(d, "dump");
  const fs::path out_root = PrepareOutDir(config);

  for (const auto& dump_path : config.dumps) {
    const auto frames = LoadDump(dump_path, config.format, config.hint_bits);
    if (frames.empty()) {
      throw InputError("dump contains no frames: " + dump_path.string());
    }
    fs::path out_dir = out_root;
    if (config.dumps.size() > 1) {
      out_dir /= dump_path.stem();
      fs::create_directories(out_dir);
    }
    for (const auto& f : frames) {
      for (const auto& w : f.warnings) {
        log.Log("warn", {{"frame", Str(f.header.frame_index)}, {"msg", w}});
      }
    }
    const auto targets = FramesWithFlow(frames);
    if (targets.empty()) {
      log.Log("warn", {{"dump", dump_path.string()},
                       {"msg", "no frame has a predecessor; nothing to write"}});
    }
    ParallelFor(targets.size(), config.threads, [&](std::size_t i) {
      const FrameDump& frame = *targets[i];
      DensifiedFrame d;
      try {
        d = DensifyFrame(frame, config.hint_bits);
      } catch (const InputError& e) {
        throw InputError("frame " + Str(frame.header.frame_index) + ": " + e.what());
      } catch (const Error& e) {
        throw ProcessingError("frame " + Str(frame.header.frame_index) + ": " + e.what());
      }
      const fs::path flow_path =
          out_dir / IndexedName(kFlowPrefix, d.frame_index,
                                FlowFileExtension(config.flow_format));
      WriteFileBytes(flow_path, WriteFlowBytes(d.flow, config.flow_format));
      WriteFileBytes(out_dir / IndexedName("prov_", d.frame_index, ".pgm"),
                     WritePgm(d.provenance));
      if (d.overlapped_cells > 0) {
        log.Log("warn", {{"frame", Str(d.frame_index)},
                         {"overlapped_cells", Str(d.overlapped_cells)},
                         {"msg", "overlapping blocks; last in decode order wins"}});
      }
      if (d.unresolved > 0 || d.rejected > 0) {
        log.Log("warn", {{"frame", Str(d.frame_index)},
                         {"unresolved", Str(d.unresolved)},
                         {"rejected", Str(d.rejected)}});
      }
      log.Log("info", {{"event", "wrote"},
                       {"frame", Str(d.frame_index)},
                       {"coded_cells", Str(d.coded_cells)},
                       {"bmvc_cells", Str(d.bmvc_cells)},
                       {"empty_cells", Str(d.empty_cells)},
                       {"path", flow_path.string()}});
    });
  }
  return kExitOk;
}

int RunEval(const PipelineConfig& config, std::ostream& log_stream) {
  Logger log(log_stream, "eval");
  RequireDir(config.gt_dir, "--gt");
  if (config.mask_dir) RequireDir(config.mask_dir, "--masks");
  if (config.frame_dir) RequireDir(config.frame_dir, "--frames");
  const FlowSource source = FlowSource::FromConfig(config);
  const fs::path out_dir = PrepareOutDir(config);
  const std::string sequence = config.sequence.empty() ? source.name() : config.sequence;

  std::vector<int> evaluated;
  std::vector<SkippedFrame> skipped;
  std::map<int, fs::path> gt_paths;
  for (const int index : source.indices()) {
    auto gt = FindIndexed(*config.gt_dir, kFlowPrefix, index, {"flo", "mvf"});
    if (!gt) {
      skipped.push_back({sequence, index, "missing ground truth"});
      log.Log("warn", {{"frame", Str(index)}, {"msg", "missing ground truth; frame skipped"}});
      continue;
    }
    gt_paths[index] = *gt;
    evaluated.push_back(index);
  }

  // A mask kind is used when it exists for every evaluated frame.
  std::map<std::string_view, std::map<int, fs::path>> mask_paths;
  if (config.mask_dir) {
    for (const auto kind : kMaskKinds) {
      std::map<int, fs::path> found;
      std::vector<int> missing;
      for (const int index : evaluated) {
        auto p = FindIndexed(*config.mask_dir, std::string(kind) + "_", index, {"pgm", "mvf"});
        if (p) {
          found[index] = *p;
        } else {
          missing.push_back(index);
        }
      }
      if (found.empty()) continue;
      if (!missing.empty()) {
        throw InputError(std::string(kind) + " mask missing for frame " +
                         Str(missing.front()) + " while present for others");
      }
      mask_paths[kind] = std::move(found);
    }
  }

  const bool keep_samples = config.pooling == Pooling::kPixelPooled || config.write_samples;
  std::vector<FrameEvaluation> results(evaluated.size());
  ParallelFor(evaluated.size(), config.threads, [&](std::size_t i) {
    const int index = evaluated[i];
    try {
      const DenseFlowField pred = source.Load(index);
      const DenseFlowField gt = ReadFlowBytes(ReadFileBytes(gt_paths.at(index)));
      SemanticMaskSet masks;
      auto load_mask = [&](std::string_view kind) -> std::optional<PixelMask> {
        const auto it = mask_paths.find(kind);
        if (it == mask_paths.end()) return std::nullopt;
        return PixelMask::FromImage(ReadMaskFile(it->second.at(index)));
      };
      masks.detail = load_mask("detail");
      masks.rigid = load_mask("rigid");
      masks.sky = load_mask("sky");
      const PixelMask valid = ValidMaskFromGroundTruth(gt);
      FrameMetrics metrics = EvaluateFrame(pred, gt, valid, masks, {}, config.eps);

      FrameEvaluation& r = results[i];
      r.sequence = sequence;
      r.frame_index = index;
      r.categories = std::move(metrics.categories);
      if (keep_samples) r.samples = std::move(metrics.samples);
      if (config.frame_dir) {
        const auto cur = FindIndexed(*config.frame_dir, "frame_", index, {"pgm"});
        const auto prev = FindIndexed(*config.frame_dir, "frame_", index - 1, {"pgm"});
        if (cur && prev) {
          r.mcmse = Mcmse(pred, ReadPgm(ReadFileBytes(*prev)), ReadPgm(ReadFileBytes(*cur)));
        } else {
          log.Log("warn", {{"frame", Str(index)}, {"msg", "luma frames missing; no MCMSE"}});
        }
      }
      const CategoryMetrics& global = r.categories.at(Category::kGlobal);
      log.Log("info", {{"event", "evaluated"},
                       {"frame", Str(index)},
                       {"median_epe", FormatFloat(global.epe.median)},
                       {"mean_epe", FormatFloat(global.epe.mean)},
                       {"coverage", FormatFloat(global.coverage)}});
    } catch (const InputError& e) {
      throw InputError("frame " + Str(index) + ": " + e.what());
    } catch (const Error& e) {
      throw ProcessingError("frame " + Str(index) + ": " + e.what());
    }
  });

  if (results.empty()) throw ProcessingError("no frame could be evaluated");
  if (config.write_samples) {
    WriteFileBytes(out_dir / "samples.bin", WriteSamples(results));
  }
  EvaluationReport report = Aggregate(std::move(results), config.pooling, config.label);
  report.skipped = std::move(skipped);
  WriteText(out_dir / "per_frame.csv", EmitPerFrameCsv(report));
  WriteText(out_dir / "frames.csv", EmitFramesCsv(report));
  WriteText(out_dir / "aggregate.csv", EmitCsv(report));
  WriteText(out_dir / "report.json", EmitJson(report));
  log.Log("info", {{"event", "report"},
                   {"frames", Str(report.per_frame.size())},
                   {"skipped", Str(report.skipped.size())},
                   {"pooling", std::string(PoolingName(report.pooling))},
                   {"path", (out_dir / "report.json").string()}});
  return kExitOk;
}

int RunViz(const PipelineConfig& config, std::ostream& log_stream) {
  Logger log(log_stream, "viz");
  const FlowSource source = FlowSource::FromConfig(config);
  const fs::path out_dir = PrepareOutDir(config);
  const auto& indices = source.indices();
  ParallelFor(indices.size(), config.threads, [&](std::size_t i) {
    const int index = indices[i];
    const RgbImage image = Colorize(source.Load(index), config.max_magnitude);
    const fs::path path = out_dir / IndexedName("viz_", index, ".ppm");
    WriteFileBytes(path, WritePpm(image));
    log.Log("info", {{"event", "wrote"}, {"frame", Str(index)}, {"path", path.string()}});
  });
  return kExitOk;
}

int RunWarmstart(const PipelineConfig& config, std::ostream& log_stream) {
  Logger log(log_stream, "warmstart");
  if (config.factor < 1) throw InputError("factor must be >= 1");
  const FlowSource source = FlowSource::FromConfig(config);
  const fs::path out_dir = PrepareOutDir(config);
  const auto& indices = source.indices();
  ParallelFor(indices.size(), config.threads, [&](std::size_t i) {
    const int index = indices[i];
    const DenseFlowField coarse = DownsampleWarmstart(source.Load(index), config.factor);
    const fs::path path =
        out_dir / IndexedName("init_", index, FlowFileExtension(config.flow_format));
    WriteFileBytes(path, WriteFlowBytes(coarse, config.flow_format));
    log.Log("info", {{"event", "wrote"},
                     {"frame", Str(index)},
                     {"width", Str(coarse.width())},
                     {"height", Str(coarse.height())},
                     {"path", path.string()}});
  });
  return kExitOk;
}

int RunReport(const PipelineConfig& config, std::ostream& log_stream) {
  Logger log(log_stream, "report");
  if (config.reports.empty()) throw InputError("--reports is required");
  for (const auto& r : config.reports) RequireFile(r, "report");
  if (config.vmaf_csv) RequireFile(*config.vmaf_csv, "VMAF CSV");
  const fs::path out_dir = PrepareOutDir(config);

  std::vector<EvaluationReport> reports;
  for (const auto& path : config.reports) {
    EvaluationReport r = ParseJsonReport(ReadText(path));
    if (config.pooling == Pooling::kPixelPooled) {
      const fs::path samples = path.parent_path() / "samples.bin";
      if (!fs::is_regular_file(samples)) {
        throw InputError("pixel pooling needs " + samples.string() +
                         " (run eval with --samples, or use --pooling frame)");
      }
      AttachSamples(ReadFileBytes(samples), r.per_frame);
    }
    reports.push_back(std::move(r));
  }

  std::map<std::string, std::vector<const EvaluationReport*>> by_label;
  for (const auto& r : reports) by_label[r.config_label].push_back(&r);
  for (const auto& [label, group] : by_label) {
    std::vector<FrameEvaluation> frames;
    std::vector<SkippedFrame> skipped;
    for (const EvaluationReport* r : group) {
      frames.insert(frames.end(), r->per_frame.begin(), r->per_frame.end());
      skipped.insert(skipped.end(), r->skipped.begin(), r->skipped.end());
    }
    EvaluationReport merged = Aggregate(std::move(frames), config.pooling, label);
    merged.skipped = std::move(skipped);
    const std::string stem = "aggregate_" + SanitizeLabel(label);
    WriteText(out_dir / (stem + ".csv"), EmitCsv(merged));
    WriteText(out_dir / (stem + ".json"), EmitJson(merged));
    log.Log("info", {{"event", "merged"},
                     {"label", label},
                     {"reports", Str(group.size())},
                     {"frames", Str(merged.per_frame.size())}});
  }

  if (config.vmaf_csv) {
    for (auto& r : reports) {
      for (auto& f : r.per_frame) f.samples.clear();
    }
    const ScatterTable table = EpeVsVmaf(reports, ReadText(*config.vmaf_csv));
    WriteText(out_dir / "scatter.csv", EmitScatterCsv(table));
    for (const auto& l : table.unmatched_reports) {
      log.Log("warn", {{"label", l}, {"msg", "no VMAF rows for report label"}});
    }
    for (const auto& l : table.unmatched_vmaf) {
      log.Log("warn", {{"label", l}, {"msg", "VMAF label has no report"}});
    }
  }
  return kExitOk;
}

int RunCommand(std::string_view command, const PipelineConfig& config,
               std::ostream& log_stream) {
  try {
    if (command == "densify") return RunDensify(config, log_stream);
    if (command == "eval") return RunEval(config, log_stream);
    if (command == "viz") return RunViz(config, log_stream);
    if (command == "warmstart") return RunWarmstart(config, log_stream);
    if (command == "report") return RunReport(config, log_stream);
    throw InputError("unknown command '" + std::string(command) + "'");
  } catch (const InputError& e) {
    Logger(log_stream, std::string(command)).Log("error", {{"kind", "input"}, {"msg", e.what()}});
    return kExitInputError;
  } catch (const std::exception& e) {
    Logger(log_stream, std::string(command))
        .Log("error", {{"kind", "processing"}, {"msg", e.what()}});
    return kExitProcessingError;
  }
}

}  // namespace mvflow
