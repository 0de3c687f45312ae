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
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "json.hpp"
#include "mvflow/errors.h"

namespace mvflow {
namespace {

using OrderedJson = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr char kSamplesMagic[4] = {'M', 'V', 'S', '1'};

std::uint16_t Bit(Category c) {
  return static_cast<std::uint16_t>(1u << static_cast<unsigned>(c));
}

// Full precision, so reports re-aggregate without loss.
OrderedJson JsonNumber(double value) {
  if (std::isnan(value)) return nullptr;
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

double JsonDouble(const OrderedJson& v) {
  if (v.is_null()) return kNaN;
  if (v == "inf") return std::numeric_limits<double>::infinity();
  if (v == "-inf") return -std::numeric_limits<double>::infinity();
  if (!v.is_number()) throw FormatError("report JSON: expected a number");
  return v.get<double>();
}

OrderedJson SummaryJson(const MetricSummary& s) {
  OrderedJson j;
  j["median"] = JsonNumber(s.median);
  j["mean"] = JsonNumber(s.mean);
  j["count"] = s.count;
  return j;
}

MetricSummary SummaryFromJson(const OrderedJson& j) {
  MetricSummary s;
  s.median = JsonDouble(j.at("median"));
  s.mean = JsonDouble(j.at("mean"));
  s.count = j.at("count").get<std::size_t>();
  return s;
}

Category CategoryFromJson(const OrderedJson& j) {
  const auto name = j.get<std::string>();
  const auto c = ParseCategory(name);
  if (!c) throw FormatError("report JSON: unknown category '" + name + "'");
  return *c;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void AppendU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t Uint(int width) {
    Need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::string String(std::size_t n) {
    Need(n);
    std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError("samples: truncated data");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view PoolingName(Pooling pooling) {
  return pooling == Pooling::kPixelPooled ? "PIXEL_POOLED" : "FRAME_POOLED";
}

std::optional<Pooling> ParsePooling(std::string_view name) {
  if (name == "pixel" || name == "PIXEL_POOLED") return Pooling::kPixelPooled;
  if (name == "frame" || name == "FRAME_POOLED") return Pooling::kFramePooled;
  return std::nullopt;
}

std::string FormatFloat(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

EvaluationReport Aggregate(std::vector<FrameEvaluation> frames, Pooling pooling,
                           std::string config_label) {
  if (frames.empty()) throw ProcessingError("nothing to aggregate");
  std::sort(frames.begin(), frames.end(),
            [](const FrameEvaluation& a, const FrameEvaluation& b) {
              return std::tie(a.sequence, a.frame_index) <
                     std::tie(b.sequence, b.frame_index);
            });
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].sequence == frames[i - 1].sequence &&
        frames[i].frame_index == frames[i - 1].frame_index) {
      throw ProcessingError("duplicate frame " + frames[i].sequence + "/" +
                            std::to_string(frames[i].frame_index));
    }
  }
  std::vector<Category> categories;
  for (const auto& [c, m] : frames.front().categories) categories.push_back(c);
  for (const auto& f : frames) {
    if (f.categories.size() != categories.size() ||
        !std::all_of(categories.begin(), categories.end(),
                     [&](Category c) { return f.categories.contains(c); })) {
      throw ProcessingError("inconsistent category sets across frames (" +
                            f.sequence + "/" + std::to_string(f.frame_index) +
                            ")");
    }
    if (pooling == Pooling::kPixelPooled && f.samples.empty() &&
        f.categories.at(Category::kGlobal).epe.count > 0) {
      throw ProcessingError("pixel pooling requires per-pixel samples (" +
                            f.sequence + "/" + std::to_string(f.frame_index) +
                            ")");
    }
  }

  EvaluationReport report;
  report.config_label = std::move(config_label);
  report.pooling = pooling;
  std::vector<float> pixels;
  std::vector<double> medians;
  std::vector<double> means;
  std::vector<double> coverages;
  for (const Category c : categories) {
    CategoryAggregate agg;
    agg.category = c;
    medians.clear();
    means.clear();
    coverages.clear();
    std::size_t total = 0;
    for (const auto& f : frames) {
      const CategoryMetrics& m = f.categories.at(c);
      total += m.epe.count;
      if (m.epe.count > 0) {
        medians.push_back(m.epe.median);
        means.push_back(m.epe.mean);
      }
      if (!std::isnan(m.coverage)) coverages.push_back(m.coverage);
    }
    if (pooling == Pooling::kPixelPooled) {
      pixels.clear();
      for (const auto& f : frames) {
        for (const PixelSample& s : f.samples) {
          if (s.categories & Bit(c)) pixels.push_back(s.epe);
        }
      }
      agg.epe = Summarize(std::span<const float>(pixels));
    } else {
      agg.epe.median = Summarize(std::span<const double>(medians)).median;
      agg.epe.mean = Summarize(std::span<const double>(means)).mean;
      agg.epe.count = total;
    }
    agg.coverage = Summarize(std::span<const double>(coverages));
    report.aggregate.push_back(agg);
  }

  std::vector<double> mcmse;
  for (const auto& f : frames) {
    if (f.mcmse) mcmse.push_back(*f.mcmse);
  }
  report.mcmse = Summarize(std::span<const double>(mcmse));

  for (auto& f : frames) {
    f.samples.clear();
    f.samples.shrink_to_fit();
  }
  report.per_frame = std::move(frames);
  return report;
}

std::string EmitCsv(const EvaluationReport& report) {
  std::ostringstream out;
  out << "# pooling=" << PoolingName(report.pooling)
      << " config_label=" << report.config_label << '\n';
  out << kAggregateCsvHeader << '\n';
  for (const auto& a : report.aggregate) {
    out << CsvField(std::string(CategoryName(a.category))) << ','
        << FormatFloat(a.epe.median) << ',' << FormatFloat(a.epe.mean) << ','
        << FormatFloat(a.coverage.median) << ',' << FormatFloat(a.coverage.mean)
        << ',' << a.epe.count << '\n';
  }
  return out.str();
}

std::string EmitPerFrameCsv(const EvaluationReport& report) {
  std::ostringstream out;
  out << "sequence,frame_index,category,median_epe,mean_epe,coverage,count\n";
  for (const auto& f : report.per_frame) {
    for (const auto& [c, m] : f.categories) {
      out << CsvField(f.sequence) << ',' << f.frame_index << ','
          << CategoryName(c) << ',' << FormatFloat(m.epe.median) << ','
          << FormatFloat(m.epe.mean) << ',' << FormatFloat(m.coverage) << ','
          << m.epe.count << '\n';
    }
  }
  return out.str();
}

std::string EmitFramesCsv(const EvaluationReport& report) {
  struct Row {
    std::string sequence;
    int frame_index;
    std::string status;
    double mcmse;
    std::string reason;
  };
  std::vector<Row> rows;
  for (const auto& f : report.per_frame) {
    rows.push_back({f.sequence, f.frame_index, "ok", f.mcmse.value_or(kNaN), ""});
  }
  for (const auto& s : report.skipped) {
    rows.push_back({s.sequence, s.frame_index, "skipped", kNaN, s.reason});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.sequence, a.frame_index, a.status) <
           std::tie(b.sequence, b.frame_index, b.status);
  });
  std::ostringstream out;
  out << "sequence,frame_index,status,mcmse,reason\n";
  for (const auto& r : rows) {
    out << CsvField(r.sequence) << ',' << r.frame_index << ',' << r.status << ','
        << FormatFloat(r.mcmse) << ',' << CsvField(r.reason) << '\n';
  }
  return out.str();
}

std::string EmitJson(const EvaluationReport& report) {
  OrderedJson j;
  j["config_label"] = report.config_label;
  j["pooling"] = std::string(PoolingName(report.pooling));
  OrderedJson aggregate = OrderedJson::array();
  for (const auto& a : report.aggregate) {
    OrderedJson row;
    row["category"] = std::string(CategoryName(a.category));
    row["median_epe"] = JsonNumber(a.epe.median);
    row["mean_epe"] = JsonNumber(a.epe.mean);
    row["coverage_median"] = JsonNumber(a.coverage.median);
    row["coverage_mean"] = JsonNumber(a.coverage.mean);
    row["count"] = a.epe.count;
    row["coverage_frames"] = a.coverage.count;
    aggregate.push_back(std::move(row));
  }
  j["aggregate"] = std::move(aggregate);
  j["mcmse"] = SummaryJson(report.mcmse);

  OrderedJson per_frame = OrderedJson::array();
  for (const auto& f : report.per_frame) {
    OrderedJson frame;
    frame["sequence"] = f.sequence;
    frame["frame_index"] = f.frame_index;
    frame["mcmse"] = f.mcmse ? JsonNumber(*f.mcmse) : OrderedJson(nullptr);
    OrderedJson cats = OrderedJson::array();
    for (const auto& [c, m] : f.categories) {
      OrderedJson row;
      row["category"] = std::string(CategoryName(c));
      row["epe"] = SummaryJson(m.epe);
      row["coverage"] = JsonNumber(m.coverage);
      cats.push_back(std::move(row));
    }
    frame["categories"] = std::move(cats);
    per_frame.push_back(std::move(frame));
  }
  j["per_frame"] = std::move(per_frame);

  OrderedJson skipped = OrderedJson::array();
  for (const auto& s : report.skipped) {
    skipped.push_back(
        {{"sequence", s.sequence}, {"frame_index", s.frame_index}, {"reason", s.reason}});
  }
  j["skipped"] = std::move(skipped);

  OrderedJson vmaf = OrderedJson::object();
  for (const auto& [seq, value] : report.vmaf) vmaf[seq] = JsonNumber(value);
  j["vmaf"] = std::move(vmaf);
  return j.dump(2) + "\n";
}

EvaluationReport ParseJsonReport(std::string_view text) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(text);
  } catch (const OrderedJson::exception& e) {
    throw FormatError(std::string("report JSON: ") + e.what());
  }
  try {
    EvaluationReport r;
    r.config_label = j.at("config_label").get<std::string>();
    const auto pooling = ParsePooling(j.at("pooling").get<std::string>());
    if (!pooling) throw FormatError("report JSON: unknown pooling mode");
    r.pooling = *pooling;
    for (const auto& row : j.at("aggregate")) {
      CategoryAggregate a;
      a.category = CategoryFromJson(row.at("category"));
      a.epe.median = JsonDouble(row.at("median_epe"));
      a.epe.mean = JsonDouble(row.at("mean_epe"));
      a.epe.count = row.at("count").get<std::size_t>();
      a.coverage.median = JsonDouble(row.at("coverage_median"));
      a.coverage.mean = JsonDouble(row.at("coverage_mean"));
      a.coverage.count = row.value("coverage_frames", std::size_t{0});
      r.aggregate.push_back(a);
    }
    r.mcmse = SummaryFromJson(j.at("mcmse"));
    for (const auto& frame : j.at("per_frame")) {
      FrameEvaluation f;
      f.sequence = frame.at("sequence").get<std::string>();
      f.frame_index = frame.at("frame_index").get<int>();
      if (!frame.at("mcmse").is_null()) f.mcmse = JsonDouble(frame.at("mcmse"));
      for (const auto& row : frame.at("categories")) {
        CategoryMetrics m;
        m.epe = SummaryFromJson(row.at("epe"));
        m.coverage = JsonDouble(row.at("coverage"));
        f.categories.emplace(CategoryFromJson(row.at("category")), m);
      }
      r.per_frame.push_back(std::move(f));
    }
    for (const auto& s : j.at("skipped")) {
      r.skipped.push_back({s.at("sequence").get<std::string>(),
                           s.at("frame_index").get<int>(),
                           s.at("reason").get<std::string>()});
    }
    if (j.contains("vmaf")) {
      for (const auto& [seq, value] : j["vmaf"].items()) {
        r.vmaf[seq] = JsonDouble(value);
      }
    }
    return r;
  } catch (const OrderedJson::exception& e) {
    throw FormatError(std::string("report JSON: ") + e.what());
  }
}

std::vector<std::uint8_t> WriteSamples(std::span<const FrameEvaluation> frames) {
  std::vector<std::uint8_t> out(std::begin(kSamplesMagic), std::end(kSamplesMagic));
  AppendU32(out, static_cast<std::uint32_t>(frames.size()));
  for (const auto& f : frames) {
    AppendU32(out, static_cast<std::uint32_t>(f.sequence.size()));
    out.insert(out.end(), f.sequence.begin(), f.sequence.end());
    AppendU32(out, static_cast<std::uint32_t>(f.frame_index));
    const auto n = static_cast<std::uint64_t>(f.samples.size());
    AppendU32(out, static_cast<std::uint32_t>(n));
    AppendU32(out, static_cast<std::uint32_t>(n >> 32));
    for (const PixelSample& s : f.samples) {
      AppendU32(out, std::bit_cast<std::uint32_t>(s.epe));
      out.push_back(static_cast<std::uint8_t>(s.categories));
      out.push_back(static_cast<std::uint8_t>(s.categories >> 8));
    }
  }
  return out;
}

void AttachSamples(std::span<const std::uint8_t> bytes,
                   std::vector<FrameEvaluation>& frames) {
  ByteReader in(bytes);
  if (in.String(4) != std::string(kSamplesMagic, 4)) {
    throw FormatError("samples: bad magic");
  }
  std::map<std::pair<std::string, int>, std::vector<PixelSample>> by_frame;
  const auto count = in.Uint(4);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string sequence = in.String(static_cast<std::size_t>(in.Uint(4)));
    const auto frame_index = static_cast<std::int32_t>(in.Uint(4));
    const auto n = in.Uint(8);
    std::vector<PixelSample> samples;
    samples.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, 1u << 24)));
    for (std::uint64_t k = 0; k < n; ++k) {
      PixelSample s;
      s.epe = std::bit_cast<float>(static_cast<std::uint32_t>(in.Uint(4)));
      s.categories = static_cast<std::uint16_t>(in.Uint(2));
      samples.push_back(s);
    }
    by_frame[{std::move(sequence), frame_index}] = std::move(samples);
  }
  if (!in.done()) throw FormatError("samples: trailing bytes");
  for (auto& f : frames) {
    auto it = by_frame.find({f.sequence, f.frame_index});
    if (it == by_frame.end()) {
      throw FormatError("samples: no entry for frame " + f.sequence + "/" +
                        std::to_string(f.frame_index));
    }
    f.samples = std::move(it->second);
  }
}

ScatterTable EpeVsVmaf(std::span<const EvaluationReport> reports,
                       std::string_view vmaf_csv) {
  std::map<std::string, std::vector<double>> vmaf;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < vmaf_csv.size()) {
    auto eol = vmaf_csv.find('\n', pos);
    if (eol == std::string_view::npos) eol = vmaf_csv.size();
    std::string line(vmaf_csv.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string field; std::getline(ss, field, ',');) fields.push_back(field);
    if (fields.size() != 3) {
      throw ParseError(line_no, "VMAF row must be config_label,sequence,vmaf");
    }
    if (line_no == 1 && fields[0] == "config_label") continue;
    char* end = nullptr;
    const double value = std::strtod(fields[2].c_str(), &end);
    if (fields[2].empty() || *end != '\0') {
      throw ParseError(line_no, "invalid VMAF value '" + fields[2] + "'");
    }
    vmaf[fields[0]].push_back(value);
  }

  std::map<std::string, std::vector<double>> epe;
  for (const auto& r : reports) {
    const auto it = std::find_if(r.aggregate.begin(), r.aggregate.end(),
                                 [](const CategoryAggregate& a) {
                                   return a.category == Category::kGlobal;
                                 });
    if (it == r.aggregate.end()) {
      throw ProcessingError("report '" + r.config_label +
                            "' has no Global aggregate");
    }
    epe[r.config_label].push_back(it->epe.mean);
  }

  auto mean = [](const std::vector<double>& v) {
    double sum = 0.0;
    for (const double x : v) sum += x;
    return v.empty() ? kNaN : sum / static_cast<double>(v.size());
  };
  ScatterTable table;
  for (const auto& [label, values] : epe) {
    const auto it = vmaf.find(label);
    if (it == vmaf.end()) {
      table.unmatched_reports.push_back(label);
      continue;
    }
    table.rows.push_back({label, mean(values), mean(it->second)});
  }
  for (const auto& [label, values] : vmaf) {
    if (!epe.contains(label)) table.unmatched_vmaf.push_back(label);
  }
  return table;
}

std::string EmitScatterCsv(const ScatterTable& table) {
  std::ostringstream out;
  out << "config_label,mean_epe,mean_vmaf\n";
  for (const auto& r : table.rows) {
    out << CsvField(r.config_label) << ',' << FormatFloat(r.mean_epe) << ','
        << FormatFloat(r.mean_vmaf) << '\n';
  }
  for (const auto& l : table.unmatched_reports) out << "# unmatched_report=" << l << '\n';
  for (const auto& l : table.unmatched_vmaf) out << "# unmatched_vmaf=" << l << '\n';
  return out.str();
}

}  // namespace mvflow
