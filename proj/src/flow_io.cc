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

#include "mvflow/flow_io.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>

#include "mvflow/errors.h"

namespace mvflow {
namespace {

constexpr char kRawMagic[4] = {'M', 'V', 'F', '1'};
constexpr std::size_t kHeaderSize = 12;

std::uint32_t LoadU32(std::span<const std::uint8_t> b, std::size_t offset) {
  return static_cast<std::uint32_t>(b[offset]) |
         static_cast<std::uint32_t>(b[offset + 1]) << 8 |
         static_cast<std::uint32_t>(b[offset + 2]) << 16 |
         static_cast<std::uint32_t>(b[offset + 3]) << 24;
}

void StoreU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

float LoadF32(std::span<const std::uint8_t> b, std::size_t offset) {
  return std::bit_cast<float>(LoadU32(b, offset));
}

void StoreF32(std::vector<std::uint8_t>& out, float v) {
  StoreU32(out, std::bit_cast<std::uint32_t>(v));
}

// Reads width/height at bytes [4, 12) and checks the payload length.
std::pair<int, int> ReadDims(std::span<const std::uint8_t> bytes,
                             std::size_t planes, const char* what) {
  if (bytes.size() < kHeaderSize) {
    throw FormatError(std::string(what) + ": truncated header");
  }
  const auto w = static_cast<std::int32_t>(LoadU32(bytes, 4));
  const auto h = static_cast<std::int32_t>(LoadU32(bytes, 8));
  if (w <= 0 || h <= 0) {
    throw FormatError(std::string(what) + ": nonpositive dimensions " +
                      std::to_string(w) + "x" + std::to_string(h));
  }
  const std::size_t expected = kHeaderSize + planes * 4 *
                                                 static_cast<std::size_t>(w) *
                                                 static_cast<std::size_t>(h);
  if (bytes.size() < expected) {
    throw FormatError(std::string(what) + ": truncated payload (" +
                      std::to_string(bytes.size()) + " of " +
                      std::to_string(expected) + " bytes)");
  }
  if (bytes.size() > expected) {
    throw FormatError(std::string(what) + ": trailing bytes after payload");
  }
  return {w, h};
}

void CheckWritable(const DenseFlowField& field) {
  if (field.width() <= 0 || field.height() <= 0) {
    throw FormatError("cannot serialize a flow field with empty dimensions");
  }
}

bool HasRawMagic(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 4 && std::equal(std::begin(kRawMagic),
                                         std::end(kRawMagic), bytes.begin(),
                                         [](char c, std::uint8_t b) {
                                           return static_cast<std::uint8_t>(c) == b;
                                         });
}

// Netpbm header token reader: skips whitespace and '#' comments.
class PnmHeader {
 public:
  explicit PnmHeader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string Token() {
    SkipSpace();
    std::string out;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) {
      out.push_back(static_cast<char>(bytes_[pos_++]));
    }
    return out;
  }

  int Int() {
    const std::string t = Token();
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c));
        })) {
      throw FormatError("PGM: bad header field '" + t + "'");
    }
    return std::stoi(t);
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t RasterOffset() const { return pos_ + 1; }

 private:
  void SkipSpace() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// Middlebury color wheel; segment lengths RY, YG, GC, CB, BM, MR.
std::array<std::array<std::uint8_t, 3>, kColorWheelSize> MakeColorWheel() {
  constexpr int kSegments[6] = {15, 6, 4, 11, 13, 6};
  std::array<std::array<std::uint8_t, 3>, kColorWheelSize> wheel{};
  int k = 0;
  auto set = [&](int r, int g, int b) {
    wheel[k++] = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                  static_cast<std::uint8_t>(b)};
  };
  for (int i = 0; i < kSegments[0]; ++i) set(255, 255 * i / kSegments[0], 0);
  for (int i = 0; i < kSegments[1]; ++i) set(255 - 255 * i / kSegments[1], 255, 0);
  for (int i = 0; i < kSegments[2]; ++i) set(0, 255, 255 * i / kSegments[2]);
  for (int i = 0; i < kSegments[3]; ++i) set(0, 255 - 255 * i / kSegments[3], 255);
  for (int i = 0; i < kSegments[4]; ++i) set(255 * i / kSegments[4], 0, 255);
  for (int i = 0; i < kSegments[5]; ++i) set(255, 0, 255 - 255 * i / kSegments[5]);
  return wheel;
}

const auto& ColorWheel() {
  static const auto wheel = MakeColorWheel();
  return wheel;
}

}  // namespace

DenseFlowField ReadFlo(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw FormatError(".flo: truncated header");
  const float magic = LoadF32(bytes, 0);
  if (std::bit_cast<std::uint32_t>(magic) !=
      std::bit_cast<std::uint32_t>(kFloMagic)) {
    throw FormatError(".flo: bad magic");
  }
  const auto [w, h] = ReadDims(bytes, 2, ".flo");
  DenseFlowField field(w, h);
  auto data = field.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = LoadF32(bytes, kHeaderSize + 4 * i);
  }
  return field;
}

std::vector<std::uint8_t> WriteFlo(const DenseFlowField& field) {
  CheckWritable(field);
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + 4 * field.data().size());
  StoreF32(out, kFloMagic);
  StoreU32(out, static_cast<std::uint32_t>(field.width()));
  StoreU32(out, static_cast<std::uint32_t>(field.height()));
  for (const float v : field.data()) StoreF32(out, v);
  return out;
}

DenseFlowField ReadRawPlanar(std::span<const std::uint8_t> bytes) {
  if (!HasRawMagic(bytes)) throw FormatError("RAW_PLANAR: bad magic");
  const auto [w, h] = ReadDims(bytes, 2, "RAW_PLANAR");
  DenseFlowField field(w, h);
  const std::size_t n = field.pixel_count();
  auto data = field.data();
  for (std::size_t i = 0; i < n; ++i) {
    data[2 * i] = LoadF32(bytes, kHeaderSize + 4 * i);
    data[2 * i + 1] = LoadF32(bytes, kHeaderSize + 4 * (n + i));
  }
  return field;
}

std::vector<std::uint8_t> WriteRawPlanar(const DenseFlowField& field) {
  CheckWritable(field);
  std::vector<std::uint8_t> out;
  const auto data = field.data();
  out.reserve(kHeaderSize + 4 * data.size());
  out.insert(out.end(), std::begin(kRawMagic), std::end(kRawMagic));
  StoreU32(out, static_cast<std::uint32_t>(field.width()));
  StoreU32(out, static_cast<std::uint32_t>(field.height()));
  for (std::size_t i = 0; i < data.size(); i += 2) StoreF32(out, data[i]);
  for (std::size_t i = 1; i < data.size(); i += 2) StoreF32(out, data[i]);
  return out;
}

GrayImage ReadRawPlanarMask(std::span<const std::uint8_t> bytes) {
  if (!HasRawMagic(bytes)) throw FormatError("RAW_PLANAR mask: bad magic");
  const auto [w, h] = ReadDims(bytes, 1, "RAW_PLANAR mask");
  GrayImage mask(w, h);
  for (std::size_t i = 0; i < mask.pixels.size(); ++i) {
    mask.pixels[i] = LoadF32(bytes, kHeaderSize + 4 * i) != 0.0f ? 255 : 0;
  }
  return mask;
}

DenseFlowField ReadFlowBytes(std::span<const std::uint8_t> bytes) {
  if (HasRawMagic(bytes)) return ReadRawPlanar(bytes);
  return ReadFlo(bytes);
}

std::vector<std::uint8_t> WriteFlowBytes(const DenseFlowField& field,
                                         FlowFileFormat format) {
  return format == FlowFileFormat::kRawPlanar ? WriteRawPlanar(field)
                                              : WriteFlo(field);
}

const char* FlowFileExtension(FlowFileFormat format) {
  return format == FlowFileFormat::kRawPlanar ? ".mvf" : ".flo";
}

GrayImage ReadPgm(std::span<const std::uint8_t> bytes) {
  PnmHeader header(bytes);
  if (header.Token() != "P5") throw FormatError("PGM: expected P5 magic");
  const int w = header.Int();
  const int h = header.Int();
  const int maxval = header.Int();
  if (w <= 0 || h <= 0) throw FormatError("PGM: nonpositive dimensions");
  if (maxval <= 0 || maxval > 255) {
    throw FormatError("PGM: only 8-bit images are supported");
  }
  const std::size_t offset = header.RasterOffset();
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (offset > bytes.size() || bytes.size() - offset < n) {
    throw FormatError("PGM: truncated raster");
  }
  GrayImage image(w, h);
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(offset), n,
              image.pixels.begin());
  return image;
}

std::vector<std::uint8_t> WritePgm(const GrayImage& image) {
  if (image.width <= 0 || image.height <= 0) {
    throw FormatError("cannot write an empty PGM");
  }
  const std::string header = "P5\n" + std::to_string(image.width) + " " +
                             std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

std::vector<std::uint8_t> WritePpm(const RgbImage& image) {
  if (image.width <= 0 || image.height <= 0) {
    throw FormatError("cannot write an empty PPM");
  }
  const std::string header = "P6\n" + std::to_string(image.width) + " " +
                             std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

std::array<std::uint8_t, 3> ColorWheelEntry(int k) {
  return ColorWheel().at(static_cast<std::size_t>(k));
}

double MagnitudePercentile99(const DenseFlowField& field) {
  std::vector<double> mags;
  mags.reserve(field.pixel_count());
  for (int y = 0; y < field.height(); ++y) {
    for (int x = 0; x < field.width(); ++x) {
      const FlowVector f = field.at(x, y);
      if (std::isfinite(f.u) && std::isfinite(f.v)) {
        mags.push_back(std::hypot(static_cast<double>(f.u), f.v));
      }
    }
  }
  if (mags.empty()) return 0.0;
  // Nearest rank ceil(0.99 n), in integers.
  const std::size_t rank = (99 * mags.size() + 99) / 100;
  const auto nth = mags.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(rank, 1) - 1);
  std::nth_element(mags.begin(), nth, mags.end());
  return *nth;
}

RgbImage Colorize(const DenseFlowField& field,
                  std::optional<float> max_magnitude) {
  double scale = max_magnitude ? static_cast<double>(*max_magnitude)
                               : MagnitudePercentile99(field);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    double largest = 0.0;
    for (int y = 0; y < field.height(); ++y) {
      for (int x = 0; x < field.width(); ++x) {
        const FlowVector f = field.at(x, y);
        if (std::isfinite(f.u) && std::isfinite(f.v)) {
          largest = std::max(largest, std::hypot(static_cast<double>(f.u), f.v));
        }
      }
    }
    scale = largest > 0.0 ? largest : 1.0;
  }

  const auto& wheel = ColorWheel();
  RgbImage image;
  image.width = field.width();
  image.height = field.height();
  image.pixels.assign(3 * field.pixel_count(), 0);
  std::size_t out = 0;
  for (int y = 0; y < field.height(); ++y) {
    for (int x = 0; x < field.width(); ++x, out += 3) {
      const FlowVector f = field.at(x, y);
      if (!std::isfinite(f.u) || !std::isfinite(f.v)) continue;
      const double fx = f.u / scale;
      const double fy = f.v / scale;
      const double rad = std::sqrt(fx * fx + fy * fy);
      const double a = std::atan2(-fy, -fx) / std::numbers::pi;
      const double fk = (a + 1.0) / 2.0 * (kColorWheelSize - 1);
      const int k0 = static_cast<int>(fk);
      const int k1 = (k0 + 1) % kColorWheelSize;
      const double t = fk - k0;
      for (int b = 0; b < 3; ++b) {
        const double c0 = wheel[k0][b] / 255.0;
        const double c1 = wheel[k1][b] / 255.0;
        double col = (1.0 - t) * c0 + t * c1;
        if (rad <= 1.0) {
          col = 1.0 - rad * (1.0 - col);
        } else {
          col *= 0.75;
        }
        image.pixels[out + b] = static_cast<std::uint8_t>(std::lround(255.0 * col));
      }
    }
  }
  return image;
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ProcessingError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ProcessingError("write failed for " + path.string());
}

}  // namespace mvflow
