#pragma once

// Labeled frame files.
//
// Binary layout, all integers little-endian:
//   "JVMD"            4 bytes magic
//   version           u16 (currently 1)
//   frame length L    u32
//   sample rate       f64 IEEE-754
//   entry count       u32
//   per entry:
//     label length    u16
//     label           UTF-8 bytes
//     samples         L x f32 IEEE-754
//
// CSV interchange: one frame per row, label first, comma separated, '.' decimal.

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "jvmd/errors.hpp"
#include "jvmd/types.hpp"

namespace jvmd {

inline constexpr char kFrameMagic[4] = {'J', 'V', 'M', 'D'};
inline constexpr std::uint16_t kFrameFormatVersion = 1;

struct LabeledFrame {
  std::string label;
  RealFrame frame;
};

/// Labeled frames of one shape (length and sample rate).
class LabeledFrameSet {
public:
  LabeledFrameSet() = default;

  explicit LabeledFrameSet(std::vector<LabeledFrame> entries) {
    for (auto& e : entries) add(std::move(e.label), std::move(e.frame));
  }

  void add(std::string label, RealFrame frame) {
    if (label.empty()) throw InvalidInput("frame labels must be nonempty");
    if (label.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw InvalidInput("frame label longer than 65535 bytes");
    }
    if (!entries_.empty() && (frame.size() != frame_length() ||
                              frame.sample_rate_hz() != sample_rate_hz())) {
      throw InvalidInput("all frames in a set must share length and sample rate");
    }
    entries_.push_back({std::move(label), std::move(frame)});
  }

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<LabeledFrame>& entries() const noexcept { return entries_; }
  const LabeledFrame& operator[](std::size_t i) const noexcept { return entries_[i]; }
  std::size_t frame_length() const noexcept { return entries_.front().frame.size(); }
  double sample_rate_hz() const noexcept { return entries_.front().frame.sample_rate_hz(); }

private:
  std::vector<LabeledFrame> entries_;
};

namespace detail {

class ByteWriter {
public:
  void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void f32(float v) { le(std::bit_cast<std::uint32_t>(v), 4); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  const std::vector<char>& data() const noexcept { return buf_; }

private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::vector<char> buf_;
};

class ByteReader {
public:
  explicit ByteReader(const std::vector<unsigned char>& data) : data_(data) {}

  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }

  void need(std::size_t n) const {
    if (remaining() < n) throw Truncated(pos_);
  }
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{data_[pos_ + static_cast<std::size_t>(i)]} << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  float f32() { return std::bit_cast<float>(static_cast<std::uint32_t>(le(4))); }
  double f64() { return std::bit_cast<double>(le(8)); }
  std::string string(std::size_t n) {
    need(n);
    std::string s(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return s;
  }

private:
  const std::vector<unsigned char>& data_;
  std::size_t pos_ = 0;
};

/// Writes `bytes` to a sibling temp file and renames it over `path`.
inline void atomic_write(const std::filesystem::path& path, const std::vector<char>& bytes) {
  if (path.empty()) throw IoError(path.string(), "empty destination path");
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError(path.string(), "write failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError(path.string(), "cannot move temp file into place");
  }
}

inline std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace detail

/// Serializes the set in the binary layout above (samples rounded to f32).
inline std::vector<char> encode_frames(const LabeledFrameSet& set) {
  if (set.empty()) throw InvalidInput("cannot write an empty frame set");
  if (set.frame_length() > std::numeric_limits<std::uint32_t>::max() ||
      set.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidInput("frame set too large for the file format");
  }
  detail::ByteWriter w;
  w.bytes(std::string_view(kFrameMagic, 4));
  w.u16(kFrameFormatVersion);
  w.u32(static_cast<std::uint32_t>(set.frame_length()));
  w.f64(set.sample_rate_hz());
  w.u32(static_cast<std::uint32_t>(set.size()));
  for (const auto& e : set.entries()) {
    w.u16(static_cast<std::uint16_t>(e.label.size()));
    w.bytes(e.label);
    for (double v : e.frame.samples()) w.f32(static_cast<float>(v));
  }
  return w.data();
}

inline void write_frames(const LabeledFrameSet& set, const std::filesystem::path& destination) {
  if (destination.empty()) throw IoError(destination.string(), "empty destination path");
  detail::atomic_write(destination, encode_frames(set));
}

inline LabeledFrameSet decode_frames(const std::vector<unsigned char>& bytes) {
  detail::ByteReader r(bytes);
  r.need(4);
  if (r.string(4) != std::string_view(kFrameMagic, 4)) throw BadMagic(0);
  const std::size_t version_at = r.offset();
  const auto version = r.u16();
  if (version != kFrameFormatVersion) throw VersionMismatch(version, version_at);
  const std::size_t length_at = r.offset();
  const std::uint32_t length = r.u32();
  const double rate = r.f64();
  const std::uint32_t count = r.u32();
  if (length < 4 || length % 2 != 0) {
    throw FormatError("invalid frame length " + std::to_string(length), length_at);
  }

  LabeledFrameSet set;
  for (std::uint32_t e = 0; e < count; ++e) {
    const std::size_t entry_at = r.offset();
    const auto label_len = r.u16();
    std::string label = r.string(label_len);
    r.need(std::size_t{length} * 4);
    std::vector<double> samples(length);
    for (auto& v : samples) v = r.f32();
    try {
      set.add(std::move(label), RealFrame(std::move(samples), rate));
    } catch (const Error& err) {
      throw FormatError(std::string("invalid entry: ") + err.what(), entry_at);
    }
  }
  if (r.remaining() != 0) throw TrailingData(r.offset());
  if (set.empty()) throw FormatError("file declares no entries", length_at);
  return set;
}

/// Reads a file written by write_frames. Nothing is returned unless the whole
/// file parses.
inline LabeledFrameSet read_frames(const std::filesystem::path& source) {
  return decode_frames(detail::read_all(source));
}

/// One frame per row: label,v0,v1,...
inline LabeledFrameSet read_frames_csv(const std::filesystem::path& source, double sample_rate_hz) {
  std::ifstream in(source);
  if (!in) throw IoError(source.string(), "cannot open for reading");
  LabeledFrameSet set;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InvalidInput("CSV row " + std::to_string(row) + " has no samples");
    }
    std::string label = line.substr(0, comma);
    std::vector<double> samples;
    const char* p = line.data() + comma + 1;
    const char* end = line.data() + line.size();
    while (p <= end) {
      while (p < end && *p == ' ') ++p;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{}) {
        throw InvalidInput("CSV row " + std::to_string(row) + ": bad number");
      }
      samples.push_back(v);
      p = next;
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      if (*p != ',') throw InvalidInput("CSV row " + std::to_string(row) + ": expected ','");
      ++p;
    }
    set.add(std::move(label), RealFrame(std::move(samples), sample_rate_hz));
  }
  if (set.empty()) throw InvalidInput("CSV file has no frames: " + source.string());
  return set;
}

inline void write_frames_csv(const LabeledFrameSet& set, const std::filesystem::path& destination) {
  std::string text;
  char buf[32];
  for (const auto& e : set.entries()) {
    text += e.label;
    for (double v : e.frame.samples()) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
      text += ',';
      text.append(buf, ptr);
    }
    text += '\n';
  }
  detail::atomic_write(destination, std::vector<char>(text.begin(), text.end()));
}

/// Reads the binary format, or CSV when the extension is .csv.
inline LabeledFrameSet load_frames(const std::filesystem::path& source,
                                   double csv_sample_rate_hz = 1.0) {
  if (source.extension() == ".csv") return read_frames_csv(source, csv_sample_rate_hz);
  return read_frames(source);
}

struct LabeledBatch {
  std::string label;
  FrameBatch batch;
};

struct Batching {
  std::vector<LabeledBatch> batches;
  std::size_t dropped = 0;
};

/// Groups consecutive same-label runs into batches of exactly M frames, in
/// input order. Each run's remainder (< M frames) is dropped and counted.
inline Batching batch_by_label(const LabeledFrameSet& set, std::size_t m) {
  if (m < 1) throw InvalidConfig("batch size M must be >= 1");
  Batching out;
  const auto& entries = set.entries();
  std::size_t i = 0;
  while (i < entries.size()) {
    std::size_t end = i;
    while (end < entries.size() && entries[end].label == entries[i].label) ++end;
    const std::size_t run = end - i;
    for (std::size_t b = 0; b + m <= run; b += m) {
      std::vector<RealFrame> frames;
      frames.reserve(m);
      for (std::size_t k = 0; k < m; ++k) frames.push_back(entries[i + b + k].frame);
      out.batches.push_back({entries[i].label, FrameBatch(std::move(frames))});
    }
    out.dropped += run % m;
    i = end;
  }
  return out;
}

}  // namespace jvmd
