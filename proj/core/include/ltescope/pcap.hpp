// PCAP container I/O with MAC-LTE per-record framing. Files use a DLT_USER
// link type (147..162, default 149) so a protocol analyzer with a matching
// DLT_USER table entry dissects the records as MAC-LTE.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ltescope/mac_lte.hpp"

namespace ltescope {

inline constexpr std::uint32_t kDefaultDlt = 149;
inline constexpr std::uint32_t kMinUserDlt = 147;
inline constexpr std::uint32_t kMaxUserDlt = 162;

/// Unreadable file, bad global header, or unwritable output.
class PcapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Streaming single-pass reader. Yields one item per record in file order;
/// malformed records become FramingError items and the stream continues.
/// A truncated container yields one final truncated_tag error. A reader is
/// confined to one thread at a time; independent files may be read
/// concurrently.
class CaptureReader {
 public:
  /// Opens and validates the global header. When `expected_dlt` is set the
  /// file's link type must match it exactly; otherwise any DLT_USER value
  /// (147..162) is accepted.
  explicit CaptureReader(const std::filesystem::path& path,
                         std::optional<std::uint32_t> expected_dlt = std::nullopt);

  std::uint32_t link_type() const { return link_type_; }
  bool nanosecond_timestamps() const { return nanos_; }

  /// Next record, or nullopt at end of stream.
  std::optional<FramingResult> next();

 private:
  std::ifstream in_;
  std::uint64_t remaining_ = 0;  // bytes left after the global header
  std::uint32_t link_type_ = kDefaultDlt;
  bool swapped_ = false;
  bool nanos_ = false;
  bool done_ = false;
};

/// Writes frames as they arrive; the global header goes out on construction.
class CaptureWriter {
 public:
  explicit CaptureWriter(const std::filesystem::path& path,
                         std::uint32_t link_type = kDefaultDlt);

  /// Validates the frame (CaptureFrame invariants) and appends one record.
  /// Throws std::invalid_argument for invalid frames, PcapError on I/O
  /// failure.
  void write(const CaptureFrame& frame);

 private:
  std::ofstream out_;
};

/// Reads a whole file into memory. Convenience for tests and small captures;
/// the CLI streams via CaptureReader.
std::vector<FramingResult> read_capture(const std::filesystem::path& path,
                                        std::optional<std::uint32_t> expected_dlt = std::nullopt);

void write_capture(std::span<const CaptureFrame> frames, const std::filesystem::path& path,
                   std::uint32_t link_type = kDefaultDlt);

}  // namespace ltescope
