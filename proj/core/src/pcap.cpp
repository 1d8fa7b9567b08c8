#include "ltescope/pcap.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <limits>

namespace ltescope {

namespace {

constexpr std::uint32_t kMagicMicros = 0xA1B2C3D4;
constexpr std::uint32_t kMagicNanos = 0xA1B23C4D;

std::uint32_t bswap32(std::uint32_t v) {
  return ((v & 0x000000FFu) << 24) | ((v & 0x0000FF00u) << 8) |
         ((v & 0x00FF0000u) >> 8) | ((v & 0xFF000000u) >> 24);
}

std::uint32_t load_le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_le32(std::uint8_t* p, std::uint32_t v) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
  p[2] = static_cast<std::uint8_t>(v >> 16);
  p[3] = static_cast<std::uint8_t>(v >> 24);
}

void store_le16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
}

}  // namespace

CaptureReader::CaptureReader(const std::filesystem::path& path,
                             std::optional<std::uint32_t> expected_dlt)
    : in_(path, std::ios::binary) {
  if (!in_) {
    throw PcapError("cannot open capture file: " + path.string());
  }
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) {
    throw PcapError("cannot stat capture file: " + path.string());
  }

  std::array<std::uint8_t, 24> header{};
  in_.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in_.gcount() != static_cast<std::streamsize>(header.size())) {
    throw PcapError("not a PCAP file (short global header): " + path.string());
  }
  remaining_ = size - header.size();

  const std::uint32_t magic_le = load_le32(header.data());
  if (magic_le == kMagicMicros) {
    swapped_ = false;
    nanos_ = false;
  } else if (magic_le == kMagicNanos) {
    swapped_ = false;
    nanos_ = true;
  } else if (bswap32(magic_le) == kMagicMicros) {
    swapped_ = true;
    nanos_ = false;
  } else if (bswap32(magic_le) == kMagicNanos) {
    swapped_ = true;
    nanos_ = true;
  } else {
    throw PcapError("not a PCAP file (bad magic): " + path.string());
  }

  link_type_ = load_le32(header.data() + 20);
  if (swapped_) {
    link_type_ = bswap32(link_type_);
  }
  if (expected_dlt) {
    if (link_type_ != *expected_dlt) {
      throw PcapError("capture link type " + std::to_string(link_type_) +
                      " does not match requested DLT " + std::to_string(*expected_dlt));
    }
  } else if (link_type_ < kMinUserDlt || link_type_ > kMaxUserDlt) {
    throw PcapError("capture link type " + std::to_string(link_type_) +
                    " is not a DLT_USER value (147..162)");
  }
}

std::optional<FramingResult> CaptureReader::next() {
  if (done_) {
    return std::nullopt;
  }
  if (remaining_ == 0) {
    done_ = true;
    return std::nullopt;
  }
  if (remaining_ < 16) {
    // Container cut off inside a record header.
    done_ = true;
    return FramingResult{FramingError{0, FramingErrorKind::truncated_tag}};
  }

  std::array<std::uint8_t, 16> rec{};
  in_.read(reinterpret_cast<char*>(rec.data()), rec.size());
  if (in_.gcount() != static_cast<std::streamsize>(rec.size())) {
    done_ = true;
    return FramingResult{FramingError{0, FramingErrorKind::truncated_tag}};
  }
  remaining_ -= rec.size();

  std::uint32_t ts_sec = load_le32(rec.data());
  std::uint32_t ts_frac = load_le32(rec.data() + 4);
  std::uint32_t incl_len = load_le32(rec.data() + 8);
  if (swapped_) {
    ts_sec = bswap32(ts_sec);
    ts_frac = bswap32(ts_frac);
    incl_len = bswap32(incl_len);
  }

  if (incl_len > remaining_) {
    done_ = true;
    return FramingResult{FramingError{0, FramingErrorKind::truncated_tag}};
  }

  std::vector<std::uint8_t> data(incl_len);
  if (incl_len > 0) {
    in_.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(incl_len));
    if (in_.gcount() != static_cast<std::streamsize>(incl_len)) {
      done_ = true;
      return FramingResult{FramingError{0, FramingErrorKind::truncated_tag}};
    }
  }
  remaining_ -= incl_len;

  auto result = parse_mac_lte_framing(data);
  if (auto* frame = std::get_if<CaptureFrame>(&result)) {
    const std::int64_t micros = nanos_ ? ts_frac / 1000 : ts_frac;
    frame->timestamp_us = static_cast<std::int64_t>(ts_sec) * 1'000'000 + micros;
  }
  return result;
}

CaptureWriter::CaptureWriter(const std::filesystem::path& path, std::uint32_t link_type)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (link_type < kMinUserDlt || link_type > kMaxUserDlt) {
    throw std::invalid_argument("link type must be a DLT_USER value (147..162)");
  }
  if (!out_) {
    throw PcapError("cannot open output capture file: " + path.string());
  }
  std::array<std::uint8_t, 24> header{};
  store_le32(header.data(), kMagicMicros);
  store_le16(header.data() + 4, 2);   // version 2.4
  store_le16(header.data() + 6, 4);
  store_le32(header.data() + 8, 0);   // thiszone
  store_le32(header.data() + 12, 0);  // sigfigs
  store_le32(header.data() + 16, 65535);
  store_le32(header.data() + 20, link_type);
  out_.write(reinterpret_cast<const char*>(header.data()), header.size());
  if (!out_) {
    throw PcapError("failed writing PCAP global header: " + path.string());
  }
}

void CaptureWriter::write(const CaptureFrame& frame) {
  if (frame.timestamp_us < 0 ||
      frame.timestamp_us / 1'000'000 > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("frame timestamp outside PCAP range");
  }
  const auto record = serialize_mac_lte_framing(frame);

  std::array<std::uint8_t, 16> rec{};
  store_le32(rec.data(), static_cast<std::uint32_t>(frame.timestamp_us / 1'000'000));
  store_le32(rec.data() + 4, static_cast<std::uint32_t>(frame.timestamp_us % 1'000'000));
  store_le32(rec.data() + 8, static_cast<std::uint32_t>(record.size()));
  store_le32(rec.data() + 12, static_cast<std::uint32_t>(record.size()));
  out_.write(reinterpret_cast<const char*>(rec.data()), rec.size());
  out_.write(reinterpret_cast<const char*>(record.data()),
             static_cast<std::streamsize>(record.size()));
  if (!out_) {
    throw PcapError("failed writing PCAP record");
  }
}

std::vector<FramingResult> read_capture(const std::filesystem::path& path,
                                        std::optional<std::uint32_t> expected_dlt) {
  CaptureReader reader(path, expected_dlt);
  std::vector<FramingResult> items;
  while (auto item = reader.next()) {
    items.push_back(std::move(*item));
  }
  return items;
}

void write_capture(std::span<const CaptureFrame> frames, const std::filesystem::path& path,
                   std::uint32_t link_type) {
  CaptureWriter writer(path, link_type);
  for (const auto& frame : frames) {
    writer.write(frame);
  }
}

}  // namespace ltescope
