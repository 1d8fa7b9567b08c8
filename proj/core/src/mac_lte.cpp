#include "ltescope/mac_lte.hpp"

#include <cstring>
#include <stdexcept>

namespace ltescope {

namespace {

constexpr char kStartString[] = "mac-lte";  // 7 bytes on the wire
constexpr std::size_t kStartLen = 7;

constexpr std::uint8_t kPayloadTag = 0x01;
constexpr std::uint8_t kRntiTag = 0x02;
constexpr std::uint8_t kUeidTag = 0x03;
constexpr std::uint8_t kSfnSubframeTag = 0x04;

FramingError err(std::size_t offset, FramingErrorKind kind) { return {offset, kind}; }

}  // namespace

const char* to_string(FramingErrorKind kind) {
  switch (kind) {
    case FramingErrorKind::bad_start_string: return "bad_start_string";
    case FramingErrorKind::unknown_tag: return "unknown_tag";
    case FramingErrorKind::truncated_tag: return "truncated_tag";
    case FramingErrorKind::missing_payload: return "missing_payload";
  }
  return "unknown";
}

const char* to_string(RntiType rnti_type) {
  switch (rnti_type) {
    case RntiType::no_rnti: return "no_rnti";
    case RntiType::p_rnti: return "p_rnti";
    case RntiType::ra_rnti: return "ra_rnti";
    case RntiType::c_rnti: return "c_rnti";
    case RntiType::si_rnti: return "si_rnti";
    case RntiType::sps_rnti: return "sps_rnti";
  }
  return "unknown";
}

const char* to_string(RadioType radio_type) {
  return radio_type == RadioType::fdd ? "fdd" : "tdd";
}

const char* to_string(Direction direction) {
  return direction == Direction::uplink ? "uplink" : "downlink";
}

const char* to_string(Channel channel) {
  switch (channel) {
    case Channel::pcch: return "PCCH";
    case Channel::bcch_dl_sch: return "BCCH_DL_SCH";
    case Channel::bcch_bch: return "BCCH_BCH";
    case Channel::other: return "other";
  }
  return "unknown";
}

FramingResult parse_mac_lte_framing(std::span<const std::uint8_t> record) {
  if (record.size() < kStartLen ||
      std::memcmp(record.data(), kStartString, kStartLen) != 0) {
    return err(0, FramingErrorKind::bad_start_string);
  }
  if (record.size() < kStartLen + 3) {
    return err(record.size(), FramingErrorKind::truncated_tag);
  }

  CaptureFrame frame;
  std::size_t pos = kStartLen;

  const std::uint8_t radio = record[pos];
  if (radio != 1 && radio != 2) {
    return err(pos, FramingErrorKind::unknown_tag);
  }
  frame.radio_type = static_cast<RadioType>(radio);
  ++pos;

  const std::uint8_t direction = record[pos];
  if (direction > 1) {
    return err(pos, FramingErrorKind::unknown_tag);
  }
  frame.direction = static_cast<Direction>(direction);
  ++pos;

  const std::uint8_t rnti_type = record[pos];
  if (rnti_type > 5) {
    return err(pos, FramingErrorKind::unknown_tag);
  }
  frame.rnti_type = static_cast<RntiType>(rnti_type);
  ++pos;

  while (true) {
    if (pos >= record.size()) {
      return err(pos, FramingErrorKind::missing_payload);
    }
    const std::uint8_t tag = record[pos];
    const std::size_t tag_at = pos;
    ++pos;
    switch (tag) {
      case kPayloadTag: {
        if (pos >= record.size()) {
          return err(tag_at, FramingErrorKind::missing_payload);
        }
        frame.payload.assign(record.begin() + static_cast<std::ptrdiff_t>(pos),
                             record.end());
        if (frame.rnti_type == RntiType::p_rnti && frame.rnti && *frame.rnti != kPagingRnti) {
          return err(tag_at, FramingErrorKind::unknown_tag);
        }
        return frame;
      }
      case kRntiTag: {
        if (record.size() - pos < 2) {
          return err(tag_at, FramingErrorKind::truncated_tag);
        }
        frame.rnti = static_cast<std::uint16_t>((record[pos] << 8) | record[pos + 1]);
        pos += 2;
        break;
      }
      case kUeidTag: {
        if (record.size() - pos < 2) {
          return err(tag_at, FramingErrorKind::truncated_tag);
        }
        pos += 2;  // not modeled, skipped
        break;
      }
      case kSfnSubframeTag: {
        if (record.size() - pos < 2) {
          return err(tag_at, FramingErrorKind::truncated_tag);
        }
        const std::uint16_t packed =
            static_cast<std::uint16_t>((record[pos] << 8) | record[pos + 1]);
        const std::uint16_t sfn = packed >> 4;
        const std::uint8_t subframe = packed & 0x0F;
        if (sfn > 1023 || subframe > 9) {
          return err(pos, FramingErrorKind::unknown_tag);
        }
        frame.sfn = sfn;
        frame.subframe = subframe;
        pos += 2;
        break;
      }
      default:
        return err(tag_at, FramingErrorKind::unknown_tag);
    }
  }
}

std::optional<std::string> validate_frame(const CaptureFrame& frame) {
  if (frame.payload.empty()) {
    return "empty payload";
  }
  if (frame.rnti_type == RntiType::p_rnti && frame.rnti && *frame.rnti != kPagingRnti) {
    return "P-RNTI frame with rnti != 0xFFFE";
  }
  if (frame.sfn.has_value() != frame.subframe.has_value()) {
    return "sfn and subframe must be set together";
  }
  if (frame.sfn && *frame.sfn > 1023) {
    return "sfn out of range";
  }
  if (frame.subframe && *frame.subframe > 9) {
    return "subframe out of range";
  }
  return std::nullopt;
}

std::vector<std::uint8_t> serialize_mac_lte_framing(const CaptureFrame& frame) {
  if (auto problem = validate_frame(frame)) {
    throw std::invalid_argument("invalid capture frame: " + *problem);
  }
  std::vector<std::uint8_t> out;
  out.reserve(kStartLen + 3 + 8 + 1 + frame.payload.size());
  out.insert(out.end(), kStartString, kStartString + kStartLen);
  out.push_back(static_cast<std::uint8_t>(frame.radio_type));
  out.push_back(static_cast<std::uint8_t>(frame.direction));
  out.push_back(static_cast<std::uint8_t>(frame.rnti_type));
  if (frame.rnti) {
    out.push_back(kRntiTag);
    out.push_back(static_cast<std::uint8_t>(*frame.rnti >> 8));
    out.push_back(static_cast<std::uint8_t>(*frame.rnti & 0xFF));
  }
  if (frame.sfn) {
    const std::uint16_t packed =
        static_cast<std::uint16_t>((*frame.sfn << 4) | (*frame.subframe & 0x0F));
    out.push_back(kSfnSubframeTag);
    out.push_back(static_cast<std::uint8_t>(packed >> 8));
    out.push_back(static_cast<std::uint8_t>(packed & 0xFF));
  }
  out.push_back(kPayloadTag);
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

Channel classify_channel(const CaptureFrame& frame) {
  switch (frame.rnti_type) {
    case RntiType::p_rnti:
      return Channel::pcch;
    case RntiType::si_rnti:
      return Channel::bcch_dl_sch;
    case RntiType::no_rnti:
      return frame.rnti ? Channel::other : Channel::bcch_bch;
    default:
      return Channel::other;
  }
}

}  // namespace ltescope
