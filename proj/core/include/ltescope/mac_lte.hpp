// Per-record MAC-LTE framing as understood by Wireshark's MAC-LTE
// dissector when bound to a DLT_USER link type. The layout is frozen:
//
//   "mac-lte"            7-byte start string, no terminator
//   radio_type           1 byte   1=FDD 2=TDD
//   direction            1 byte   0=uplink 1=downlink
//   rnti_type            1 byte   0..5
//   optional tags        0x02 RNTI (2B big-endian)
//                        0x03 UEID (2B, accepted and ignored)
//                        0x04 SFN/subframe (2B big-endian, (sfn<<4)|subframe)
//   payload tag          0x01 followed by the MAC PDU to end of record

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ltescope {

enum class RadioType : std::uint8_t { fdd = 1, tdd = 2 };
enum class Direction : std::uint8_t { uplink = 0, downlink = 1 };
enum class RntiType : std::uint8_t {
  no_rnti = 0,
  p_rnti = 1,
  ra_rnti = 2,
  c_rnti = 3,
  si_rnti = 4,
  sps_rnti = 5,
};

inline constexpr std::uint16_t kPagingRnti = 0xFFFE;
inline constexpr std::uint16_t kSiRnti = 0xFFFF;

struct CaptureFrame {
  std::int64_t timestamp_us = 0;
  RadioType radio_type = RadioType::fdd;
  Direction direction = Direction::downlink;
  RntiType rnti_type = RntiType::no_rnti;
  std::optional<std::uint16_t> rnti;
  std::optional<std::uint16_t> sfn;      // 0..1023, paired with subframe
  std::optional<std::uint8_t> subframe;  // 0..9
  std::vector<std::uint8_t> payload;     // non-empty for valid frames

  bool operator==(const CaptureFrame&) const = default;
};

// `unknown_tag` also covers field values outside the frozen layout (bad
// radio_type/direction/rnti_type codes, subframe > 9, sfn > 1023, P-RNTI
// whose RNTI is not 0xFFFE); the offset points at the offending byte.
enum class FramingErrorKind : std::uint8_t {
  bad_start_string,
  unknown_tag,
  truncated_tag,
  missing_payload,
};

const char* to_string(FramingErrorKind kind);
const char* to_string(RntiType rnti_type);
const char* to_string(RadioType radio_type);
const char* to_string(Direction direction);

struct FramingError {
  std::size_t offset = 0;  // byte index in the record
  FramingErrorKind kind = FramingErrorKind::bad_start_string;

  bool operator==(const FramingError&) const = default;
};

using FramingResult = std::variant<CaptureFrame, FramingError>;

/// Decodes one PCAP record payload. Total over arbitrary input: always a
/// frame or exactly one FramingError. The frame's timestamp_us is left zero;
/// the capture reader stamps it from the record header.
FramingResult parse_mac_lte_framing(std::span<const std::uint8_t> record);

/// Inverse of parse_mac_lte_framing for valid frames. Throws
/// std::invalid_argument when the frame violates an invariant (empty
/// payload, out-of-range sfn/subframe or unpaired sfn/subframe, P-RNTI with
/// rnti != 0xFFFE).
std::vector<std::uint8_t> serialize_mac_lte_framing(const CaptureFrame& frame);

/// Returns an error description when the frame cannot be framed, nothing
/// when it is valid.
std::optional<std::string> validate_frame(const CaptureFrame& frame);

enum class Channel : std::uint8_t { pcch, bcch_dl_sch, bcch_bch, other };

const char* to_string(Channel channel);

/// P-RNTI -> PCCH, SI-RNTI -> BCCH_DL_SCH, NO_RNTI with no RNTI tag ->
/// BCCH_BCH (MIB rides PBCH without an RNTI), anything else -> other.
/// Paging and system-information MAC PDUs are transparent, so the payload
/// feeds the RRC codec unchanged.
Channel classify_channel(const CaptureFrame& frame);

}  // namespace ltescope
