// Decoder/encoder for the Rel-8 RRC message subset carried on PCCH and the
// broadcast channels: Paging, MasterInformationBlock, and
// SystemInformationBlockType1 header fields, plus presence detection for the
// SystemInformation wrapper. Grammar extension additions are rejected with
// unsupported_extension instead of being skipped, since skipping unknown
// extension content would misalign the bit cursor.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ltescope/uper.hpp"

namespace ltescope {

// ---- paging -----------------------------------------------------------

struct STmsi {
  std::uint8_t mmec = 0;
  std::uint32_t m_tmsi = 0;

  bool operator==(const STmsi&) const = default;
};

/// IMSI as a raw digit string, 6..21 digits of 0..9. The digits stay inside
/// the codec layer; anything user-facing goes through mask_imsi().
struct Imsi {
  std::vector<std::uint8_t> digits;

  bool operator==(const Imsi&) const = default;
};

using UeIdentity = std::variant<STmsi, Imsi>;

enum class CnDomain : std::uint8_t { ps, cs };

struct PagingRecord {
  UeIdentity ue_identity;
  CnDomain cn_domain = CnDomain::ps;

  bool operator==(const PagingRecord&) const = default;
};

inline constexpr std::size_t kMaxPageRec = 16;

struct PagingMessage {
  std::vector<PagingRecord> records;  // 0..16; empty when pagingRecordList absent
  bool system_info_modification = false;
  bool etws_indication = false;

  bool operator==(const PagingMessage&) const = default;
};

// ---- MIB ---------------------------------------------------------------

enum class DlBandwidth : std::uint8_t { n6, n15, n25, n50, n75, n100 };
enum class PhichDuration : std::uint8_t { normal, extended };
enum class PhichResource : std::uint8_t { one_sixth, half, one, two };

/// 24-bit master information block.
struct Mib {
  DlBandwidth dl_bandwidth = DlBandwidth::n6;
  PhichDuration phich_duration = PhichDuration::normal;
  PhichResource phich_resource = PhichResource::one_sixth;
  std::uint8_t sfn_msb = 0;
  std::uint16_t spare = 0;  // 10 bits

  bool operator==(const Mib&) const = default;
};

// ---- SIB1 --------------------------------------------------------------

struct PlmnIdentity {
  std::optional<std::array<std::uint8_t, 3>> mcc;
  std::vector<std::uint8_t> mnc;  // 2..3 digits
  bool cell_reserved = false;

  bool operator==(const PlmnIdentity&) const = default;
};

enum class IntraFreqReselection : std::uint8_t { allowed, not_allowed };

inline constexpr std::array<std::uint8_t, 7> kSiWindowLengthsMs = {1, 2, 5, 10, 15, 20, 40};

/// SIB1 header fields. Scheduling entries are parsed bit-exactly but only
/// their count is retained; the encoder emits `scheduling_info_count`
/// placeholder entries (rf8, empty mapping) plus fixed defaults for the
/// mandatory fields outside this subset.
struct Sib1 {
  std::vector<PlmnIdentity> plmn_list;  // 1..6
  std::uint16_t tracking_area_code = 0;
  std::uint32_t cell_identity = 0;  // 28 bits
  bool cell_barred = false;
  IntraFreqReselection intra_freq_reselection = IntraFreqReselection::allowed;
  bool csg_indication = false;
  std::uint8_t si_window_length_ms = 10;  // one of kSiWindowLengthsMs
  std::uint32_t scheduling_info_count = 1;  // 1..32

  bool operator==(const Sib1&) const = default;
};

/// Presence-only summary of a SystemInformation message: enough to tell
/// which SIB leads the payload (sib2 detection) without decoding SIB bodies.
struct SystemInfoSummary {
  std::uint32_t entry_count = 0;   // sib-TypeAndInfo length, 1..32
  std::uint8_t first_sib_type = 2; // 2..11 for sib2..sib11

  bool operator==(const SystemInfoSummary&) const = default;
};

using BcchDlSchMessage = std::variant<Sib1, SystemInfoSummary>;

// ---- operations ----------------------------------------------------------

/// PCCH-Message -> Paging. Absent pagingRecordList decodes to an empty
/// records vector; trailing pad bits are ignored.
DecodeResult<PagingMessage> decode_pcch(std::span<const std::uint8_t> payload);

/// Canonical UPER bits, zero-padded to a byte boundary; decode_pcch inverts
/// it. Throws CodecFailure(constraint_violation) for >16 records or invalid
/// IMSI digit strings.
std::vector<std::uint8_t> encode_pcch(const PagingMessage& msg);

DecodeResult<Mib> decode_mib(std::span<const std::uint8_t> payload);

/// Always exactly 3 bytes.
std::vector<std::uint8_t> encode_mib(const Mib& mib);

/// BCCH-DL-SCH-Message -> SIB1 header fields, or a SystemInfoSummary when
/// the c1 choice selects systemInformation.
DecodeResult<BcchDlSchMessage> decode_bcch_dl_sch(std::span<const std::uint8_t> payload);

std::vector<std::uint8_t> encode_sib1(const Sib1& sib1);

/// Replaces all but the last two digits with '*' ("masked statistics"); raw
/// IMSI digits never appear in reports, CSV, or JSONL output.
std::string mask_imsi(const Imsi& imsi);

const char* to_string(CnDomain cn);
const char* to_string(DlBandwidth bw);
const char* to_string(PhichDuration duration);
const char* to_string(PhichResource resource);
const char* to_string(IntraFreqReselection reselection);

}  // namespace ltescope
