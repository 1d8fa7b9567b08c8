#include "ltescope/rrc.hpp"

#include <string>

namespace ltescope {

namespace {

// Enumerator counts from the Rel-8 grammar.
constexpr std::int64_t kDlBandwidthMax = 5;
constexpr std::int64_t kSiPeriodicityMax = 6;      // rf8..rf512
constexpr std::int64_t kSiWindowMax = 6;           // ms1..ms40
constexpr std::int64_t kSpecialSubframeMax = 8;    // ssp0..ssp8
constexpr std::int64_t kSubframeAssignMax = 6;     // sa0..sa6
constexpr unsigned kSibTypeAndInfoAlternatives = 10;  // sib2..sib11

[[noreturn]] void fail(std::size_t bit_offset, DecodeErrorKind kind) {
  throw CodecFailure({bit_offset, kind});
}

PagingRecord decode_paging_record(BitReader& r) {
  PagingRecord rec;
  const std::size_t rec_ext_at = r.bit_offset();
  if (r.read_bit()) {  // PagingRecord ::= SEQUENCE { ..., ... }
    fail(rec_ext_at, DecodeErrorKind::unsupported_extension);
  }
  const std::size_t id_ext_at = r.bit_offset();
  if (r.read_bit()) {  // PagingUE-Identity ::= CHOICE { s-TMSI, imsi, ... }
    fail(id_ext_at, DecodeErrorKind::unsupported_extension);
  }
  if (!r.read_bit()) {
    STmsi s;
    s.mmec = static_cast<std::uint8_t>(r.read_bits(8));
    s.m_tmsi = static_cast<std::uint32_t>(r.read_bits(32));
    rec.ue_identity = s;
  } else {
    Imsi imsi;
    const auto digit_count = decode_constrained_int(r, 6, 21);
    imsi.digits.reserve(static_cast<std::size_t>(digit_count));
    for (std::int64_t i = 0; i < digit_count; ++i) {
      imsi.digits.push_back(static_cast<std::uint8_t>(decode_constrained_int(r, 0, 9)));
    }
    rec.ue_identity = std::move(imsi);
  }
  rec.cn_domain = r.read_bit() ? CnDomain::cs : CnDomain::ps;
  return rec;
}

void encode_paging_record(BitWriter& w, const PagingRecord& rec) {
  w.write_bit(false);  // not extended
  w.write_bit(false);  // ue-identity not extended
  if (const auto* s = std::get_if<STmsi>(&rec.ue_identity)) {
    w.write_bit(false);  // s-TMSI
    w.write_bits(s->mmec, 8);
    w.write_bits(s->m_tmsi, 32);
  } else {
    const auto& imsi = std::get<Imsi>(rec.ue_identity);
    w.write_bit(true);  // imsi
    encode_constrained_int(w, static_cast<std::int64_t>(imsi.digits.size()), 6, 21);
    for (auto d : imsi.digits) {
      encode_constrained_int(w, d, 0, 9);
    }
  }
  w.write_bit(rec.cn_domain == CnDomain::cs);
}

Sib1 decode_sib1_body(BitReader& r) {
  Sib1 sib;

  // SIB1 optionals: p-Max, tdd-Config, nonCriticalExtension.
  const std::size_t preamble_at = r.bit_offset();
  const auto top = decode_sequence_preamble(r, false, 3);
  if (top.present(2)) {
    fail(preamble_at + 2, DecodeErrorKind::unsupported_extension);
  }

  // cellAccessRelatedInfo
  const auto access = decode_sequence_preamble(r, false, 1);  // csg-Identity
  const auto plmn_count = decode_constrained_int(r, 1, 6);
  for (std::int64_t i = 0; i < plmn_count; ++i) {
    PlmnIdentity plmn;
    const auto id = decode_sequence_preamble(r, false, 1);  // mcc
    if (id.present(0)) {
      std::array<std::uint8_t, 3> mcc{};
      for (auto& d : mcc) {
        d = static_cast<std::uint8_t>(decode_constrained_int(r, 0, 9));
      }
      plmn.mcc = mcc;
    }
    const auto mnc_len = decode_constrained_int(r, 2, 3);
    for (std::int64_t d = 0; d < mnc_len; ++d) {
      plmn.mnc.push_back(static_cast<std::uint8_t>(decode_constrained_int(r, 0, 9)));
    }
    plmn.cell_reserved = decode_constrained_int(r, 0, 1) == 0;  // {reserved, notReserved}
    sib.plmn_list.push_back(std::move(plmn));
  }
  sib.tracking_area_code = static_cast<std::uint16_t>(r.read_bits(16));
  sib.cell_identity = static_cast<std::uint32_t>(r.read_bits(28));
  sib.cell_barred = decode_constrained_int(r, 0, 1) == 0;  // {barred, notBarred}
  sib.intra_freq_reselection =
      r.read_bit() ? IntraFreqReselection::not_allowed : IntraFreqReselection::allowed;
  sib.csg_indication = r.read_bit();
  if (access.present(0)) {
    r.skip_bits(27);  // csg-Identity
  }

  // cellSelectionInfo
  const auto sel = decode_sequence_preamble(r, false, 1);
  decode_constrained_int(r, -70, -22);  // q-RxLevMin
  if (sel.present(0)) {
    decode_constrained_int(r, 1, 8);  // q-RxLevMinOffset
  }

  if (top.present(0)) {
    decode_constrained_int(r, -30, 33);  // p-Max
  }
  decode_constrained_int(r, 1, 64);  // freqBandIndicator

  const auto sched_count = decode_constrained_int(r, 1, 32);
  sib.scheduling_info_count = static_cast<std::uint32_t>(sched_count);
  for (std::int64_t i = 0; i < sched_count; ++i) {
    decode_constrained_int(r, 0, kSiPeriodicityMax);
    const auto mapping_len = decode_constrained_int(r, 0, 31);
    for (std::int64_t m = 0; m < mapping_len; ++m) {
      const std::size_t ext_at = r.bit_offset();
      if (r.read_bit()) {  // SIB-Type ::= ENUMERATED { ..., ... }
        fail(ext_at, DecodeErrorKind::unsupported_extension);
      }
      r.skip_bits(4);  // all 16 root enumerators are defined
    }
  }

  if (top.present(1)) {  // tdd-Config
    decode_constrained_int(r, 0, kSubframeAssignMax);
    decode_constrained_int(r, 0, kSpecialSubframeMax);
  }

  const auto window_index = decode_constrained_int(r, 0, kSiWindowMax);
  sib.si_window_length_ms = kSiWindowLengthsMs[static_cast<std::size_t>(window_index)];
  decode_constrained_int(r, 0, 31);  // systemInfoValueTag
  return sib;
}

SystemInfoSummary decode_system_information_header(BitReader& r) {
  const std::size_t crit_at = r.bit_offset();
  if (r.read_bit()) {  // criticalExtensionsFuture
    fail(crit_at, DecodeErrorKind::unsupported_extension);
  }
  decode_sequence_preamble(r, false, 1);  // nonCriticalExtension flag, body untouched
  SystemInfoSummary summary;
  summary.entry_count = static_cast<std::uint32_t>(decode_constrained_int(r, 1, 32));
  const std::size_t entry_at = r.bit_offset();
  if (r.read_bit()) {  // extension alternative in sib-TypeAndInfo CHOICE
    fail(entry_at, DecodeErrorKind::unsupported_extension);
  }
  const auto index = r.read_bits(4);
  if (index >= kSibTypeAndInfoAlternatives) {
    fail(entry_at + 1, DecodeErrorKind::bad_choice_index);
  }
  summary.first_sib_type = static_cast<std::uint8_t>(2 + index);
  return summary;
}

template <typename T, typename Fn>
DecodeResult<T> run_decoder(Fn&& fn) {
  try {
    return fn();
  } catch (const CodecFailure& f) {
    return f.error();
  }
}

}  // namespace

DecodeResult<PagingMessage> decode_pcch(std::span<const std::uint8_t> payload) {
  return run_decoder<PagingMessage>([&] {
    BitReader r(payload);
    const std::size_t outer_at = r.bit_offset();
    if (r.read_bit()) {  // messageClassExtension
      fail(outer_at, DecodeErrorKind::unsupported_extension);
    }
    // c1 has the single alternative paging: zero index bits.
    PagingMessage msg;
    const std::size_t preamble_at = r.bit_offset();
    const auto preamble = decode_sequence_preamble(r, false, 4);
    if (preamble.present(3)) {  // nonCriticalExtension
      fail(preamble_at + 3, DecodeErrorKind::unsupported_extension);
    }
    msg.system_info_modification = preamble.present(1);
    msg.etws_indication = preamble.present(2);
    if (preamble.present(0)) {
      const auto count = decode_constrained_int(r, 1, static_cast<std::int64_t>(kMaxPageRec));
      msg.records.reserve(static_cast<std::size_t>(count));
      for (std::int64_t i = 0; i < count; ++i) {
        msg.records.push_back(decode_paging_record(r));
      }
    }
    return msg;
  });
}

std::vector<std::uint8_t> encode_pcch(const PagingMessage& msg) {
  if (msg.records.size() > kMaxPageRec) {
    throw CodecFailure({0, DecodeErrorKind::constraint_violation});
  }
  for (const auto& rec : msg.records) {
    if (const auto* imsi = std::get_if<Imsi>(&rec.ue_identity)) {
      if (imsi->digits.size() < 6 || imsi->digits.size() > 21) {
        throw CodecFailure({0, DecodeErrorKind::constraint_violation});
      }
    }
  }
  BitWriter w;
  w.write_bit(false);  // c1 -> paging
  std::uint32_t presence = 0;
  if (!msg.records.empty()) presence |= 0b1000;
  if (msg.system_info_modification) presence |= 0b0100;
  if (msg.etws_indication) presence |= 0b0010;
  encode_sequence_preamble(w, false, false, presence, 4);
  if (!msg.records.empty()) {
    encode_constrained_int(w, static_cast<std::int64_t>(msg.records.size()), 1,
                           static_cast<std::int64_t>(kMaxPageRec));
    for (const auto& rec : msg.records) {
      encode_paging_record(w, rec);
    }
  }
  return w.finish();
}

DecodeResult<Mib> decode_mib(std::span<const std::uint8_t> payload) {
  return run_decoder<Mib>([&] {
    BitReader r(payload);
    Mib mib;
    mib.dl_bandwidth =
        static_cast<DlBandwidth>(decode_constrained_int(r, 0, kDlBandwidthMax));
    mib.phich_duration = r.read_bit() ? PhichDuration::extended : PhichDuration::normal;
    mib.phich_resource = static_cast<PhichResource>(r.read_bits(2));
    mib.sfn_msb = static_cast<std::uint8_t>(r.read_bits(8));
    mib.spare = static_cast<std::uint16_t>(r.read_bits(10));
    return mib;
  });
}

std::vector<std::uint8_t> encode_mib(const Mib& mib) {
  if (mib.spare >= 1024) {
    throw CodecFailure({0, DecodeErrorKind::constraint_violation});
  }
  BitWriter w;
  encode_constrained_int(w, static_cast<std::int64_t>(mib.dl_bandwidth), 0, kDlBandwidthMax);
  w.write_bit(mib.phich_duration == PhichDuration::extended);
  w.write_bits(static_cast<std::uint64_t>(mib.phich_resource), 2);
  w.write_bits(mib.sfn_msb, 8);
  w.write_bits(mib.spare, 10);
  return w.finish();  // 24 bits exactly
}

DecodeResult<BcchDlSchMessage> decode_bcch_dl_sch(std::span<const std::uint8_t> payload) {
  return run_decoder<BcchDlSchMessage>([&]() -> BcchDlSchMessage {
    BitReader r(payload);
    const std::size_t outer_at = r.bit_offset();
    if (r.read_bit()) {  // messageClassExtension
      fail(outer_at, DecodeErrorKind::unsupported_extension);
    }
    if (r.read_bit()) {
      return decode_sib1_body(r);
    }
    return decode_system_information_header(r);
  });
}

std::vector<std::uint8_t> encode_sib1(const Sib1& sib1) {
  auto check = [](bool ok) {
    if (!ok) throw CodecFailure({0, DecodeErrorKind::constraint_violation});
  };
  check(!sib1.plmn_list.empty() && sib1.plmn_list.size() <= 6);
  check(sib1.cell_identity < (1u << 28));
  check(sib1.scheduling_info_count >= 1 && sib1.scheduling_info_count <= 32);
  std::int64_t window_index = -1;
  for (std::size_t i = 0; i < kSiWindowLengthsMs.size(); ++i) {
    if (kSiWindowLengthsMs[i] == sib1.si_window_length_ms) {
      window_index = static_cast<std::int64_t>(i);
    }
  }
  check(window_index >= 0);

  BitWriter w;
  w.write_bit(false);  // c1
  w.write_bit(true);   // systemInformationBlockType1
  encode_sequence_preamble(w, false, false, 0, 3);  // no p-Max/tdd-Config/extension
  encode_sequence_preamble(w, false, false, 0, 1);  // no csg-Identity
  encode_constrained_int(w, static_cast<std::int64_t>(sib1.plmn_list.size()), 1, 6);
  for (const auto& plmn : sib1.plmn_list) {
    check(plmn.mnc.size() == 2 || plmn.mnc.size() == 3);
    encode_sequence_preamble(w, false, false, plmn.mcc.has_value() ? 1 : 0, 1);
    if (plmn.mcc) {
      for (auto d : *plmn.mcc) {
        encode_constrained_int(w, d, 0, 9);
      }
    }
    encode_constrained_int(w, static_cast<std::int64_t>(plmn.mnc.size()), 2, 3);
    for (auto d : plmn.mnc) {
      encode_constrained_int(w, d, 0, 9);
    }
    encode_constrained_int(w, plmn.cell_reserved ? 0 : 1, 0, 1);
  }
  w.write_bits(sib1.tracking_area_code, 16);
  w.write_bits(sib1.cell_identity, 28);
  encode_constrained_int(w, sib1.cell_barred ? 0 : 1, 0, 1);
  w.write_bit(sib1.intra_freq_reselection == IntraFreqReselection::not_allowed);
  w.write_bit(sib1.csg_indication);
  encode_sequence_preamble(w, false, false, 0, 1);  // no q-RxLevMinOffset
  encode_constrained_int(w, -70, -70, -22);         // q-RxLevMin default
  encode_constrained_int(w, 1, 1, 64);              // freqBandIndicator default
  encode_constrained_int(w, sib1.scheduling_info_count, 1, 32);
  for (std::uint32_t i = 0; i < sib1.scheduling_info_count; ++i) {
    encode_constrained_int(w, 0, 0, kSiPeriodicityMax);  // rf8
    encode_constrained_int(w, 0, 0, 31);                 // empty sib-MappingInfo
  }
  encode_constrained_int(w, window_index, 0, kSiWindowMax);
  encode_constrained_int(w, 0, 0, 31);  // systemInfoValueTag
  return w.finish();
}

const char* to_string(CnDomain cn) { return cn == CnDomain::ps ? "ps" : "cs"; }

const char* to_string(DlBandwidth bw) {
  switch (bw) {
    case DlBandwidth::n6: return "n6";
    case DlBandwidth::n15: return "n15";
    case DlBandwidth::n25: return "n25";
    case DlBandwidth::n50: return "n50";
    case DlBandwidth::n75: return "n75";
    case DlBandwidth::n100: return "n100";
  }
  return "unknown";
}

const char* to_string(PhichDuration duration) {
  return duration == PhichDuration::normal ? "normal" : "extended";
}

const char* to_string(PhichResource resource) {
  switch (resource) {
    case PhichResource::one_sixth: return "oneSixth";
    case PhichResource::half: return "half";
    case PhichResource::one: return "one";
    case PhichResource::two: return "two";
  }
  return "unknown";
}

const char* to_string(IntraFreqReselection reselection) {
  return reselection == IntraFreqReselection::allowed ? "allowed" : "notAllowed";
}

std::string mask_imsi(const Imsi& imsi) {
  std::string out(imsi.digits.size(), '*');
  const std::size_t n = imsi.digits.size();
  for (std::size_t i = n >= 2 ? n - 2 : 0; i < n; ++i) {
    out[i] = static_cast<char>('0' + imsi.digits[i]);
  }
  return out;
}

}  // namespace ltescope
