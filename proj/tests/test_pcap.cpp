#include "ltescope/pcap.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "testkit.hpp"

using namespace ltescope;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  return fs::temp_directory_path() / name;
}

CaptureFrame paging_frame(std::int64_t t_us, std::uint32_t m_tmsi) {
  CaptureFrame f;
  f.timestamp_us = t_us;
  f.radio_type = RadioType::fdd;
  f.direction = Direction::downlink;
  f.rnti_type = RntiType::p_rnti;
  f.rnti = kPagingRnti;
  f.payload = {static_cast<std::uint8_t>(m_tmsi >> 24), static_cast<std::uint8_t>(m_tmsi),
               0x01};
  return f;
}

std::vector<std::uint8_t> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

static void empty_capture_roundtrip() {
  const auto path = temp_file("ltescope_empty.pcap");
  write_capture({}, path);
  CHECK_EQ(fs::file_size(path), 24u);  // global header only
  const auto items = read_capture(path);
  CHECK(items.empty());
}

static void three_frame_roundtrip_field_for_field() {
  const auto path = temp_file("ltescope_three.pcap");
  std::vector<CaptureFrame> frames = {
      paging_frame(1'000'000, 0xAABBCCDD),
      paging_frame(2'500'000, 0x11223344),
      paging_frame(2'500'001, 0xDEADBEEF),
  };
  frames[1].sfn = 512;
  frames[1].subframe = 3;
  write_capture(frames, path);
  const auto items = read_capture(path);
  CHECK_EQ(items.size(), 3u);
  for (std::size_t i = 0; i < items.size(); ++i) {
    CHECK(std::holds_alternative<CaptureFrame>(items[i]));
    CHECK(std::get<CaptureFrame>(items[i]) == frames[i]);
  }
}

static void corrupted_start_string_yields_one_error_and_continues() {
  const auto path = temp_file("ltescope_corrupt.pcap");
  const std::vector<CaptureFrame> trio = {paging_frame(1, 1), paging_frame(2, 2),
                                          paging_frame(3, 3)};
  write_capture(trio, path);
  auto bytes = slurp(path);
  // Second record starts after the 24-byte global header and one
  // 16-byte record header + record. Flip a start-string byte there.
  const std::size_t first_record_len = 16 + serialize_mac_lte_framing(paging_frame(1, 1)).size();
  const std::size_t second_start = 24 + first_record_len + 16;
  bytes[second_start] ^= 0xFF;
  spit(path, bytes);

  const auto items = read_capture(path);
  CHECK_EQ(items.size(), 3u);
  CHECK(std::holds_alternative<CaptureFrame>(items[0]));
  CHECK(std::holds_alternative<FramingError>(items[1]));
  CHECK_EQ(std::get<FramingError>(items[1]).kind, FramingErrorKind::bad_start_string);
  CHECK(std::holds_alternative<CaptureFrame>(items[2]));
}

static void unreadable_file_throws() {
  bool threw = false;
  try {
    read_capture(temp_file("ltescope_does_not_exist.pcap"));
  } catch (const PcapError&) {
    threw = true;
  }
  CHECK(threw);
}

static void bad_magic_throws() {
  const auto path = temp_file("ltescope_badmagic.pcap");
  spit(path, std::vector<std::uint8_t>(24, 0x42));
  bool threw = false;
  try {
    read_capture(path);
  } catch (const PcapError&) {
    threw = true;
  }
  CHECK(threw);
}

static void byteswapped_capture_is_readable() {
  const auto path = temp_file("ltescope_swapped.pcap");
  const auto frame = paging_frame(3'000'007, 0x0BADF00D);
  const std::vector<CaptureFrame> one = {frame};
  write_capture(one, path);
  auto bytes = slurp(path);
  // Swap every 32-bit header field and the record header to big-endian.
  auto swap32 = [&](std::size_t at) {
    std::swap(bytes[at], bytes[at + 3]);
    std::swap(bytes[at + 1], bytes[at + 2]);
  };
  auto swap16 = [&](std::size_t at) { std::swap(bytes[at], bytes[at + 1]); };
  swap32(0);
  swap16(4);
  swap16(6);
  swap32(8);
  swap32(12);
  swap32(16);
  swap32(20);
  swap32(24);
  swap32(28);
  swap32(32);
  swap32(36);
  spit(path, bytes);

  const auto items = read_capture(path);
  CHECK_EQ(items.size(), 1u);
  CHECK(std::holds_alternative<CaptureFrame>(items[0]));
  CHECK(std::get<CaptureFrame>(items[0]) == frame);
}

static void nanosecond_magic_truncates_to_micros() {
  const auto path = temp_file("ltescope_nanos.pcap");
  auto frame = paging_frame(0, 0x0BADF00D);
  const std::vector<CaptureFrame> one = {frame};
  write_capture(one, path);
  auto bytes = slurp(path);
  // Rewrite magic to the nanosecond variant and the fractional field to
  // 1234567 ns: expect 1234 us after truncation.
  bytes[0] = 0x4D;
  bytes[1] = 0x3C;
  bytes[2] = 0xB2;
  bytes[3] = 0xA1;
  bytes[28] = static_cast<std::uint8_t>(1234567 & 0xFF);
  bytes[29] = static_cast<std::uint8_t>((1234567 >> 8) & 0xFF);
  bytes[30] = static_cast<std::uint8_t>((1234567 >> 16) & 0xFF);
  bytes[31] = 0;
  spit(path, bytes);

  const auto items = read_capture(path);
  CHECK_EQ(items.size(), 1u);
  CHECK_EQ(std::get<CaptureFrame>(items[0]).timestamp_us, 1234);
}

static void truncated_final_record_yields_single_error() {
  const auto path = temp_file("ltescope_trunc.pcap");
  const std::vector<CaptureFrame> pair_frames = {paging_frame(1, 1), paging_frame(2, 2)};
  write_capture(pair_frames, path);
  auto bytes = slurp(path);
  bytes.resize(bytes.size() - 5);
  spit(path, bytes);
  const auto items = read_capture(path);
  CHECK_EQ(items.size(), 2u);
  CHECK(std::holds_alternative<CaptureFrame>(items[0]));
  CHECK(std::holds_alternative<FramingError>(items[1]));
  CHECK_EQ(std::get<FramingError>(items[1]).kind, FramingErrorKind::truncated_tag);
}

static void link_type_outside_user_range_rejected() {
  const auto path = temp_file("ltescope_dlt.pcap");
  const std::vector<CaptureFrame> one = {paging_frame(1, 1)};
  write_capture(one, path);
  auto bytes = slurp(path);
  bytes[20] = 1;  // DLT_EN10MB
  spit(path, bytes);
  bool threw = false;
  try {
    read_capture(path);
  } catch (const PcapError&) {
    threw = true;
  }
  CHECK(threw);
}

static void expected_dlt_mismatch_rejected() {
  const auto path = temp_file("ltescope_dlt2.pcap");
  const std::vector<CaptureFrame> one = {paging_frame(1, 1)};
  write_capture(one, path, 150);
  CHECK_EQ(read_capture(path, 150).size(), 1u);
  bool threw = false;
  try {
    read_capture(path, 149);
  } catch (const PcapError&) {
    threw = true;
  }
  CHECK(threw);
  // Custom link types survive the round trip.
  CaptureReader reader(path);
  CHECK_EQ(reader.link_type(), 150u);
}

static void bulk_roundtrip_ten_thousand_frames() {
  const auto path = temp_file("ltescope_bulk.pcap");
  std::mt19937_64 rng(2024);
  std::vector<CaptureFrame> frames;
  frames.reserve(10000);
  for (int i = 0; i < 10000; ++i) {
    auto f = paging_frame(static_cast<std::int64_t>(i) * 1000 + static_cast<std::int64_t>(rng() % 1000),
                          static_cast<std::uint32_t>(rng()));
    if (rng() % 2 == 0) {
      f.sfn = static_cast<std::uint16_t>(rng() % 1024);
      f.subframe = static_cast<std::uint8_t>(rng() % 10);
    }
    frames.push_back(std::move(f));
  }
  write_capture(frames, path);
  const auto items = read_capture(path);
  CHECK_EQ(items.size(), frames.size());
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto* frame = std::get_if<CaptureFrame>(&items[i]);
    if (frame == nullptr || !(*frame == frames[i])) {
      ++mismatches;
    }
  }
  CHECK_EQ(mismatches, 0u);
}

static void order_preserved_with_nondecreasing_timestamps() {
  const auto path = temp_file("ltescope_order.pcap");
  std::vector<CaptureFrame> frames;
  for (int i = 0; i < 100; ++i) {
    frames.push_back(paging_frame(1000 + i, static_cast<std::uint32_t>(i)));
  }
  write_capture(frames, path);
  CaptureReader reader(path);
  std::int64_t last = -1;
  std::size_t seen = 0;
  while (auto item = reader.next()) {
    const auto& f = std::get<CaptureFrame>(*item);
    CHECK(f.timestamp_us > last);
    last = f.timestamp_us;
    ++seen;
  }
  CHECK_EQ(seen, 100u);
}

int main() {
  RUN(empty_capture_roundtrip);
  RUN(three_frame_roundtrip_field_for_field);
  RUN(corrupted_start_string_yields_one_error_and_continues);
  RUN(unreadable_file_throws);
  RUN(bad_magic_throws);
  RUN(byteswapped_capture_is_readable);
  RUN(nanosecond_magic_truncates_to_micros);
  RUN(truncated_final_record_yields_single_error);
  RUN(link_type_outside_user_range_rejected);
  RUN(expected_dlt_mismatch_rejected);
  RUN(bulk_roundtrip_ten_thousand_frames);
  RUN(order_preserved_with_nondecreasing_timestamps);
  return TEST_MAIN_RESULT();
}
