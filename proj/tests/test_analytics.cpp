#include "ltescope/analytics.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "testkit.hpp"

using namespace ltescope;

namespace {

PagingMessage stmsi_page(std::uint8_t mmec, std::uint32_t m_tmsi) {
  PagingMessage msg;
  msg.records.push_back({STmsi{mmec, m_tmsi}, CnDomain::ps});
  return msg;
}

PagingMessage imsi_page(std::initializer_list<std::uint8_t> digits) {
  PagingMessage msg;
  msg.records.push_back({Imsi{digits}, CnDomain::cs});
  return msg;
}

// Record/timestamp pair for order-independence and oracle checks.
struct TracePage {
  PagingRecord record;
  std::int64_t t_us;
};

PagingStats accumulate_pages(const std::vector<TracePage>& pages) {
  PagingStats stats;
  for (const auto& page : pages) {
    PagingMessage msg;
    msg.records.push_back(page.record);
    accumulate(stats, msg, page.t_us);
  }
  return stats;
}

// Full-rescan recomputation, one pass per metric, no shared accumulator.
PagingStats brute_force_stats(const std::vector<TracePage>& pages) {
  PagingStats out;
  out.total_pages = pages.size();
  for (const auto& page : pages) {
    if (std::holds_alternative<Imsi>(page.record.ue_identity)) {
      out.imsi_pages += 1;
    }
  }
  std::set<TmsiKey> keys;
  for (const auto& page : pages) {
    if (const auto* s = std::get_if<STmsi>(&page.record.ue_identity)) {
      keys.insert(make_tmsi_key(s->mmec, s->m_tmsi));
    }
  }
  for (const TmsiKey key : keys) {
    TmsiSession session;
    session.key = key;
    session.first_seen_us = std::numeric_limits<std::int64_t>::max();
    session.last_seen_us = std::numeric_limits<std::int64_t>::min();
    session.occurrence_count = 0;
    for (const auto& page : pages) {
      const auto* s = std::get_if<STmsi>(&page.record.ue_identity);
      if (s != nullptr && make_tmsi_key(s->mmec, s->m_tmsi) == key) {
        session.first_seen_us = std::min(session.first_seen_us, page.t_us);
        session.last_seen_us = std::max(session.last_seen_us, page.t_us);
        ++session.occurrence_count;
      }
    }
    out.sessions.emplace(key, session);
  }
  if (!pages.empty()) {
    out.has_observations = true;
    out.capture_start_us = std::numeric_limits<std::int64_t>::max();
    out.capture_end_us = std::numeric_limits<std::int64_t>::min();
    for (const auto& page : pages) {
      out.capture_start_us = std::min(out.capture_start_us, page.t_us);
      out.capture_end_us = std::max(out.capture_end_us, page.t_us);
    }
  }
  for (const auto& page : pages) {
    if (const auto* imsi = std::get_if<Imsi>(&page.record.ue_identity)) {
      out.imsi_log.push_back({page.t_us, mask_imsi(*imsi)});
    }
  }
  return out;
}

std::vector<TracePage> random_trace(std::mt19937_64& rng, std::size_t max_pages) {
  std::vector<TracePage> pages;
  const std::size_t n = rng() % (max_pages + 1);
  for (std::size_t i = 0; i < n; ++i) {
    TracePage page;
    page.t_us = static_cast<std::int64_t>(rng() % 1'000'000'000);
    if (rng() % 8 == 0) {
      Imsi imsi;
      imsi.digits.resize(6 + rng() % 16);
      for (auto& d : imsi.digits) d = static_cast<std::uint8_t>(rng() % 10);
      page.record.ue_identity = imsi;
    } else {
      // Small key space to force session reuse.
      page.record.ue_identity = STmsi{static_cast<std::uint8_t>(rng() % 4),
                                      static_cast<std::uint32_t>(rng() % 32)};
    }
    pages.push_back(std::move(page));
  }
  return pages;
}

PagingStats canonical(PagingStats stats) {
  std::sort(stats.imsi_log.begin(), stats.imsi_log.end(),
            [](const MaskedImsiPage& a, const MaskedImsiPage& b) {
              return std::tie(a.timestamp_us, a.masked_digits) <
                     std::tie(b.timestamp_us, b.masked_digits);
            });
  return stats;
}

constexpr std::int64_t kMinuteUs = 60'000'000;

}  // namespace

static void empty_message_leaves_totals_unchanged() {
  PagingStats stats;
  accumulate(stats, PagingMessage{}, 1000);
  CHECK_EQ(stats.total_pages, 0u);
  CHECK_EQ(stats.unique_tmsis(), 0u);
  CHECK_EQ(stats.imsi_pages, 0u);
  CHECK(stats.has_observations);
}

static void three_pages_one_tmsi_lifespan() {
  PagingStats stats;
  accumulate(stats, stmsi_page(1, 42), 0);
  accumulate(stats, stmsi_page(1, 42), 60 * 1'000'000);
  accumulate(stats, stmsi_page(1, 42), 120 * 1'000'000);
  CHECK_EQ(stats.total_pages, 3u);
  CHECK_EQ(stats.unique_tmsis(), 1u);
  const auto& session = stats.sessions.begin()->second;
  CHECK_EQ(session.occurrence_count, 3u);
  CHECK_EQ(session.last_seen_us - session.first_seen_us, 120 * 1'000'000);
  CHECK(testkit::approx_eq(lifespan_minutes(session), 2.0));
}

static void sixteen_record_message_counts_sixteen_pages() {
  PagingStats stats;
  PagingMessage msg;
  for (int i = 0; i < 16; ++i) {
    msg.records.push_back({STmsi{0, static_cast<std::uint32_t>(i)}, CnDomain::ps});
  }
  accumulate(stats, msg, 5);
  CHECK_EQ(stats.total_pages, 16u);
  CHECK_EQ(stats.unique_tmsis(), 16u);
}

static void lifespan_of_single_occurrence_is_zero() {
  TmsiSession session{make_tmsi_key(1, 2), 777, 777, 1};
  CHECK_EQ(lifespan_minutes(session), 0.0);
}

static void lifespan_matches_observed_operator_maxima() {
  // 361.25 minutes (the span equal to a six-hour capture window):
  // 361.25 * 60e6 us = 21675000000 us, written as an exact integer span.
  TmsiSession op1{1, 0, 21'675'000'000, 12};
  CHECK_EQ(lifespan_minutes(op1), 361.25);
  // 288.15 minutes = 17289000000 us.
  TmsiSession op3{2, 0, 17'289'000'000, 3};
  CHECK_EQ(lifespan_minutes(op3), 288.15);
}

static void histogram_all_singles_mass_in_bin_zero() {
  PagingStats stats;
  for (std::uint32_t i = 0; i < 50; ++i) {
    accumulate(stats, stmsi_page(0, i), static_cast<std::int64_t>(i) * kMinuteUs);
  }
  const auto bins = lifespan_histogram(stats, 5.0);
  CHECK_EQ(bins[0].count, 50u);
  std::uint64_t rest = 0;
  for (std::size_t i = 1; i < bins.size(); ++i) rest += bins[i].count;
  CHECK_EQ(rest, 0u);
}

static void histogram_long_session_lands_in_floor_bin() {
  PagingStats stats;
  accumulate(stats, stmsi_page(1, 1), 0);
  accumulate(stats, stmsi_page(1, 1), 21'675'000'000);  // 361.25 min
  const auto bins = lifespan_histogram(stats, 5.0);
  CHECK_EQ(bins.size(), 73u);  // bins 0, 5, ..., 360
  CHECK(testkit::approx_eq(bins.back().bin_start_min, 360.0));
  CHECK_EQ(bins.back().count, 1u);
}

static void histogram_mass_equals_unique_tmsis() {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 50; ++iter) {
    const auto pages = random_trace(rng, 400);
    const auto stats = accumulate_pages(pages);
    for (double width : {0.5, 1.0, 5.0, 13.0}) {
      const auto bins = lifespan_histogram(stats, width);
      std::uint64_t mass = 0;
      for (const auto& bin : bins) mass += bin.count;
      CHECK_EQ(mass, stats.unique_tmsis());
    }
  }
}

static void report_renders_operator_fixture_rows() {
  const std::vector<ReportColumn> columns = {
      {"Operator 1", 586701, 31654, 361.25, 0, 0.0},
      {"Operator 2", 280795, 36544, 361.04, 0, 0.0},
      {"Operator 3", 156311, 49076, 288.15, 0, 0.0},
  };
  const auto report = render_report(columns);
  std::istringstream lines(report);
  std::string header, sep, total, unique, longest;
  std::getline(lines, header);
  std::getline(lines, sep);
  std::getline(lines, total);
  std::getline(lines, unique);
  std::getline(lines, longest);
  CHECK(header.find("Operator 1") != std::string::npos);
  CHECK(header.find("Operator 3") != std::string::npos);
  CHECK(total.find("Total Pages") == 0);
  CHECK(total.find("586701") != std::string::npos);
  CHECK(total.find("280795") != std::string::npos);
  CHECK(total.find("156311") != std::string::npos);
  CHECK(unique.find("Unique TMSIs") == 0);
  CHECK(unique.find("31654") != std::string::npos);
  CHECK(unique.find("36544") != std::string::npos);
  CHECK(unique.find("49076") != std::string::npos);
  CHECK(longest.find("Longest active TMSI in minutes") == 0);
  CHECK(longest.find("361.25") != std::string::npos);
  CHECK(longest.find("361.04") != std::string::npos);
  CHECK(longest.find("288.15") != std::string::npos);
  CHECK(report.find("WARNING") == std::string::npos);
}

static void report_empty_stats_renders_zeros() {
  PagingStats stats;
  const std::vector<ReportColumn> columns = {summarize(stats, "empty")};
  const auto report = render_report(columns);
  CHECK(report.find("0.00") != std::string::npos);
  CHECK(report.find("Total Pages") != std::string::npos);
}

static void report_warns_on_imsi_paging() {
  PagingStats stats;
  accumulate(stats, imsi_page({1, 2, 3, 4, 5, 6, 7, 8}), 0);
  accumulate(stats, stmsi_page(1, 1), 1);
  const std::vector<ReportColumn> columns = {summarize(stats, "cap")};
  const auto report = render_report(columns);
  CHECK(report.find("WARNING") != std::string::npos);
  // Only masked digits may surface.
  CHECK(report.find("12345678") == std::string::npos);
}

static void persistence_disjoint_overlap_empty() {
  PagingStats day1, day2;
  accumulate(day1, stmsi_page(1, 1), 0);
  accumulate(day1, stmsi_page(1, 2), 0);
  accumulate(day2, stmsi_page(2, 7), 0);
  const auto cmp = persistence_compare(day1, day2);
  CHECK(cmp.overlap.empty());
  CHECK_EQ(cmp.jaccard, 0.0);
}

static void persistence_identical_sets_jaccard_one() {
  PagingStats a;
  accumulate(a, stmsi_page(1, 1), 0);
  accumulate(a, stmsi_page(1, 2), 0);
  const auto cmp = persistence_compare(a, a);
  CHECK_EQ(cmp.overlap.size(), 2u);
  CHECK_EQ(cmp.jaccard, 1.0);
}

static void persistence_partial_overlap() {
  PagingStats a, b;
  for (std::uint32_t k : {1u, 2u, 3u}) accumulate(a, stmsi_page(0, k), 0);
  for (std::uint32_t k : {3u, 4u}) accumulate(b, stmsi_page(0, k), 0);
  const auto cmp = persistence_compare(a, b);
  CHECK_EQ(cmp.overlap.size(), 1u);
  CHECK_EQ(cmp.overlap[0], make_tmsi_key(0, 3));
  CHECK_EQ(cmp.jaccard, 0.25);
}

static void persistence_both_empty_is_zero() {
  PagingStats a, b;
  const auto cmp = persistence_compare(a, b);
  CHECK(cmp.overlap.empty());
  CHECK_EQ(cmp.jaccard, 0.0);
}

static void imsi_detection_counts_and_fraction() {
  PagingStats all_stmsi;
  for (std::uint32_t i = 0; i < 10; ++i) accumulate(all_stmsi, stmsi_page(0, i), 0);
  CHECK_EQ(detect_imsi_paging(all_stmsi).count, 0u);
  CHECK_EQ(detect_imsi_paging(all_stmsi).fraction, 0.0);

  PagingStats mixed;
  for (std::uint32_t i = 0; i < 99; ++i) accumulate(mixed, stmsi_page(0, i), 0);
  accumulate(mixed, imsi_page({9, 8, 7, 6, 5, 4}), 0);
  CHECK_EQ(detect_imsi_paging(mixed).count, 1u);
  CHECK(testkit::approx_eq(detect_imsi_paging(mixed).fraction, 0.01));

  PagingStats empty;
  CHECK_EQ(detect_imsi_paging(empty).count, 0u);
  CHECK_EQ(detect_imsi_paging(empty).fraction, 0.0);
}

static void conservation_total_equals_imsi_plus_sessions() {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 100; ++iter) {
    const auto stats = accumulate_pages(random_trace(rng, 300));
    std::uint64_t session_sum = 0;
    for (const auto& [key, session] : stats.sessions) {
      session_sum += session.occurrence_count;
    }
    CHECK_EQ(stats.total_pages, stats.imsi_pages + session_sum);
  }
}

static void order_independence_of_accumulation() {
  std::mt19937_64 rng(29);
  for (int iter = 0; iter < 30; ++iter) {
    auto pages = random_trace(rng, 200);
    const auto reference = canonical(accumulate_pages(pages));
    std::shuffle(pages.begin(), pages.end(), rng);
    const auto shuffled = canonical(accumulate_pages(pages));
    CHECK(reference == shuffled);
  }
}

static void merge_of_split_halves_equals_whole() {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 30; ++iter) {
    const auto pages = random_trace(rng, 200);
    const auto whole = accumulate_pages(pages);
    const std::size_t cut = pages.size() / 2;
    const auto left = accumulate_pages({pages.begin(), pages.begin() + cut});
    const auto right = accumulate_pages({pages.begin() + cut, pages.end()});
    CHECK(merge(left, right) == whole);
    CHECK(canonical(merge(right, left)) == canonical(whole));
  }
}

static void brute_force_oracle_equivalence() {
  std::mt19937_64 rng(37);
  for (int iter = 0; iter < 40; ++iter) {
    const auto pages = random_trace(rng, 1000);
    const auto fast = accumulate_pages(pages);
    const auto slow = brute_force_stats(pages);
    CHECK(fast == slow);
  }
}

static void sessions_csv_layout() {
  PagingStats stats;
  accumulate(stats, stmsi_page(0x1A, 0xDEADBEEF), 100);
  accumulate(stats, stmsi_page(0x1A, 0xDEADBEEF), 900);
  std::ostringstream out;
  write_sessions_csv(out, stats);
  CHECK_EQ(out.str(),
           "tmsi_hex,first_seen_us,last_seen_us,occurrences\n"
           "1adeadbeef,100,900,2\n");
}

static void histogram_csv_layout() {
  const std::vector<HistogramBin> bins = {{0.0, 12}, {5.0, 3}};
  std::ostringstream out;
  write_histogram_csv(out, bins);
  CHECK_EQ(out.str(), "bin_start_min,count\n0,12\n5,3\n");
}

static void tmsi_key_packs_forty_bits() {
  CHECK_EQ(make_tmsi_key(0xFF, 0xFFFFFFFF), 0xFFFFFFFFFFull);
  CHECK_EQ(make_tmsi_key(0x01, 0x00000002), 0x0100000002ull);
  CHECK_EQ(tmsi_key_hex(make_tmsi_key(0x1A, 0xDEADBEEF)), "1adeadbeef");
  // Distinct pairs map to distinct keys even when digits collide.
  CHECK(make_tmsi_key(0x12, 0x34000000) != make_tmsi_key(0x34, 0x00000012));
}

int main() {
  RUN(empty_message_leaves_totals_unchanged);
  RUN(three_pages_one_tmsi_lifespan);
  RUN(sixteen_record_message_counts_sixteen_pages);
  RUN(lifespan_of_single_occurrence_is_zero);
  RUN(lifespan_matches_observed_operator_maxima);
  RUN(histogram_all_singles_mass_in_bin_zero);
  RUN(histogram_long_session_lands_in_floor_bin);
  RUN(histogram_mass_equals_unique_tmsis);
  RUN(report_renders_operator_fixture_rows);
  RUN(report_empty_stats_renders_zeros);
  RUN(report_warns_on_imsi_paging);
  RUN(persistence_disjoint_overlap_empty);
  RUN(persistence_identical_sets_jaccard_one);
  RUN(persistence_partial_overlap);
  RUN(persistence_both_empty_is_zero);
  RUN(imsi_detection_counts_and_fraction);
  RUN(conservation_total_equals_imsi_plus_sessions);
  RUN(order_independence_of_accumulation);
  RUN(merge_of_split_halves_equals_whole);
  RUN(brute_force_oracle_equivalence);
  RUN(sessions_csv_layout);
  RUN(histogram_csv_layout);
  RUN(tmsi_key_packs_forty_bits);
  return TEST_MAIN_RESULT();
}
