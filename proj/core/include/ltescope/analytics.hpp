// Paging-traffic statistics: per-capture totals, TMSI sessions and lifespan
// histograms, IMSI-paging detection, and cross-capture persistence. A TMSI
// is identified by the full 40-bit MMEC + M-TMSI combination; collapsing to
// the 32-bit M-TMSI could alias distinct subscribers across MMEs.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ltescope/rrc.hpp"

namespace ltescope {

using TmsiKey = std::uint64_t;  // (mmec << 32) | m_tmsi, 40 bits

inline TmsiKey make_tmsi_key(std::uint8_t mmec, std::uint32_t m_tmsi) {
  return (static_cast<TmsiKey>(mmec) << 32) | m_tmsi;
}

/// Bare lowercase hex, zero-padded to the 40-bit width (10 digits).
std::string tmsi_key_hex(TmsiKey key);

struct TmsiSession {
  TmsiKey key = 0;
  std::int64_t first_seen_us = 0;
  std::int64_t last_seen_us = 0;
  std::uint64_t occurrence_count = 0;

  bool operator==(const TmsiSession&) const = default;
};

/// One IMSI paging observation; only the masked digit string is retained.
struct MaskedImsiPage {
  std::int64_t timestamp_us = 0;
  std::string masked_digits;

  bool operator==(const MaskedImsiPage&) const = default;
};

struct PagingStats {
  std::uint64_t total_pages = 0;  // paging records, not messages
  std::uint64_t imsi_pages = 0;
  std::map<TmsiKey, TmsiSession> sessions;
  std::int64_t capture_start_us = 0;
  std::int64_t capture_end_us = 0;
  bool has_observations = false;
  std::vector<MaskedImsiPage> imsi_log;

  std::uint64_t unique_tmsis() const { return sessions.size(); }

  bool operator==(const PagingStats&) const = default;
};

/// Folds one decoded paging message into the stats. Every record counts one
/// page; s-TMSI records update their session, IMSI records are counted and
/// logged masked. Total over any input; order of accumulation is immaterial.
void accumulate(PagingStats& stats, const PagingMessage& msg, std::int64_t timestamp_us);

/// Commutative merge for stats built over independent capture slices.
PagingStats merge(const PagingStats& a, const PagingStats& b);

/// (last_seen - first_seen) / 60e6; single occurrences yield 0.
double lifespan_minutes(const TmsiSession& session);

double capture_duration_minutes(const PagingStats& stats);

/// Longest session lifespan in minutes, 0 for empty stats.
double longest_lifespan_minutes(const PagingStats& stats);

struct HistogramBin {
  double bin_start_min = 0;
  std::uint64_t count = 0;

  bool operator==(const HistogramBin&) const = default;
};

/// Half-open bins [lo, lo+bin) covering [0, capture duration]; each session
/// falls in the bin containing its lifespan, so counts sum to unique_tmsis.
std::vector<HistogramBin> lifespan_histogram(const PagingStats& stats,
                                             double bin_minutes = 5.0);

struct ReportColumn {
  std::string label;
  std::uint64_t total_pages = 0;
  std::uint64_t unique_tmsis = 0;
  double longest_minutes = 0;
  std::uint64_t imsi_pages = 0;
  double imsi_fraction = 0;
};

ReportColumn summarize(const PagingStats& stats, std::string label);

/// Text table with one column per capture and the rows Total Pages /
/// Unique TMSIs / Longest active TMSI in minutes, followed by a prominent
/// warning per column when IMSI paging was seen.
std::string render_report(std::span<const ReportColumn> columns);

struct PersistenceComparison {
  std::vector<TmsiKey> overlap;  // sorted key-set intersection
  double jaccard = 0;            // |A n B| / |A u B|, 0 when both empty
};

PersistenceComparison persistence_compare(const PagingStats& a, const PagingStats& b);

struct ImsiPagingReport {
  std::uint64_t count = 0;
  double fraction = 0;  // of total_pages, 0 when total is 0
};

ImsiPagingReport detect_imsi_paging(const PagingStats& stats);

/// Per-session rows: tmsi_hex,first_seen_us,last_seen_us,occurrences
void write_sessions_csv(std::ostream& out, const PagingStats& stats);

/// Rows: bin_start_min,count
void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins);

}  // namespace ltescope
