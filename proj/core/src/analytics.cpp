#include "ltescope/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace ltescope {

std::string tmsi_key_hex(TmsiKey key) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%010llx", static_cast<unsigned long long>(key));
  return buf;
}

void accumulate(PagingStats& stats, const PagingMessage& msg, std::int64_t timestamp_us) {
  if (!stats.has_observations) {
    stats.capture_start_us = timestamp_us;
    stats.capture_end_us = timestamp_us;
    stats.has_observations = true;
  } else {
    stats.capture_start_us = std::min(stats.capture_start_us, timestamp_us);
    stats.capture_end_us = std::max(stats.capture_end_us, timestamp_us);
  }

  for (const auto& rec : msg.records) {
    ++stats.total_pages;
    if (const auto* s = std::get_if<STmsi>(&rec.ue_identity)) {
      const TmsiKey key = make_tmsi_key(s->mmec, s->m_tmsi);
      auto [it, inserted] = stats.sessions.try_emplace(
          key, TmsiSession{key, timestamp_us, timestamp_us, 1});
      if (!inserted) {
        auto& session = it->second;
        session.first_seen_us = std::min(session.first_seen_us, timestamp_us);
        session.last_seen_us = std::max(session.last_seen_us, timestamp_us);
        ++session.occurrence_count;
      }
    } else {
      ++stats.imsi_pages;
      stats.imsi_log.push_back(
          {timestamp_us, mask_imsi(std::get<Imsi>(rec.ue_identity))});
    }
  }
}

PagingStats merge(const PagingStats& a, const PagingStats& b) {
  PagingStats out = a;
  out.total_pages += b.total_pages;
  out.imsi_pages += b.imsi_pages;
  for (const auto& [key, session] : b.sessions) {
    auto [it, inserted] = out.sessions.try_emplace(key, session);
    if (!inserted) {
      it->second.first_seen_us = std::min(it->second.first_seen_us, session.first_seen_us);
      it->second.last_seen_us = std::max(it->second.last_seen_us, session.last_seen_us);
      it->second.occurrence_count += session.occurrence_count;
    }
  }
  if (b.has_observations) {
    if (!out.has_observations) {
      out.capture_start_us = b.capture_start_us;
      out.capture_end_us = b.capture_end_us;
      out.has_observations = true;
    } else {
      out.capture_start_us = std::min(out.capture_start_us, b.capture_start_us);
      out.capture_end_us = std::max(out.capture_end_us, b.capture_end_us);
    }
  }
  out.imsi_log.insert(out.imsi_log.end(), b.imsi_log.begin(), b.imsi_log.end());
  return out;
}

double lifespan_minutes(const TmsiSession& session) {
  return static_cast<double>(session.last_seen_us - session.first_seen_us) / 60e6;
}

double capture_duration_minutes(const PagingStats& stats) {
  return static_cast<double>(stats.capture_end_us - stats.capture_start_us) / 60e6;
}

double longest_lifespan_minutes(const PagingStats& stats) {
  double longest = 0;
  for (const auto& [key, session] : stats.sessions) {
    longest = std::max(longest, lifespan_minutes(session));
  }
  return longest;
}

std::vector<HistogramBin> lifespan_histogram(const PagingStats& stats, double bin_minutes) {
  if (bin_minutes <= 0) {
    throw std::invalid_argument("histogram bin width must be positive");
  }
  const double duration = capture_duration_minutes(stats);
  const auto bin_count =
      static_cast<std::size_t>(std::floor(duration / bin_minutes)) + 1;
  std::vector<HistogramBin> bins(bin_count);
  for (std::size_t i = 0; i < bin_count; ++i) {
    bins[i].bin_start_min = static_cast<double>(i) * bin_minutes;
  }
  for (const auto& [key, session] : stats.sessions) {
    const auto idx =
        static_cast<std::size_t>(std::floor(lifespan_minutes(session) / bin_minutes));
    bins[idx].count += 1;
  }
  return bins;
}

ReportColumn summarize(const PagingStats& stats, std::string label) {
  ReportColumn col;
  col.label = std::move(label);
  col.total_pages = stats.total_pages;
  col.unique_tmsis = stats.unique_tmsis();
  col.longest_minutes = longest_lifespan_minutes(stats);
  col.imsi_pages = stats.imsi_pages;
  col.imsi_fraction =
      stats.total_pages == 0
          ? 0.0
          : static_cast<double>(stats.imsi_pages) / static_cast<double>(stats.total_pages);
  return col;
}

namespace {

std::string format_minutes(double minutes) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", minutes);
  return buf;
}

}  // namespace

std::string render_report(std::span<const ReportColumn> columns) {
  static constexpr const char* kRowNames[] = {
      "Total Pages",
      "Unique TMSIs",
      "Longest active TMSI in minutes",
  };
  std::size_t metric_width = std::string("Metrics").size();
  for (const auto* name : kRowNames) {
    metric_width = std::max(metric_width, std::string(name).size());
  }

  std::vector<std::vector<std::string>> cells(columns.size());
  std::vector<std::size_t> widths(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    cells[c] = {std::to_string(columns[c].total_pages),
                std::to_string(columns[c].unique_tmsis),
                format_minutes(columns[c].longest_minutes)};
    widths[c] = columns[c].label.size();
    for (const auto& cell : cells[c]) {
      widths[c] = std::max(widths[c], cell.size());
    }
  }

  std::ostringstream out;
  auto pad = [](const std::string& s, std::size_t w) {
    return std::string(w - s.size(), ' ') + s;
  };
  out << "Metrics" << std::string(metric_width - 7, ' ');
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << " | " << pad(columns[c].label, widths[c]);
  }
  out << '\n' << std::string(metric_width, '-');
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << "-+-" << std::string(widths[c], '-');
  }
  out << '\n';
  for (std::size_t row = 0; row < 3; ++row) {
    out << kRowNames[row] << std::string(metric_width - std::string(kRowNames[row]).size(), ' ');
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << " | " << pad(cells[c][row], widths[c]);
    }
    out << '\n';
  }
  for (const auto& col : columns) {
    if (col.imsi_pages > 0) {
      char line[160];
      std::snprintf(line, sizeof(line),
                    "WARNING: %s: %llu IMSI paging record%s observed (%.4f of total pages)\n",
                    col.label.c_str(), static_cast<unsigned long long>(col.imsi_pages),
                    col.imsi_pages == 1 ? "" : "s", col.imsi_fraction);
      out << line;
    }
  }
  return out.str();
}

PersistenceComparison persistence_compare(const PagingStats& a, const PagingStats& b) {
  PersistenceComparison cmp;
  for (const auto& [key, session] : a.sessions) {
    if (b.sessions.count(key) > 0) {
      cmp.overlap.push_back(key);
    }
  }
  const std::size_t union_size =
      a.sessions.size() + b.sessions.size() - cmp.overlap.size();
  cmp.jaccard = union_size == 0
                    ? 0.0
                    : static_cast<double>(cmp.overlap.size()) /
                          static_cast<double>(union_size);
  return cmp;
}

ImsiPagingReport detect_imsi_paging(const PagingStats& stats) {
  ImsiPagingReport report;
  report.count = stats.imsi_pages;
  report.fraction =
      stats.total_pages == 0
          ? 0.0
          : static_cast<double>(stats.imsi_pages) / static_cast<double>(stats.total_pages);
  return report;
}

void write_sessions_csv(std::ostream& out, const PagingStats& stats) {
  out << "tmsi_hex,first_seen_us,last_seen_us,occurrences\n";
  for (const auto& [key, session] : stats.sessions) {
    out << tmsi_key_hex(key) << ',' << session.first_seen_us << ','
        << session.last_seen_us << ',' << session.occurrence_count << '\n';
  }
}

void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins) {
  out << "bin_start_min,count\n";
  char buf[64];
  for (const auto& bin : bins) {
    std::snprintf(buf, sizeof(buf), "%.6g,%llu\n", bin.bin_start_min,
                  static_cast<unsigned long long>(bin.count));
    out << buf;
  }
}

}  // namespace ltescope
