#include "ltescope/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace ltescope {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct TmsiActivity {
  std::uint8_t mmec = 0;
  std::uint32_t m_tmsi = 0;
  std::int64_t start_us = 0;
  std::int64_t len_us = 0;
};

struct PageEvent {
  std::int64_t t_us = 0;
  bool is_imsi = false;
  std::size_t owner = 0;            // index into activities when !is_imsi
  std::vector<std::uint8_t> imsi;   // raw digits when is_imsi
};

}  // namespace

void validate_model(const SynthModel& model) {
  auto reject = [](const char* what) { throw std::invalid_argument(what); };
  if (!(model.duration_min > 0)) reject("duration_min must be > 0");
  if (!(model.page_rate_per_s > 0)) reject("page_rate_per_s must be > 0");
  if (model.short_lived_fraction < 0 || model.short_lived_fraction > 1) {
    reject("short_lived_fraction must be in [0,1]");
  }
  if (model.long_lived_fraction_full_duration < 0 ||
      model.long_lived_fraction_full_duration > 1) {
    reject("long_lived_fraction_full_duration must be in [0,1]");
  }
  if (model.short_lived_fraction + model.long_lived_fraction_full_duration > 1.0) {
    reject("short_lived_fraction + long_lived_fraction_full_duration must be <= 1");
  }
  if (model.short_lifespan_max_min < 0) reject("short_lifespan_max_min must be >= 0");
}

SynthTrace generate_trace(const SynthModel& model) {
  validate_model(model);
  SynthTrace trace;
  std::mt19937_64 rng(model.rng_seed);

  const auto duration_us = static_cast<std::int64_t>(std::llround(model.duration_min * 60e6));
  const auto short_max_us = std::min(
      duration_us, static_cast<std::int64_t>(std::llround(model.short_lifespan_max_min * 60e6)));

  const auto n = model.tmsi_population;
  const auto n_short = static_cast<std::uint64_t>(
      std::llround(static_cast<double>(n) * model.short_lived_fraction));
  auto n_full = static_cast<std::uint64_t>(
      std::llround(static_cast<double>(n) * model.long_lived_fraction_full_duration));
  if (n_short + n_full > n) {
    n_full = n - n_short;
  }

  std::vector<TmsiActivity> activities;
  activities.reserve(n);
  std::unordered_set<std::uint64_t> used_keys;
  for (std::uint64_t i = 0; i < n; ++i) {
    TmsiActivity act;
    do {
      act.mmec = static_cast<std::uint8_t>(rng() & 0xFF);
      act.m_tmsi = static_cast<std::uint32_t>(rng() & 0xFFFFFFFF);
    } while (!used_keys.insert(make_tmsi_key(act.mmec, act.m_tmsi)).second);

    if (i < n_short) {
      act.len_us = static_cast<std::int64_t>(uniform01(rng) * static_cast<double>(short_max_us));
    } else if (i < n_short + n_full) {
      act.len_us = duration_us;
    } else {
      act.len_us = short_max_us + static_cast<std::int64_t>(
                                      uniform01(rng) *
                                      static_cast<double>(duration_us - short_max_us));
    }
    act.start_us = static_cast<std::int64_t>(
        uniform01(rng) * static_cast<double>(duration_us - act.len_us));
    activities.push_back(act);
  }

  const auto n_pages = static_cast<std::uint64_t>(
      std::llround(model.page_rate_per_s * model.duration_min * 60.0));

  std::vector<PageEvent> events;
  events.reserve(n_pages + model.imsi_page_count);
  if (n > 0) {
    for (std::uint64_t p = 0; p < n_pages; ++p) {
      PageEvent ev;
      ev.owner = static_cast<std::size_t>(rng() % n);
      const auto& act = activities[ev.owner];
      ev.t_us = act.start_us +
                static_cast<std::int64_t>(uniform01(rng) * static_cast<double>(act.len_us));
      events.push_back(ev);
    }
  }
  for (std::uint64_t k = 0; k < model.imsi_page_count; ++k) {
    PageEvent ev;
    ev.is_imsi = true;
    ev.t_us = static_cast<std::int64_t>(uniform01(rng) * static_cast<double>(duration_us));
    ev.imsi.resize(15);
    for (auto& d : ev.imsi) {
      d = static_cast<std::uint8_t>(rng() % 10);
    }
    events.push_back(ev);
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const PageEvent& a, const PageEvent& b) { return a.t_us < b.t_us; });

  // Ground truth by direct bookkeeping over the drawn pages.
  auto& truth = trace.truth.expected;
  for (const auto& ev : events) {
    if (!truth.has_observations) {
      truth.capture_start_us = ev.t_us;
      truth.capture_end_us = ev.t_us;
      truth.has_observations = true;
    } else {
      truth.capture_start_us = std::min(truth.capture_start_us, ev.t_us);
      truth.capture_end_us = std::max(truth.capture_end_us, ev.t_us);
    }
    ++truth.total_pages;
    if (ev.is_imsi) {
      ++truth.imsi_pages;
      truth.imsi_log.push_back({ev.t_us, mask_imsi(Imsi{ev.imsi})});
    } else {
      const auto& act = activities[ev.owner];
      const TmsiKey key = make_tmsi_key(act.mmec, act.m_tmsi);
      auto [it, inserted] =
          truth.sessions.try_emplace(key, TmsiSession{key, ev.t_us, ev.t_us, 1});
      if (!inserted) {
        it->second.first_seen_us = std::min(it->second.first_seen_us, ev.t_us);
        it->second.last_seen_us = std::max(it->second.last_seen_us, ev.t_us);
        ++it->second.occurrence_count;
      }
    }
  }

  trace.frames.reserve(events.size());
  for (const auto& ev : events) {
    PagingMessage msg;
    PagingRecord rec;
    if (ev.is_imsi) {
      rec.ue_identity = Imsi{ev.imsi};
    } else {
      const auto& act = activities[ev.owner];
      rec.ue_identity = STmsi{act.mmec, act.m_tmsi};
    }
    rec.cn_domain = CnDomain::ps;
    msg.records.push_back(std::move(rec));

    CaptureFrame frame;
    frame.timestamp_us = ev.t_us;
    frame.radio_type = RadioType::fdd;
    frame.direction = Direction::downlink;
    frame.rnti_type = RntiType::p_rnti;
    frame.rnti = kPagingRnti;
    frame.sfn = static_cast<std::uint16_t>((ev.t_us / 10000) % 1024);
    frame.subframe = static_cast<std::uint8_t>((ev.t_us / 1000) % 10);
    frame.payload = encode_pcch(msg);
    trace.frames.push_back(std::move(frame));
  }
  return trace;
}

std::vector<CaptureFrame> generate_sib_beacon(const Mib& mib, const Sib1& sib1,
                                              double period_ms, double duration_ms) {
  if (!(period_ms > 0)) {
    throw std::invalid_argument("beacon period must be > 0");
  }
  std::vector<CaptureFrame> frames;
  const auto sib1_payload = encode_sib1(sib1);
  for (double t_ms = 0; t_ms < duration_ms; t_ms += period_ms) {
    const auto t_us = static_cast<std::int64_t>(std::llround(t_ms * 1000.0));
    const auto sfn = static_cast<std::uint16_t>((t_us / 10000) % 1024);
    const auto subframe = static_cast<std::uint8_t>((t_us / 1000) % 10);

    Mib stamped = mib;
    stamped.sfn_msb = static_cast<std::uint8_t>(sfn >> 2);

    CaptureFrame bch;
    bch.timestamp_us = t_us;
    bch.rnti_type = RntiType::no_rnti;  // PBCH carries no RNTI
    bch.sfn = sfn;
    bch.subframe = subframe;
    bch.payload = encode_mib(stamped);
    frames.push_back(std::move(bch));

    CaptureFrame dlsch;
    dlsch.timestamp_us = t_us;
    dlsch.rnti_type = RntiType::si_rnti;
    dlsch.rnti = kSiRnti;
    dlsch.sfn = sfn;
    dlsch.subframe = subframe;
    dlsch.payload = sib1_payload;
    frames.push_back(std::move(dlsch));
  }
  return frames;
}

void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth) {
  const auto& s = truth.expected;
  nlohmann::json doc;
  doc["total_pages"] = s.total_pages;
  doc["imsi_pages"] = s.imsi_pages;
  doc["unique_tmsis"] = s.unique_tmsis();
  doc["capture_start_us"] = s.capture_start_us;
  doc["capture_end_us"] = s.capture_end_us;
  doc["has_observations"] = s.has_observations;
  auto& sessions = doc["sessions"] = nlohmann::json::array();
  for (const auto& [key, session] : s.sessions) {
    sessions.push_back({{"tmsi", tmsi_key_hex(key)},
                        {"first_us", session.first_seen_us},
                        {"last_us", session.last_seen_us},
                        {"count", session.occurrence_count}});
  }
  auto& imsi_log = doc["imsi_log"] = nlohmann::json::array();
  for (const auto& page : s.imsi_log) {
    imsi_log.push_back({{"t_us", page.timestamp_us}, {"masked", page.masked_digits}});
  }

  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write ground truth: " + path.string());
  }
  out << doc.dump() << '\n';
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read ground truth: " + path.string());
  }
  nlohmann::json doc = nlohmann::json::parse(in);

  GroundTruth truth;
  auto& s = truth.expected;
  s.total_pages = doc.at("total_pages").get<std::uint64_t>();
  s.imsi_pages = doc.at("imsi_pages").get<std::uint64_t>();
  s.capture_start_us = doc.at("capture_start_us").get<std::int64_t>();
  s.capture_end_us = doc.at("capture_end_us").get<std::int64_t>();
  s.has_observations = doc.at("has_observations").get<bool>();
  for (const auto& entry : doc.at("sessions")) {
    TmsiSession session;
    session.key = static_cast<TmsiKey>(
        std::stoull(entry.at("tmsi").get<std::string>(), nullptr, 16));
    session.first_seen_us = entry.at("first_us").get<std::int64_t>();
    session.last_seen_us = entry.at("last_us").get<std::int64_t>();
    session.occurrence_count = entry.at("count").get<std::uint64_t>();
    s.sessions.emplace(session.key, session);
  }
  for (const auto& entry : doc.at("imsi_log")) {
    s.imsi_log.push_back({entry.at("t_us").get<std::int64_t>(),
                          entry.at("masked").get<std::string>()});
  }
  return truth;
}

}  // namespace ltescope
