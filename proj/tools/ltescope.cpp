// ltescope command-line front end: decode captures, compute paging
// statistics, compare TMSI sets across captures, run the RRC flood
// simulator, and generate synthetic captures.
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid arguments.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ltescope/analytics.hpp"
#include "ltescope/floodsim.hpp"
#include "ltescope/pcap.hpp"
#include "ltescope/rrc.hpp"
#include "ltescope/synth.hpp"

namespace fs = std::filesystem;
using namespace ltescope;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitArgs = 2;

std::string hex16(std::uint16_t v) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "0x%04x", v);
  return buf;
}

std::string masked_identity_text(const PagingRecord& rec) {
  char buf[96];
  if (const auto* s = std::get_if<STmsi>(&rec.ue_identity)) {
    std::snprintf(buf, sizeof(buf), "s_tmsi mmec=0x%02x m_tmsi=0x%08x cn=%s", s->mmec,
                  s->m_tmsi, to_string(rec.cn_domain));
    return buf;
  }
  const auto& imsi = std::get<Imsi>(rec.ue_identity);
  return "imsi " + mask_imsi(imsi) + " cn=" + to_string(rec.cn_domain);
}

nlohmann::json record_json(const PagingRecord& rec) {
  nlohmann::json j;
  if (const auto* s = std::get_if<STmsi>(&rec.ue_identity)) {
    j["kind"] = "s_tmsi";
    j["mmec"] = s->mmec;
    j["m_tmsi"] = s->m_tmsi;
    j["tmsi_hex"] = tmsi_key_hex(make_tmsi_key(s->mmec, s->m_tmsi));
  } else {
    j["kind"] = "imsi";
    j["imsi_masked"] = mask_imsi(std::get<Imsi>(rec.ue_identity));
  }
  j["cn_domain"] = to_string(rec.cn_domain);
  return j;
}

std::string plmn_text(const PlmnIdentity& plmn) {
  std::string out;
  if (plmn.mcc) {
    for (auto d : *plmn.mcc) out += static_cast<char>('0' + d);
  }
  out += '-';
  for (auto d : plmn.mnc) out += static_cast<char>('0' + d);
  if (plmn.cell_reserved) out += 'r';
  return out;
}

void print_frame_text(const CaptureFrame& frame, Channel channel) {
  std::printf("t_us=%" PRId64 " ch=%s", frame.timestamp_us, to_string(channel));
  switch (channel) {
    case Channel::pcch: {
      const auto decoded = decode_pcch(frame.payload);
      if (const auto* err = std::get_if<DecodeError>(&decoded)) {
        std::printf(" decode-error kind=%s bit=%zu\n", to_string(err->kind),
                    err->bit_offset);
        return;
      }
      const auto& msg = std::get<PagingMessage>(decoded);
      std::printf(" paging records=%zu sysinfo_mod=%d etws=%d", msg.records.size(),
                  msg.system_info_modification ? 1 : 0, msg.etws_indication ? 1 : 0);
      for (const auto& rec : msg.records) {
        std::printf(" [%s]", masked_identity_text(rec).c_str());
      }
      std::printf("\n");
      return;
    }
    case Channel::bcch_bch: {
      const auto decoded = decode_mib(frame.payload);
      if (const auto* err = std::get_if<DecodeError>(&decoded)) {
        std::printf(" decode-error kind=%s bit=%zu\n", to_string(err->kind),
                    err->bit_offset);
        return;
      }
      const auto& mib = std::get<Mib>(decoded);
      std::printf(" mib dl_bw=%s phich_dur=%s phich_res=%s sfn_msb=%u spare=%u\n",
                  to_string(mib.dl_bandwidth), to_string(mib.phich_duration),
                  to_string(mib.phich_resource), mib.sfn_msb, mib.spare);
      return;
    }
    case Channel::bcch_dl_sch: {
      const auto decoded = decode_bcch_dl_sch(frame.payload);
      if (const auto* err = std::get_if<DecodeError>(&decoded)) {
        std::printf(" decode-error kind=%s bit=%zu\n", to_string(err->kind),
                    err->bit_offset);
        return;
      }
      const auto& msg = std::get<BcchDlSchMessage>(decoded);
      if (const auto* sib = std::get_if<Sib1>(&msg)) {
        std::string plmns;
        for (std::size_t i = 0; i < sib->plmn_list.size(); ++i) {
          if (i > 0) plmns += ',';
          plmns += plmn_text(sib->plmn_list[i]);
        }
        std::printf(
            " sib1 plmns=[%s] tac=%s cell_id=0x%07x barred=%d intra_resel=%s csg=%d"
            " si_window_ms=%u sched_count=%u\n",
            plmns.c_str(), hex16(sib->tracking_area_code).c_str(), sib->cell_identity,
            sib->cell_barred ? 1 : 0, to_string(sib->intra_freq_reselection),
            sib->csg_indication ? 1 : 0, sib->si_window_length_ms,
            sib->scheduling_info_count);
      } else {
        const auto& summary = std::get<SystemInfoSummary>(msg);
        std::printf(" sysinfo entries=%u first_sib=%u\n", summary.entry_count,
                    summary.first_sib_type);
      }
      return;
    }
    case Channel::other:
      std::printf(" rnti_type=%s%s%s len=%zu\n", to_string(frame.rnti_type),
                  frame.rnti ? " rnti=" : "",
                  frame.rnti ? hex16(*frame.rnti).c_str() : "", frame.payload.size());
      return;
  }
}

void print_frame_jsonl(const CaptureFrame& frame, Channel channel) {
  nlohmann::json j;
  j["t_us"] = frame.timestamp_us;
  j["channel"] = to_string(channel);
  auto attach_error = [&](const DecodeError& err) {
    j["type"] = "decode_error";
    j["kind"] = to_string(err.kind);
    j["bit_offset"] = err.bit_offset;
  };
  switch (channel) {
    case Channel::pcch: {
      const auto decoded = decode_pcch(frame.payload);
      if (const auto* err = std::get_if<DecodeError>(&decoded)) {
        attach_error(*err);
        break;
      }
      const auto& msg = std::get<PagingMessage>(decoded);
      j["type"] = "paging";
      j["system_info_modification"] = msg.system_info_modification;
      j["etws_indication"] = msg.etws_indication;
      auto& records = j["records"] = nlohmann::json::array();
      for (const auto& rec : msg.records) {
        records.push_back(record_json(rec));
      }
      break;
    }
    case Channel::bcch_bch: {
      const auto decoded = decode_mib(frame.payload);
      if (const auto* err = std::get_if<DecodeError>(&decoded)) {
        attach_error(*err);
        break;
      }
      const auto& mib = std::get<Mib>(decoded);
      j["type"] = "mib";
      j["dl_bandwidth"] = to_string(mib.dl_bandwidth);
      j["phich_duration"] = to_string(mib.phich_duration);
      j["phich_resource"] = to_string(mib.phich_resource);
      j["sfn_msb"] = mib.sfn_msb;
      j["spare"] = mib.spare;
      break;
    }
    case Channel::bcch_dl_sch: {
      const auto decoded = decode_bcch_dl_sch(frame.payload);
      if (const auto* err = std::get_if<DecodeError>(&decoded)) {
        attach_error(*err);
        break;
      }
      const auto& msg = std::get<BcchDlSchMessage>(decoded);
      if (const auto* sib = std::get_if<Sib1>(&msg)) {
        j["type"] = "sib1";
        auto& plmns = j["plmn_list"] = nlohmann::json::array();
        for (const auto& plmn : sib->plmn_list) {
          nlohmann::json p;
          if (plmn.mcc) {
            std::string mcc;
            for (auto d : *plmn.mcc) mcc += static_cast<char>('0' + d);
            p["mcc"] = mcc;
          }
          std::string mnc;
          for (auto d : plmn.mnc) mnc += static_cast<char>('0' + d);
          p["mnc"] = mnc;
          p["cell_reserved"] = plmn.cell_reserved;
          plmns.push_back(p);
        }
        j["tracking_area_code"] = sib->tracking_area_code;
        j["cell_identity"] = sib->cell_identity;
        j["cell_barred"] = sib->cell_barred;
        j["intra_freq_reselection"] = to_string(sib->intra_freq_reselection);
        j["csg_indication"] = sib->csg_indication;
        j["si_window_length_ms"] = sib->si_window_length_ms;
        j["scheduling_info_count"] = sib->scheduling_info_count;
      } else {
        const auto& summary = std::get<SystemInfoSummary>(msg);
        j["type"] = "system_information";
        j["entries"] = summary.entry_count;
        j["first_sib_type"] = summary.first_sib_type;
      }
      break;
    }
    case Channel::other:
      j["type"] = "other";
      j["rnti_type"] = to_string(frame.rnti_type);
      if (frame.rnti) j["rnti"] = *frame.rnti;
      j["payload_len"] = frame.payload.size();
      break;
  }
  std::printf("%s\n", j.dump().c_str());
}

int run_decode(const std::string& in, std::optional<std::uint32_t> dlt,
               const std::string& format) {
  try {
    CaptureReader reader(in, dlt);
    while (auto item = reader.next()) {
      if (const auto* err = std::get_if<FramingError>(&*item)) {
        if (format == "jsonl") {
          nlohmann::json j;
          j["type"] = "framing_error";
          j["offset"] = err->offset;
          j["kind"] = to_string(err->kind);
          std::printf("%s\n", j.dump().c_str());
        } else {
          std::printf("framing-error offset=%zu kind=%s\n", err->offset,
                      to_string(err->kind));
        }
        continue;
      }
      const auto& frame = std::get<CaptureFrame>(*item);
      const Channel channel = classify_channel(frame);
      if (format == "jsonl") {
        print_frame_jsonl(frame, channel);
      } else {
        print_frame_text(frame, channel);
      }
    }
  } catch (const PcapError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}

PagingStats stats_for_capture(const fs::path& path) {
  PagingStats stats;
  CaptureReader reader(path);
  while (auto item = reader.next()) {
    const auto* frame = std::get_if<CaptureFrame>(&*item);
    if (frame == nullptr || classify_channel(*frame) != Channel::pcch) {
      continue;
    }
    const auto decoded = decode_pcch(frame->payload);
    if (const auto* msg = std::get_if<PagingMessage>(&decoded)) {
      accumulate(stats, *msg, frame->timestamp_us);
    }
  }
  return stats;
}

int run_analyze(const std::vector<std::string>& inputs, double bin_minutes,
                const std::string& csv_dir) {
  if (bin_minutes <= 0) {
    std::fprintf(stderr, "error: --bin-minutes must be positive\n");
    return kExitArgs;
  }
  try {
    std::vector<ReportColumn> columns;
    std::vector<PagingStats> all_stats;
    for (const auto& in : inputs) {
      const fs::path path(in);
      auto stats = stats_for_capture(path);
      columns.push_back(summarize(stats, path.stem().string()));
      all_stats.push_back(std::move(stats));
    }
    std::printf("%s", render_report(columns).c_str());

    if (!csv_dir.empty()) {
      fs::create_directories(csv_dir);
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto stem = fs::path(inputs[i]).stem().string();
        std::ofstream sessions(fs::path(csv_dir) / (stem + ".sessions.csv"),
                               std::ios::trunc);
        write_sessions_csv(sessions, all_stats[i]);
        std::ofstream histogram(fs::path(csv_dir) / (stem + ".histogram.csv"),
                                std::ios::trunc);
        const auto bins = lifespan_histogram(all_stats[i], bin_minutes);
        write_histogram_csv(histogram, bins);
        if (!sessions || !histogram) {
          throw PcapError("failed writing CSV output under " + csv_dir);
        }
      }
    }
  } catch (const PcapError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}

int run_compare(const std::string& a, const std::string& b) {
  try {
    const auto stats_a = stats_for_capture(a);
    const auto stats_b = stats_for_capture(b);
    const auto cmp = persistence_compare(stats_a, stats_b);
    std::printf("unique_a=%" PRIu64 " unique_b=%" PRIu64 " overlap=%zu jaccard=%.6f\n",
                stats_a.unique_tmsis(), stats_b.unique_tmsis(), cmp.overlap.size(),
                cmp.jaccard);
  } catch (const PcapError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}

int run_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_path, const std::string& event_log_path) {
  SimConfig cfg;
  try {
    cfg = load_sim_config(config_path);
    if (seed) {
      cfg.rng_seed = *seed;
    }
    validate_config(cfg);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitArgs;
  }

  const auto result = run_simulation(cfg);
  const auto csv = metrics_csv(result);
  if (out_path.empty()) {
    std::printf("%s", csv.c_str());
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    out << csv;
    if (!out) {
      std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
      return kExitIo;
    }
  }
  if (!event_log_path.empty()) {
    std::ofstream out(event_log_path, std::ios::trunc);
    out << event_log_jsonl(result);
    if (!out) {
      std::fprintf(stderr, "error: cannot write %s\n", event_log_path.c_str());
      return kExitIo;
    }
  }
  return kExitOk;
}

int run_synth(const SynthModel& model, const std::string& out_path, std::uint32_t dlt,
              double beacon_period_ms) {
  try {
    validate_model(model);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitArgs;
  }
  try {
    auto trace = generate_trace(model);
    if (beacon_period_ms > 0) {
      Mib mib;
      mib.dl_bandwidth = DlBandwidth::n50;
      Sib1 sib1;
      sib1.plmn_list.push_back({std::array<std::uint8_t, 3>{0, 0, 1}, {0, 1}, false});
      sib1.tracking_area_code = 0x0001;
      sib1.cell_identity = 0x0000001;
      const auto beacons = generate_sib_beacon(mib, sib1, beacon_period_ms,
                                               model.duration_min * 60e3);
      trace.frames.insert(trace.frames.end(), beacons.begin(), beacons.end());
      std::stable_sort(trace.frames.begin(), trace.frames.end(),
                       [](const CaptureFrame& x, const CaptureFrame& y) {
                         return x.timestamp_us < y.timestamp_us;
                       });
    }
    write_capture(trace.frames, out_path, dlt);
    const auto truth_path = out_path + ".truth.json";
    write_ground_truth(truth_path, trace.truth);
    std::printf("wrote %zu frames to %s (truth: %s)\n", trace.frames.size(),
                out_path.c_str(), truth_path.c_str());
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitArgs;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline LTE RAN signaling analyzer: MAC-LTE capture decoding, "
               "paging/TMSI statistics, and RRC flood simulation"};
  app.set_version_flag("--version", "ltescope 0.1.0");
  app.require_subcommand(1);

  // decode
  auto* decode_cmd = app.add_subcommand("decode", "Decode a capture to text or JSON lines");
  std::string decode_in;
  std::string decode_format = "text";
  std::uint32_t decode_dlt = 0;
  decode_cmd->add_option("--in", decode_in, "input capture file")->required();
  decode_cmd->add_option("--dlt", decode_dlt, "require this DLT_USER link type (147..162)")
      ->check(CLI::Range(147u, 162u));
  decode_cmd->add_option("--format", decode_format, "text|jsonl (default text)")
      ->check(CLI::IsMember({"text", "jsonl"}));

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Paging statistics report");
  std::vector<std::string> analyze_in;
  double bin_minutes = 5.0;
  std::string csv_dir;
  analyze_cmd->add_option("--in", analyze_in, "input capture file(s)")
      ->required()
      ->expected(-1);
  analyze_cmd->add_option("--bin-minutes", bin_minutes,
                          "lifespan histogram bin width in minutes (default 5)");
  analyze_cmd->add_option("--csv", csv_dir, "directory for per-capture CSV exports");

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "TMSI persistence across two captures");
  std::string compare_a, compare_b;
  compare_cmd->add_option("--a", compare_a, "first capture")->required();
  compare_cmd->add_option("--b", compare_b, "second capture")->required();

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the RRC flood simulator");
  std::string sim_config, sim_out, sim_event_log;
  std::uint64_t sim_seed = 0;
  bool sim_seed_set = false;
  simulate_cmd->add_option("--config", sim_config, "scenario config file")->required();
  simulate_cmd->add_option("--seed", sim_seed, "override the scenario rng_seed")
      ->each([&](const std::string&) { sim_seed_set = true; });
  simulate_cmd->add_option("--out", sim_out, "metrics CSV path (default stdout)");
  simulate_cmd->add_option("--event-log", sim_event_log, "JSON-lines event log path");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic capture + ground truth");
  SynthModel model;
  std::string synth_out;
  std::uint32_t synth_dlt = kDefaultDlt;
  double beacon_period_ms = 0.0;
  synth_cmd->add_option("--out", synth_out, "output capture path")->required();
  synth_cmd->add_option("--duration-min", model.duration_min, "capture length in minutes");
  synth_cmd->add_option("--page-rate", model.page_rate_per_s, "paging records per second");
  synth_cmd->add_option("--population", model.tmsi_population, "TMSI population size");
  synth_cmd->add_option("--short-fraction", model.short_lived_fraction,
                        "fraction of short-lived TMSIs");
  synth_cmd->add_option("--short-max-min", model.short_lifespan_max_min,
                        "max short lifespan in minutes");
  synth_cmd->add_option("--full-fraction", model.long_lived_fraction_full_duration,
                        "fraction of TMSIs active for the whole capture");
  synth_cmd->add_option("--imsi-pages", model.imsi_page_count, "IMSI paging records to inject");
  synth_cmd->add_option("--seed", model.rng_seed, "rng seed");
  synth_cmd->add_option("--dlt", synth_dlt, "DLT_USER link type to write (default 149)")
      ->check(CLI::Range(147u, 162u));
  synth_cmd->add_option("--beacon-period-ms", beacon_period_ms,
                        "also interleave MIB/SIB1 beacons at this period");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgs;
  }

  if (decode_cmd->parsed()) {
    std::optional<std::uint32_t> dlt;
    if (decode_cmd->count("--dlt") > 0) dlt = decode_dlt;
    return run_decode(decode_in, dlt, decode_format);
  }
  if (analyze_cmd->parsed()) {
    return run_analyze(analyze_in, bin_minutes, csv_dir);
  }
  if (compare_cmd->parsed()) {
    return run_compare(compare_a, compare_b);
  }
  if (simulate_cmd->parsed()) {
    return run_simulate(sim_config,
                        sim_seed_set ? std::optional<std::uint64_t>(sim_seed) : std::nullopt,
                        sim_out, sim_event_log);
  }
  if (synth_cmd->parsed()) {
    return run_synth(model, synth_out, synth_dlt, beacon_period_ms);
  }
  return kExitArgs;
}
