#include "ltescope/floodsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ltescope {

const char* to_string(AttackerPolicy policy) {
  switch (policy) {
    case AttackerPolicy::none: return "none";
    case AttackerPolicy::half_open_once: return "half_open_once";
    case AttackerPolicy::release_loop: return "release_loop";
    case AttackerPolicy::throttled: return "throttled";
  }
  return "unknown";
}

const char* to_string(Mitigation mitigation) {
  switch (mitigation) {
    case Mitigation::none: return "none";
    case Mitigation::deferred_allocation: return "deferred_allocation";
  }
  return "unknown";
}

const char* to_string(SimEventKind kind) {
  switch (kind) {
    case SimEventKind::connection_request: return "connection_request";
    case SimEventKind::setup_sent: return "setup_sent";
    case SimEventKind::setup_complete_timeout: return "setup_complete_timeout";
    case SimEventKind::setup_complete: return "setup_complete";
    case SimEventKind::release: return "release";
    case SimEventKind::legit_arrival: return "legit_arrival";
    case SimEventKind::legit_departure: return "legit_departure";
  }
  return "unknown";
}

const char* to_string(ActorKind actor) {
  return actor == ActorKind::attacker ? "attacker" : "legit";
}

void validate_config(const SimConfig& cfg) {
  auto reject = [](const char* what) { throw std::invalid_argument(what); };
  if (cfg.resource_pool_size < 1) reject("resource_pool_size must be >= 1");
  if (!(cfg.setup_complete_timeout_ms > 0)) reject("setup_complete_timeout_ms must be > 0");
  if (!(cfg.attacker_loop_period_ms > 0)) reject("attacker_loop_period_ms must be > 0");
  if (!(cfg.attacker_throttle_period_ms > 0)) reject("attacker_throttle_period_ms must be > 0");
  if (!(cfg.reconnect_delay_ms > 0)) reject("reconnect_delay_ms must be > 0");
  if (cfg.legit_arrival_rate_per_s < 0) reject("legit_arrival_rate_per_s must be >= 0");
  if (!(cfg.legit_hold_time_ms > 0)) reject("legit_hold_time_ms must be > 0");
  if (!(cfg.duration_ms > 0)) reject("duration_ms must be > 0");
}

std::vector<double> attacker_policy_events(AttackerPolicy policy, const SimConfig& cfg) {
  std::vector<double> times;
  switch (policy) {
    case AttackerPolicy::none:
      break;
    case AttackerPolicy::half_open_once:
      times.push_back(0.0);
      break;
    case AttackerPolicy::release_loop:
      for (double t = 0.0; t < cfg.duration_ms; t += cfg.attacker_loop_period_ms) {
        times.push_back(t);
      }
      break;
    case AttackerPolicy::throttled:
      for (double t = 0.0; t < cfg.duration_ms; t += cfg.attacker_throttle_period_ms) {
        times.push_back(t);
      }
      break;
  }
  return times;
}

namespace {

struct PendingEvent {
  double t = 0;
  std::uint64_t seq = 0;  // insertion order breaks time ties
  SimEventKind kind = SimEventKind::connection_request;
  ActorKind actor = ActorKind::attacker;
  std::uint64_t conn_id = 0;
};

struct EventAfter {
  bool operator()(const PendingEvent& a, const PendingEvent& b) const {
    if (a.t != b.t) return a.t > b.t;
    return a.seq > b.seq;
  }
};

struct Slot {
  ActorKind actor = ActorKind::attacker;
  bool connected = false;
};

// 53-bit uniform in [0, 1).
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg) : cfg_(cfg) {
    result_.config = cfg;
    free_slots_ = cfg.resource_pool_size;
  }

  SimResult run() {
    for (double t : attacker_policy_events(cfg_.attacker_policy, cfg_)) {
      push({t, 0, SimEventKind::connection_request, ActorKind::attacker, 0});
    }
    schedule_legit_arrivals();

    while (!queue_.empty() && !crashed_) {
      const PendingEvent ev = queue_.top();
      queue_.pop();
      dispatch(ev);
    }
    return std::move(result_);
  }

 private:
  void schedule_legit_arrivals() {
    if (cfg_.legit_arrival_rate_per_s <= 0) {
      return;
    }
    std::mt19937_64 rng(cfg_.rng_seed);
    const double rate_per_ms = cfg_.legit_arrival_rate_per_s / 1000.0;
    double t = 0;
    while (true) {
      t += -std::log1p(-uniform01(rng)) / rate_per_ms;
      if (t >= cfg_.duration_ms) {
        break;
      }
      push({t, 0, SimEventKind::legit_arrival, ActorKind::legit, 0});
    }
  }

  void push(PendingEvent ev) {
    ev.seq = next_seq_++;
    queue_.push(ev);
  }

  void log(double t, SimEventKind kind, ActorKind actor, std::uint64_t conn,
           const char* outcome) {
    result_.event_log.push_back({t, kind, actor, conn, outcome});
  }

  void dispatch(const PendingEvent& ev) {
    switch (ev.kind) {
      case SimEventKind::legit_arrival: {
        ++result_.legit_attempts;
        const std::uint64_t id = next_conn_id_++;
        log(ev.t, SimEventKind::legit_arrival, ActorKind::legit, id, "arrival");
        handle_request(ActorKind::legit, id, ev.t);
        break;
      }
      case SimEventKind::connection_request: {
        const std::uint64_t id = next_conn_id_++;
        handle_request(ActorKind::attacker, id, ev.t);
        break;
      }
      case SimEventKind::setup_complete_timeout: {
        auto it = slots_.find(ev.conn_id);
        if (it != slots_.end() && !it->second.connected) {
          const ActorKind actor = it->second.actor;
          slots_.erase(it);
          ++free_slots_;
          --half_open_;
          log(ev.t, SimEventKind::setup_complete_timeout, actor, ev.conn_id, "freed");
        }
        break;  // stale timers for completed or freed connections are inert
      }
      case SimEventKind::setup_complete: {
        handle_setup_complete(ev.conn_id, ev.t);
        break;
      }
      case SimEventKind::legit_departure: {
        auto it = slots_.find(ev.conn_id);
        if (it != slots_.end()) {
          slots_.erase(it);
          ++free_slots_;
          log(ev.t, SimEventKind::legit_departure, ActorKind::legit, ev.conn_id, "departed");
          log(ev.t, SimEventKind::release, ActorKind::legit, ev.conn_id, "freed");
        }
        break;
      }
      default:
        break;
    }
  }

  void handle_request(ActorKind actor, std::uint64_t id, double t) {
    if (cfg_.mitigation == Mitigation::deferred_allocation) {
      // SYN-cookie style: respond statelessly, allocate at SetupComplete.
      log(t, SimEventKind::connection_request, actor, id, "no_alloc");
      log(t, SimEventKind::setup_sent, actor, id, "sent");
      if (actor == ActorKind::legit) {
        push({t, 0, SimEventKind::setup_complete, actor, id});
      }
      return;
    }

    if (free_slots_ > 0) {
      --free_slots_;
      slots_[id] = {actor, false};
      ++half_open_;
      result_.peak_half_open = std::max(result_.peak_half_open, half_open_);
      log(t, SimEventKind::connection_request, actor, id, "accepted");
      log(t, SimEventKind::setup_sent, actor, id, "sent");
      if (free_slots_ == 0 && !result_.time_to_exhaustion_ms) {
        result_.time_to_exhaustion_ms = t;
      }
      push({t + cfg_.setup_complete_timeout_ms, 0, SimEventKind::setup_complete_timeout,
            actor, id});
      if (actor == ActorKind::legit) {
        push({t, 0, SimEventKind::setup_complete, actor, id});
      }
      return;
    }

    if (cfg_.crash_on_overflow) {
      crashed_ = true;
      result_.crashed_at_ms = t;
      log(t, SimEventKind::connection_request, actor, id, "crash");
      return;
    }
    log(t, SimEventKind::connection_request, actor, id, "rejected");
    if (actor == ActorKind::legit) {
      ++result_.legit_blocked;
    }
  }

  void handle_setup_complete(std::uint64_t id, double t) {
    if (cfg_.mitigation == Mitigation::deferred_allocation) {
      if (free_slots_ > 0) {
        --free_slots_;
        slots_[id] = {ActorKind::legit, true};
        log(t, SimEventKind::setup_complete, ActorKind::legit, id, "connected");
        if (free_slots_ == 0 && !result_.time_to_exhaustion_ms) {
          result_.time_to_exhaustion_ms = t;
        }
        push({t + cfg_.legit_hold_time_ms, 0, SimEventKind::legit_departure,
              ActorKind::legit, id});
      } else {
        ++result_.legit_blocked;
        log(t, SimEventKind::setup_complete, ActorKind::legit, id, "rejected");
      }
      return;
    }

    auto it = slots_.find(id);
    if (it == slots_.end() || it->second.connected) {
      return;
    }
    it->second.connected = true;
    --half_open_;
    log(t, SimEventKind::setup_complete, it->second.actor, id, "connected");
    push({t + cfg_.legit_hold_time_ms, 0, SimEventKind::legit_departure, ActorKind::legit,
          id});
  }

  SimConfig cfg_;
  SimResult result_;
  std::priority_queue<PendingEvent, std::vector<PendingEvent>, EventAfter> queue_;
  std::unordered_map<std::uint64_t, Slot> slots_;
  unsigned free_slots_ = 0;
  unsigned half_open_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_conn_id_ = 1;
  bool crashed_ = false;
};

std::string format_ms(double t) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", t);
  return buf;
}

std::string optional_ms(const std::optional<double>& t) {
  return t ? format_ms(*t) : std::string();
}

}  // namespace

SimResult run_simulation(const SimConfig& cfg) {
  validate_config(cfg);
  return Simulation(cfg).run();
}

double blocking_probability(const SimResult& result) {
  if (result.legit_attempts == 0) {
    return 0.0;
  }
  return static_cast<double>(result.legit_blocked) /
         static_cast<double>(result.legit_attempts);
}

std::string event_log_jsonl(const SimResult& result) {
  std::ostringstream out;
  const auto& c = result.config;
  char header[512];
  std::snprintf(header, sizeof(header),
                "{\"config\":{\"resource_pool_size\":%u,"
                "\"setup_complete_timeout_ms\":%s,\"attacker_policy\":\"%s\","
                "\"attacker_loop_period_ms\":%s,\"attacker_throttle_period_ms\":%s,"
                "\"reconnect_delay_ms\":%s,\"legit_arrival_rate_per_s\":%s,"
                "\"legit_hold_time_ms\":%s,\"mitigation\":\"%s\","
                "\"crash_on_overflow\":%s,\"duration_ms\":%s,\"rng_seed\":%llu}}",
                c.resource_pool_size, format_ms(c.setup_complete_timeout_ms).c_str(),
                to_string(c.attacker_policy),
                format_ms(c.attacker_loop_period_ms).c_str(),
                format_ms(c.attacker_throttle_period_ms).c_str(),
                format_ms(c.reconnect_delay_ms).c_str(),
                format_ms(c.legit_arrival_rate_per_s).c_str(),
                format_ms(c.legit_hold_time_ms).c_str(), to_string(c.mitigation),
                c.crash_on_overflow ? "true" : "false", format_ms(c.duration_ms).c_str(),
                static_cast<unsigned long long>(c.rng_seed));
  out << header << '\n';
  char line[256];
  for (const auto& e : result.event_log) {
    std::snprintf(line, sizeof(line),
                  "{\"t_ms\":%s,\"event\":\"%s\",\"actor\":\"%s\",\"conn\":%llu,"
                  "\"outcome\":\"%s\"}",
                  format_ms(e.t_ms).c_str(), to_string(e.kind), to_string(e.actor),
                  static_cast<unsigned long long>(e.conn_id), e.outcome.c_str());
    out << line << '\n';
  }
  return out.str();
}

std::string metrics_csv(const SimResult& result) {
  const auto& c = result.config;
  std::ostringstream out;
  out << "resource_pool_size,setup_complete_timeout_ms,attacker_policy,"
         "attacker_loop_period_ms,attacker_throttle_period_ms,reconnect_delay_ms,"
         "legit_arrival_rate_per_s,legit_hold_time_ms,mitigation,crash_on_overflow,"
         "duration_ms,rng_seed,time_to_exhaustion_ms,crashed_at_ms,legit_attempts,"
         "legit_blocked,blocking_probability,peak_half_open,events\n";
  char line[512];
  std::snprintf(line, sizeof(line), "%u,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%llu,%s,%s,%llu,%llu,%s,%u,%zu\n",
                c.resource_pool_size, format_ms(c.setup_complete_timeout_ms).c_str(),
                to_string(c.attacker_policy), format_ms(c.attacker_loop_period_ms).c_str(),
                format_ms(c.attacker_throttle_period_ms).c_str(),
                format_ms(c.reconnect_delay_ms).c_str(),
                format_ms(c.legit_arrival_rate_per_s).c_str(),
                format_ms(c.legit_hold_time_ms).c_str(), to_string(c.mitigation),
                c.crash_on_overflow ? "true" : "false", format_ms(c.duration_ms).c_str(),
                static_cast<unsigned long long>(c.rng_seed),
                optional_ms(result.time_to_exhaustion_ms).c_str(),
                optional_ms(result.crashed_at_ms).c_str(),
                static_cast<unsigned long long>(result.legit_attempts),
                static_cast<unsigned long long>(result.legit_blocked),
                format_ms(blocking_probability(result)).c_str(), result.peak_half_open,
                result.event_log.size());
  out << line;
  return out.str();
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad numeric value for " + key + ": " + value);
  }
}

}  // namespace

SimConfig parse_sim_config(std::istream& in) {
  SimConfig cfg;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "resource_pool_size") {
      cfg.resource_pool_size = static_cast<unsigned>(parse_double(key, value));
    } else if (key == "setup_complete_timeout_ms") {
      cfg.setup_complete_timeout_ms = parse_double(key, value);
    } else if (key == "attacker_policy") {
      std::string policy = value;
      const auto colon = value.find(':');
      if (colon != std::string::npos) {
        policy = trim(value.substr(0, colon));
        cfg.attacker_throttle_period_ms =
            parse_double(key, trim(value.substr(colon + 1)));
      }
      if (policy == "none") {
        cfg.attacker_policy = AttackerPolicy::none;
      } else if (policy == "half_open_once") {
        cfg.attacker_policy = AttackerPolicy::half_open_once;
      } else if (policy == "release_loop") {
        cfg.attacker_policy = AttackerPolicy::release_loop;
      } else if (policy == "throttled") {
        cfg.attacker_policy = AttackerPolicy::throttled;
      } else {
        throw std::invalid_argument("unknown attacker_policy: " + value);
      }
    } else if (key == "attacker_loop_period_ms") {
      cfg.attacker_loop_period_ms = parse_double(key, value);
    } else if (key == "attacker_throttle_period_ms") {
      cfg.attacker_throttle_period_ms = parse_double(key, value);
    } else if (key == "reconnect_delay_ms") {
      cfg.reconnect_delay_ms = parse_double(key, value);
    } else if (key == "legit_arrival_rate_per_s") {
      cfg.legit_arrival_rate_per_s = parse_double(key, value);
    } else if (key == "legit_hold_time_ms") {
      cfg.legit_hold_time_ms = parse_double(key, value);
    } else if (key == "mitigation") {
      if (value == "none") {
        cfg.mitigation = Mitigation::none;
      } else if (value == "deferred_allocation") {
        cfg.mitigation = Mitigation::deferred_allocation;
      } else {
        throw std::invalid_argument("unknown mitigation: " + value);
      }
    } else if (key == "crash_on_overflow") {
      if (value == "true" || value == "1") {
        cfg.crash_on_overflow = true;
      } else if (value == "false" || value == "0") {
        cfg.crash_on_overflow = false;
      } else {
        throw std::invalid_argument("bad boolean for crash_on_overflow: " + value);
      }
    } else if (key == "rng_seed") {
      cfg.rng_seed = static_cast<std::uint64_t>(std::stoull(value));
    } else if (key == "duration_ms") {
      cfg.duration_ms = parse_double(key, value);
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  validate_config(cfg);
  return cfg;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open scenario config: " + path);
  }
  return parse_sim_config(in);
}

}  // namespace ltescope
