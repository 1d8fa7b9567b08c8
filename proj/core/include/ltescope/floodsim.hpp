// Deterministic discrete-event simulation of an eNB's RRC
// connection-establishment resources under a request/release flood.
//
// Semantics with mitigation none: a ConnectionRequest allocates a slot
// immediately and arms a setup-complete timer. Attackers never complete the
// handshake, so their slots sit half-open until the timer fires. A request
// arriving with no free slot either crashes the eNB (crash_on_overflow) or
// is rejected, counting legitimate rejections as blocked. With
// deferred_allocation, no slot is consumed until SetupComplete arrives, so
// attacker traffic holds zero state.
//
// The event loop is a priority queue ordered by (time, insertion sequence);
// identical configs and seeds yield bit-identical event logs.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ltescope {

enum class AttackerPolicy : std::uint8_t { none, half_open_once, release_loop, throttled };
enum class Mitigation : std::uint8_t { none, deferred_allocation };

const char* to_string(AttackerPolicy policy);
const char* to_string(Mitigation mitigation);

struct SimConfig {
  unsigned resource_pool_size = 100;
  double setup_complete_timeout_ms = 1000.0;
  AttackerPolicy attacker_policy = AttackerPolicy::none;
  double attacker_loop_period_ms = 10.0;
  double attacker_throttle_period_ms = 1000.0;  // period for throttled
  double reconnect_delay_ms = 100.0;
  double legit_arrival_rate_per_s = 0.0;
  double legit_hold_time_ms = 5000.0;
  Mitigation mitigation = Mitigation::none;
  bool crash_on_overflow = false;
  double duration_ms = 10000.0;
  std::uint64_t rng_seed = 0;
};

/// Throws std::invalid_argument describing the first violated constraint.
void validate_config(const SimConfig& cfg);

enum class SimEventKind : std::uint8_t {
  connection_request,
  setup_sent,
  setup_complete_timeout,
  setup_complete,
  release,
  legit_arrival,
  legit_departure,
};

enum class ActorKind : std::uint8_t { attacker, legit };

const char* to_string(SimEventKind kind);
const char* to_string(ActorKind actor);

struct SimLogEntry {
  double t_ms = 0;
  SimEventKind kind = SimEventKind::connection_request;
  ActorKind actor = ActorKind::attacker;
  std::uint64_t conn_id = 0;
  // accepted | rejected | crash | no_alloc | connected | freed | sent |
  // arrival | departed
  std::string outcome;

  bool operator==(const SimLogEntry&) const = default;
};

struct SimResult {
  std::optional<double> time_to_exhaustion_ms;  // first instant free_slots hit 0
  std::optional<double> crashed_at_ms;
  std::uint64_t legit_attempts = 0;
  std::uint64_t legit_blocked = 0;
  unsigned peak_half_open = 0;
  std::vector<SimLogEntry> event_log;
  SimConfig config;  // echoed so every report carries the timer defaults
};

/// Request instants for the attacker: half_open_once emits one request at
/// t=0, release_loop one every attacker_loop_period_ms, throttled one every
/// attacker_throttle_period_ms, all within [0, duration).
std::vector<double> attacker_policy_events(AttackerPolicy policy, const SimConfig& cfg);

SimResult run_simulation(const SimConfig& cfg);

/// legit_blocked / legit_attempts, 0 when there were no attempts.
double blocking_probability(const SimResult& result);

/// One JSON object per line: a config/header line followed by every log
/// entry. Byte-stable for identical (config, seed).
std::string event_log_jsonl(const SimResult& result);

/// Single-row CSV (with header) carrying config echo and outcome metrics.
std::string metrics_csv(const SimResult& result);

/// Plain-text `key = value` scenario file; '#' starts a comment. Unknown
/// keys or malformed values throw std::invalid_argument.
SimConfig parse_sim_config(std::istream& in);
SimConfig load_sim_config(const std::string& path);

}  // namespace ltescope
