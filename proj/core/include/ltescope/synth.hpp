// Synthetic capture generator with known ground truth. TMSI activity follows
// a mixture model (short-lived majority, a long-lived tail pinned to the
// full duration, the rest in between); pages are uniform draws inside each
// TMSI's active interval. Ground truth is computed by direct bookkeeping
// during generation, never by running the analyzer, so the decode->analyze
// pipeline can be checked against it end to end.

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ltescope/analytics.hpp"
#include "ltescope/mac_lte.hpp"
#include "ltescope/rrc.hpp"

namespace ltescope {

struct SynthModel {
  double duration_min = 60.0;
  double page_rate_per_s = 10.0;
  std::uint64_t tmsi_population = 1000;
  double short_lived_fraction = 0.8;
  double short_lifespan_max_min = 5.0;
  double long_lived_fraction_full_duration = 0.1;
  std::uint64_t imsi_page_count = 0;
  std::uint64_t rng_seed = 0;
};

/// Throws std::invalid_argument for out-of-range fields (fractions outside
/// [0,1] or summing past 1, non-positive duration or rate).
void validate_model(const SynthModel& model);

/// Expected analyzer output, regenerated exactly by identical seeds.
struct GroundTruth {
  PagingStats expected;

  bool operator==(const GroundTruth&) const = default;
};

struct SynthTrace {
  std::vector<CaptureFrame> frames;
  GroundTruth truth;
};

SynthTrace generate_trace(const SynthModel& model);

/// MIB + SIB1 beacon frames at a fixed period with SFN advancing as a
/// monotone 10-ms frame counter mod 1024 (sfn_msb carries the top 8 bits).
std::vector<CaptureFrame> generate_sib_beacon(const Mib& mib, const Sib1& sib1,
                                              double period_ms, double duration_ms);

/// JSON sidecar conventionally named `<capture>.truth.json`.
void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth);
GroundTruth read_ground_truth(const std::filesystem::path& path);

}  // namespace ltescope
