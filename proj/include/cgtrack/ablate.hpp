#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <cgtrack/metrics.hpp>
#include <cgtrack/synth.hpp>
#include <cgtrack/tracker.hpp>

namespace cgtrack {

struct AblateRow {
    std::string variant;
    SequenceStats stats;
};

struct AblateTable {
    std::string suite;
    std::uint64_t seed = 0;
    std::size_t n_scenarios = 0;
    std::vector<AblateRow> rows;
};

// Fixed scenario families the ablation suites run on. Each is a pure
// function of the seed.
//
// Crossing: two objects cross paths under a localization-noise burst with a
// short full occlusion, plus separate appearance-corruption windows; probes
// which matrix levels 2 and 3 should use.
std::vector<ScenarioSpec> crossing_suite(std::uint64_t seed);
// Parallel neighbors with per-frame jitter of varying size and independent
// classification flicker; probes which confidence should weight the IoU.
std::vector<ScenarioSpec> fusion_suite(std::uint64_t seed);
// Objects whose detections rotate through all four confidence quadrants;
// probes the value of each cascade level.
std::vector<ScenarioSpec> mixed_quadrant_suite(std::uint64_t seed);

// Per-variant tracker configurations, in table row order.
std::vector<std::pair<std::string, TrackerConfig>> cost_matrix_variants();
std::vector<std::pair<std::string, TrackerConfig>> fusion_variants();
std::vector<std::pair<std::string, TrackerConfig>> level_variants();

AblateTable run_cost_matrix_suite(std::uint64_t seed);
AblateTable run_fusion_suite(std::uint64_t seed);
AblateTable run_levels_suite(std::uint64_t seed);

// Runs a suite by name: cost-matrix, fusion, or levels.
AblateTable run_suite(const std::string& name, std::uint64_t seed);

std::string format_table(const AblateTable& table);

// Aggregate stats of one tracker configuration over a scenario set.
SequenceStats run_variant(const std::vector<ScenarioSpec>& scenarios,
                          const TrackerConfig& config);

}  // namespace cgtrack
