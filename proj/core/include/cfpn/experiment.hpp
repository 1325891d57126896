// SPDX-License-Identifier: Apache-2.0
//
// Experiment harness: sweep oscillator models over Monte-Carlo network
// drops, estimate per-symbol SINR/SE by ensemble averaging, aggregate
// per-UE average SE and quantiles, and persist plot-ready results.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cfpn/combining.hpp"
#include "cfpn/network.hpp"
#include "cfpn/numerology.hpp"
#include "cfpn/oscillator.hpp"
#include "cfpn/phase_trace.hpp"

namespace cfpn {

struct ExperimentConfig {
  NetworkConfig network;
  Numerology numerology;
  OscillatorModel oscillator = NoOscillator{};
  CombinerKind combiner = CombinerKind::MMSE;
  std::size_t drops = 50;      // Monte-Carlo network drops
  std::size_t ensemble = 200;  // channel+PN realizations per drop
  std::uint64_t master_seed = 1;
  SynthesisOptions synthesis;
  // When true, the Wiener innovation variance is interpreted as the variance
  // of the summed link phase (UE + AP) rather than per oscillator, i.e. each
  // oscillator receives sigma2/2.
  bool wiener_sigma2_is_link_total = false;

  // Throws std::invalid_argument on invalid members (drops < 1,
  // ensemble < 2, network/numerology validation failures).
  void validate() const;
};

struct SymbolStats {
  double mean_se = 0.0;  // average SE per UE, bits/s/Hz
  double q05 = 0.0;      // 5th percentile of per-UE SE (5%-outage rate)
  double q50 = 0.0;
  double q95 = 0.0;

  bool operator==(const SymbolStats&) const = default;
};

struct ResultsRecord {
  std::string model;                    // oscillator model label
  std::vector<SymbolStats> per_symbol;  // indexed by OFDM symbol 0..n_ct-1
  std::string config_hash;              // hash of the generating config
  std::uint64_t master_seed = 0;
  std::string provenance;               // tool/version string
  std::size_t failed_drops = 0;         // drops skipped after errors

  bool operator==(const ResultsRecord&) const = default;
};

// Runs the full experiment for one oscillator model.  Per drop: place the
// network, form clusters, synthesize per-oscillator symbol-rate phase
// traces, estimate per-symbol SINR by ensemble averaging, convert to SE, and
// pool per-(drop, UE) SE values for the mean/quantile summary.  Byte-
// deterministic given cfg.master_seed: every random draw comes from a
// substream keyed on (master_seed, purpose, drop, member, entity), so
// results do not depend on execution order.
ResultsRecord run_experiment(const ExperimentConfig& cfg);

// Phase-drift summary for the Fig.-3-style model comparison.
struct DriftSummary {
  std::string model;
  PhaseTrace trace;        // one shared-seed symbol-rate trace over the TTI
  double max_drift = 0.0;  // max |phase - phase_0| over that trace, rad
};

struct ComparisonResult {
  std::vector<ResultsRecord> records;  // one per config, same order
  std::vector<DriftSummary> drifts;    // one per config, same order
};

// Paired-model comparison: all configs must be identical except for the
// oscillator model (throws std::invalid_argument otherwise).  Seeds are
// shared, so symbol-0 SE is identical across models and per-drop differences
// are paired.  Drift traces use one shared seed and the numerology's symbol
// rate over one coherence time.
ComparisonResult compare_models(const std::vector<ExperimentConfig>& cfgs);

// Canonical FNV-1a hash of the config's JSON form; changes when any field
// changes.
std::string config_hash(const ExperimentConfig& cfg);

// Hash with the oscillator model blanked out; equal values mean two configs
// are valid for paired comparison.
std::string config_hash_without_oscillator(const ExperimentConfig& cfg);

// Persistence.  `base` is a path without extension: persist writes
// <base>.csv (rows: model,symbol_index,mean_se,q05,q50,q95; values with 9
// significant digits) and <base>.json (full config, seed, and
// full-precision stats).  load() reconstructs the record from the JSON
// sidecar, so persist-then-load is exact.  I/O failures throw IoError with
// the offending path.
void persist(const ResultsRecord& results, const ExperimentConfig& cfg,
             const std::filesystem::path& base);
ResultsRecord load_results(const std::filesystem::path& base);

// JSON round-trip for configs (used by the CLI config file and the persist
// sidecar).  parse throws std::invalid_argument listing every invalid field.
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text,
                                  const std::filesystem::path& base_dir = {});

}  // namespace cfpn
