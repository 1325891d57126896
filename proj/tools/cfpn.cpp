// SPDX-License-Identifier: Apache-2.0
//
// cfpn — phase-noise-aware cell-free massive MIMO simulator.
//
// Subcommands:
//   pn-gen   draw an oscillator phase trace and write it as CSV
//   pn-psd   Welch PSD estimate of a phase trace
//   sim      run the SE-vs-symbol-index experiment for each configured model
//   compare  paired-model comparison (SE records + phase-drift traces)
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfpn/csv.hpp"
#include "cfpn/errors.hpp"
#include "cfpn/experiment.hpp"
#include "cfpn/oscillator.hpp"
#include "cfpn/welch.hpp"

namespace {

using nlohmann::json;

std::string g9(double v) { return cfpn::format_g9(v); }

// "device:b200" -> "device_b200" so labels are usable as file names.
std::string sanitize(const std::string& label) {
  std::string out = label;
  for (char& c : out)
    if (c == ':' || c == '/' || c == ' ') c = '_';
  return out;
}

// Shared oscillator-model flags for pn-gen and compare --extra-model.
struct ModelFlags {
  std::string model = "wiener";
  double sigma2 = 0.23;
  std::string psd_path;
  std::string xo_path, pll_vco_path;
  double f_xo = 0.0, f_pll = 0.0, f_c = 0.0;
  std::string label;

  cfpn::OscillatorModel build(const std::filesystem::path& base_dir) const {
    if (model == "none") return cfpn::NoOscillator{};
    if (model == "wiener") {
      cfpn::WienerOscillator w;
      w.sigma2 = sigma2;
      return w;
    }
    if (model != "device")
      throw std::invalid_argument("unknown model '" + model +
                                  "' (expected none|wiener|device)");
    if (!psd_path.empty()) {
      return cfpn::DeviceOscillator{
          cfpn::PsdTable::from_csv(base_dir / psd_path),
          label.empty() ? std::filesystem::path(psd_path).stem().string()
                        : label};
    }
    if (xo_path.empty() || pll_vco_path.empty())
      throw std::invalid_argument(
          "device model needs --psd, or --xo and --pll-vco");
    cfpn::HardwareLoParams hw{cfpn::PsdTable::from_csv(base_dir / xo_path),
                              cfpn::PsdTable::from_csv(base_dir / pll_vco_path),
                              f_xo, f_pll, f_c};
    return cfpn::DeviceOscillator{cfpn::tabulate_composite_lo(hw),
                                  label.empty() ? "composite" : label};
  }
};

void add_model_flags(CLI::App* cmd, ModelFlags* flags) {
  cmd->add_option("--model", flags->model,
                  "Oscillator model: none|wiener|device")
      ->default_val("wiener");
  cmd->add_option("--sigma2", flags->sigma2,
                  "Wiener innovation variance per sample (rad^2)");
  cmd->add_option("--psd", flags->psd_path,
                  "Device PSD CSV (offset_hz,dbc_per_hz)");
  cmd->add_option("--xo", flags->xo_path, "Crystal reference PSD CSV");
  cmd->add_option("--pll-vco", flags->pll_vco_path, "PLL+VCO PSD CSV");
  cmd->add_option("--f-xo", flags->f_xo, "Crystal frequency (Hz)");
  cmd->add_option("--f-pll", flags->f_pll, "PLL loop cut-off (Hz)");
  cmd->add_option("--f-c", flags->f_c, "Carrier frequency (Hz)");
  cmd->add_option("--label", flags->label, "Model label for outputs");
}

// Profile defaults; file values override profile, flags override both.
void apply_profile(const std::string& profile, json* base) {
  json& network = (*base)["network"];
  if (profile == "desk") {
    network["m"] = 25;
    network["l"] = 2;
    network["k"] = 8;
    network["area_m"] = 200.0;
    (*base)["drops"] = 50;
    (*base)["ensemble"] = 200;
  } else if (profile == "paper") {
    network["m"] = 100;
    network["l"] = 4;
    network["k"] = 40;
    network["area_m"] = 400.0;
    (*base)["drops"] = 50;
    (*base)["ensemble"] = 500;
  } else if (!profile.empty()) {
    throw std::invalid_argument("unknown profile '" + profile +
                                "' (expected desk|paper)");
  }
}

struct SimFlags {
  std::string config_path;
  std::string profile;
  std::string out_dir = "results";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t drops = 0;
  std::size_t ensemble = 0;
  std::string combiner;
};

void add_sim_flags(CLI::App* cmd, SimFlags* flags) {
  cmd->add_option("--config", flags->config_path, "Experiment config JSON");
  cmd->add_option("--profile", flags->profile,
                  "Scale profile: desk (default sizes for a laptop) or paper");
  cmd->add_option("--out", flags->out_dir, "Output directory")
      ->default_val("results");
  cmd->add_option("--seed", flags->seed, "Master seed override");
  cmd->add_option("--drops", flags->drops, "Monte-Carlo drop count override");
  cmd->add_option("--ensemble", flags->ensemble,
                  "Per-drop ensemble size override");
  cmd->add_option("--combiner", flags->combiner,
                  "Combiner override: mr|mmse");
}

// Builds the list of per-model experiment configs from profile + config file
// + flag overrides.  The config file may hold a "models" array; otherwise its
// single "oscillator" (default none) is used.
std::vector<cfpn::ExperimentConfig> build_configs(const SimFlags& flags,
                                                  const CLI::App* cmd) {
  json base = json::object();
  apply_profile(flags.profile, &base);

  std::filesystem::path base_dir = std::filesystem::current_path();
  json file = json::object();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw cfpn::IoError("cannot open " + flags.config_path);
    try {
      file = json::parse(in);
    } catch (const json::exception& ex) {
      throw std::invalid_argument("config " + flags.config_path +
                                  " is not valid JSON: " + ex.what());
    }
    base_dir = std::filesystem::absolute(flags.config_path).parent_path();
  }
  // File values override profile values, recursively.
  base.merge_patch(file);

  json models = json::array();
  if (base.contains("models")) {
    models = base["models"];
    base.erase("models");
    if (!models.is_array() || models.empty())
      throw std::invalid_argument("'models' must be a non-empty array");
  } else if (base.contains("oscillator")) {
    models.push_back(base["oscillator"]);
  } else {
    models.push_back(json{{"type", "none"}});
  }

  if (cmd->count("--seed") > 0) base["master_seed"] = flags.seed;
  if (cmd->count("--drops") > 0) base["drops"] = flags.drops;
  if (cmd->count("--ensemble") > 0) base["ensemble"] = flags.ensemble;
  if (cmd->count("--combiner") > 0) base["combiner"] = flags.combiner;

  std::vector<cfpn::ExperimentConfig> cfgs;
  cfgs.reserve(models.size());
  for (const auto& model : models) {
    json one = base;
    one["oscillator"] = model;
    cfgs.push_back(cfpn::config_from_json(one.dump(), base_dir));
  }
  return cfgs;
}

void write_comparison_csv(const std::vector<cfpn::ResultsRecord>& records,
                          const std::filesystem::path& path) {
  cfpn::CsvTable table;
  table.header = {"model", "symbol_index", "mean_se", "q05", "q50", "q95"};
  for (const auto& record : records) {
    for (std::size_t t = 0; t < record.per_symbol.size(); ++t) {
      const auto& s = record.per_symbol[t];
      table.rows.push_back({record.model, std::to_string(t), g9(s.mean_se),
                            g9(s.q05), g9(s.q50), g9(s.q95)});
    }
  }
  cfpn::write_csv(path, table);
}

void print_deltas(const std::vector<cfpn::ResultsRecord>& records) {
  for (const auto& record : records) {
    const double se0 = record.per_symbol.front().mean_se;
    const double se_last = record.per_symbol.back().mean_se;
    const double delta_pct = se0 > 0.0 ? 100.0 * (se0 - se_last) / se0 : 0.0;
    std::cout << record.model << ": SE symbol 0 = " << g9(se0)
              << " bit/s/Hz, symbol " << record.per_symbol.size() - 1 << " = "
              << g9(se_last) << " bit/s/Hz, drop = " << g9(delta_pct) << "%\n";
    if (record.failed_drops > 0)
      std::cout << "  warning: " << record.failed_drops
                << " drops failed and were skipped\n";
  }
}

int cmd_pn_gen(const ModelFlags& model_flags, std::size_t samples,
               double rate, std::uint64_t seed, const std::string& out,
               const cfpn::SynthesisOptions& synth) {
  const cfpn::OscillatorModel model =
      model_flags.build(std::filesystem::current_path());
  cfpn::Rng rng(seed, {cfpn::kStreamPhaseNoise, 0});
  cfpn::PhaseTrace trace =
      cfpn::oscillator_trace(model, samples, rate, rng, synth);
  trace.seed = seed;
  trace.to_csv(out);
  std::cout << "model: " << cfpn::model_label(model) << "\n"
            << "samples: " << trace.samples.size() << " @ " << g9(rate)
            << " Hz\n"
            << "max |drift|: " << g9(trace.max_drift()) << " rad\n";
  if (trace.samples.size() >= 2)
    std::cout << "increment variance: " << g9(trace.increment_variance())
              << " rad^2\n";
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_pn_psd(const std::string& in, const std::string& out,
               std::size_t segments) {
  const cfpn::PhaseTrace trace = cfpn::PhaseTrace::from_csv(in);
  const cfpn::PsdTable psd = cfpn::estimate_psd(trace, segments);
  psd.to_csv(out);
  std::cout << "estimated " << psd.points().size() << " PSD points over ["
            << g9(psd.min_offset_hz()) << ", " << g9(psd.max_offset_hz())
            << "] Hz from " << trace.samples.size() << " samples\n"
            << "wrote " << out << "\n";
  return 0;
}

int cmd_sim(const SimFlags& flags, const CLI::App* cmd) {
  const std::vector<cfpn::ExperimentConfig> cfgs = build_configs(flags, cmd);
  std::filesystem::create_directories(flags.out_dir);
  std::vector<cfpn::ResultsRecord> records;
  records.reserve(cfgs.size());
  for (const auto& cfg : cfgs) {
    cfpn::ResultsRecord record = cfpn::run_experiment(cfg);
    cfpn::persist(record, cfg,
                  std::filesystem::path(flags.out_dir) /
                      sanitize(record.model));
    records.push_back(std::move(record));
  }
  write_comparison_csv(records,
                       std::filesystem::path(flags.out_dir) /
                           "comparison.csv");
  print_deltas(records);
  std::cout << "wrote " << records.size() << " model record(s) + comparison to "
            << flags.out_dir << "\n";
  return 0;
}

int cmd_compare(const SimFlags& flags, const CLI::App* cmd, bool drift_only) {
  std::vector<cfpn::ExperimentConfig> cfgs = build_configs(flags, cmd);
  std::filesystem::create_directories(flags.out_dir);

  if (drift_only) {
    // Drift traces only (fast): shared-seed paired draws per model.
    for (const auto& cfg : cfgs) {
      cfpn::Rng rng(cfg.master_seed, {cfpn::kStreamDrift, 0});
      cfpn::OscillatorModel osc = cfg.oscillator;
      if (auto* w = std::get_if<cfpn::WienerOscillator>(&osc))
        if (w->dt_ref <= 0.0) w->dt_ref = cfg.numerology.t_ofdm;
      cfpn::PhaseTrace trace = cfpn::oscillator_trace(
          osc, cfg.numerology.n_ct, cfg.numerology.symbol_rate(), rng,
          cfg.synthesis);
      const std::string label = cfpn::model_label(cfg.oscillator);
      trace.to_csv(std::filesystem::path(flags.out_dir) /
                   ("drift_" + sanitize(label) + ".csv"));
      std::cout << label << ": max |drift| over "
                << g9(cfg.numerology.t_c * 1e3)
                << " ms = " << g9(trace.max_drift()) << " rad\n";
    }
    return 0;
  }

  const cfpn::ComparisonResult result = cfpn::compare_models(cfgs);
  for (const auto& drift : result.drifts) {
    drift.trace.to_csv(std::filesystem::path(flags.out_dir) /
                       ("drift_" + sanitize(drift.model) + ".csv"));
    std::cout << drift.model << ": max |drift| = " << g9(drift.max_drift)
              << " rad\n";
  }
  for (std::size_t i = 0; i < cfgs.size(); ++i)
    cfpn::persist(result.records[i], cfgs[i],
                  std::filesystem::path(flags.out_dir) /
                      sanitize(result.records[i].model));
  write_comparison_csv(result.records,
                       std::filesystem::path(flags.out_dir) /
                           "comparison.csv");
  print_deltas(result.records);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-noise impact on cell-free massive MIMO uplink SE"};
  app.require_subcommand(1);

  // pn-gen
  auto* gen = app.add_subcommand("pn-gen", "Generate an oscillator phase trace");
  ModelFlags gen_model;
  add_model_flags(gen, &gen_model);
  std::size_t gen_samples = 14;
  double gen_rate = 14000.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "trace.csv";
  cfpn::SynthesisOptions gen_synth;
  gen->add_option("--samples", gen_samples, "Trace length")->default_val(14);
  gen->add_option("--rate", gen_rate, "Sample rate (Hz)")->default_val(14000.0);
  gen->add_option("--seed", gen_seed, "RNG seed")->default_val(1);
  gen->add_option("--out", gen_out, "Output CSV path")->default_val("trace.csv");
  gen->add_option("--fft-len", gen_synth.fft_len,
                  "Synthesis FFT length floor (power of two)");
  gen->add_option("--min-offset", gen_synth.min_offset_hz,
                  "Lowest synthesized offset (Hz)");
  gen->add_option("--max-offset", gen_synth.max_offset_hz,
                  "Highest synthesized offset (Hz; 0 = Nyquist)");

  // pn-psd
  auto* psd = app.add_subcommand("pn-psd", "Welch PSD estimate of a trace");
  std::string psd_in, psd_out = "psd.csv";
  std::size_t psd_segments = 8;
  psd->add_option("--in", psd_in, "Input trace CSV")->required();
  psd->add_option("--out", psd_out, "Output PSD CSV")->default_val("psd.csv");
  psd->add_option("--segments", psd_segments,
                  "Minimum Welch segment count (Hann, 50% overlap)")
      ->default_val(8);

  // sim
  auto* sim = app.add_subcommand(
      "sim", "Per-symbol SE experiment for each configured oscillator model");
  SimFlags sim_flags;
  add_sim_flags(sim, &sim_flags);

  // compare
  auto* cmp = app.add_subcommand(
      "compare", "Paired-model comparison (drift traces + SE records)");
  SimFlags cmp_flags;
  bool drift_only = false;
  add_sim_flags(cmp, &cmp_flags);
  cmp->add_flag("--drift-only", drift_only,
                "Skip the SE experiment; emit drift traces only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Normalize CLI11's exit codes onto the documented contract: anything
    // that is not a clean --help/--version exit is a usage error.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed())
      return cmd_pn_gen(gen_model, gen_samples, gen_rate, gen_seed, gen_out,
                        gen_synth);
    if (psd->parsed()) return cmd_pn_psd(psd_in, psd_out, psd_segments);
    if (sim->parsed()) return cmd_sim(sim_flags, sim);
    if (cmp->parsed()) return cmd_compare(cmp_flags, cmp, drift_only);
  } catch (const cfpn::IoError& ex) {
    std::cerr << "I/O error: " << ex.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
