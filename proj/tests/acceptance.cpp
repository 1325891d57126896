// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite for the phase-noise cell-free simulator.  Each criterion
// prints exactly one PASS/FAIL line; the process exits nonzero if any fails.
//
//   1. PSD synthesis fidelity for the three bundled device profiles
//   2. Wiener innovation-variance calibration
//   3. Free-running vs hardware drift separation over one coherence time
//   4. Per-symbol SE degradation at desk scale (free-running degrades,
//      hardware and clean baselines stay flat)
//   5. ICI negligibility of the hardware model at full rate
//   6. Exactness suite (Parseval, symbol-0 equality, frequency- vs
//      time-domain assembly, MMSE vs MR)
//   7. Byte-level determinism of the sim CLI
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cfpn/experiment.hpp"
#include "cfpn/ofdm.hpp"
#include "cfpn/oscillator.hpp"
#include "cfpn/phase_trace.hpp"
#include "cfpn/psd.hpp"
#include "cfpn/rng.hpp"
#include "cfpn/synthesis.hpp"
#include "cfpn/welch.hpp"
#include "cfpn/wiener.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kDataDir = CFPN_DATA_DIR;
const fs::path kCli = CFPN_CLI_PATH;

struct Outcome {
  bool pass = false;
  std::string detail;  // shown in parentheses after the summary
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

cfpn::PsdTable device_table(const std::string& name) {
  return cfpn::PsdTable::from_csv(kDataDir / "devices" / (name + ".csv"));
}

cfpn::OscillatorModel device_model(const std::string& name) {
  return cfpn::DeviceOscillator{device_table(name), name};
}

// --- criterion 1: synthesized trace PSD matches the device profile --------

Outcome check_synthesis_fidelity() {
  const std::vector<std::string> devices = {"b200", "usrp2954r",
                                            "instrumental"};
  double worst = 0.0;
  std::string worst_device;
  for (std::size_t i = 0; i < devices.size(); ++i) {
    const cfpn::PsdTable table = device_table(devices[i]);
    const cfpn::OscillatorModel model = device_model(devices[i]);
    cfpn::Rng rng(101, {cfpn::kStreamPhaseNoise, i});
    const cfpn::PhaseTrace trace =
        cfpn::oscillator_trace(model, 1u << 16, 14000.0, rng);
    const cfpn::PsdTable estimate = cfpn::estimate_psd(trace, 8);
    const double dev = cfpn::psd_max_abs_deviation_db(
        estimate, cfpn::psd_from_table(table), 10.0, 7000.0, 12);
    if (dev > worst) {
      worst = dev;
      worst_device = devices[i];
    }
  }
  return {worst <= 3.0, "worst band deviation " + fmt(worst) + " dB (" +
                            worst_device + "), limit 3 dB"};
}

// --- criterion 2: Wiener calibration --------------------------------------

Outcome check_wiener_calibration() {
  cfpn::Rng rng(7, {cfpn::kStreamPhaseNoise, 0});
  const cfpn::PhaseTrace trace = cfpn::wiener_trace(
      cfpn::WienerParams::from_sigma2(0.23), 100001, 14000.0, rng);
  const double var = trace.increment_variance();
  const double rel = std::abs(var - 0.23) / 0.23;
  return {rel <= 0.05, "increment variance " + fmt(var) + " rad^2, " +
                           fmt(100.0 * rel) + "% from 0.23"};
}

// --- criterion 3: drift separation ----------------------------------------

Outcome check_drift_separation() {
  const cfpn::OscillatorModel wiener = cfpn::WienerOscillator{0.23, 0.0};
  const cfpn::OscillatorModel b200 = device_model("b200");
  const auto max_drift = [](const cfpn::OscillatorModel& model,
                            std::uint64_t seed) {
    cfpn::Rng rng(seed, {cfpn::kStreamDrift, 0});
    return cfpn::oscillator_trace(model, 14, 14000.0, rng).max_drift();
  };
  std::size_t wins = 0;
  const std::size_t trials = 1000;
  for (std::uint64_t s = 0; s < trials; ++s) {
    if (max_drift(wiener, s) >= 10.0 * max_drift(b200, s)) ++wins;
  }
  return {wins >= 900, std::to_string(wins) + "/1000 paired seeds with >= 10x "
                                              "free-running drift, need 900"};
}

// --- criterion 4: per-symbol SE degradation at desk scale ------------------

cfpn::ExperimentConfig desk_config() {
  cfpn::ExperimentConfig cfg;
  cfg.network.M = 25;
  cfg.network.L = 2;
  cfg.network.K = 8;
  cfg.network.area_m = 200.0;
  cfg.combiner = cfpn::CombinerKind::MMSE;
  cfg.drops = 50;
  cfg.ensemble = 200;
  cfg.master_seed = 1;
  return cfg;
}

Outcome check_se_degradation() {
  cfpn::ExperimentConfig cfg = desk_config();
  const auto run = [&cfg](const cfpn::OscillatorModel& model) {
    cfpn::ExperimentConfig c = cfg;
    c.oscillator = model;
    return cfpn::run_experiment(c);
  };
  const cfpn::ResultsRecord none = run(cfpn::NoOscillator{});
  const cfpn::ResultsRecord wiener = run(cfpn::WienerOscillator{0.23, 0.0});
  const cfpn::ResultsRecord b200 = run(device_model("b200"));

  const auto rel_drop = [](const cfpn::ResultsRecord& r) {
    const double se0 = r.per_symbol.front().mean_se;
    return (se0 - r.per_symbol.back().mean_se) / se0;
  };
  double none_flat = 0.0;
  for (const auto& s : none.per_symbol)
    none_flat = std::max(none_flat,
                         std::abs(s.mean_se - none.per_symbol[0].mean_se) /
                             none.per_symbol[0].mean_se);

  const double wiener_drop = rel_drop(wiener);
  const double b200_drop = std::abs(rel_drop(b200));
  const bool pass =
      wiener_drop >= 0.05 && b200_drop <= 0.01 && none_flat <= 0.01;
  return {pass, "free-running -" + fmt(100.0 * wiener_drop) +
                    "% (need >= 5%), hardware " + fmt(100.0 * b200_drop) +
                    "% (limit 1%), clean baseline spread " +
                    fmt(100.0 * none_flat) + "% (limit 1%)"};
}

// --- criterion 5: ICI negligibility ---------------------------------------

Outcome check_ici_negligibility() {
  const cfpn::OscillatorModel b200 = device_model("b200");
  const double fs = 12.0 * 15000.0;  // full-rate sampling of one OFDM symbol
  std::size_t ok = 0;
  double worst = 0.0;
  const std::size_t trials = 1000;
  for (std::uint64_t s = 0; s < trials; ++s) {
    cfpn::Rng rng(2000 + s, {cfpn::kStreamPhaseNoise, s});
    const cfpn::PhaseTrace trace = cfpn::oscillator_trace(b200, 12, fs, rng);
    const double ici = cfpn::ici_power(trace.samples).ici_power;
    worst = std::max(worst, ici);
    if (ici < 0.01) ++ok;
  }
  return {ok >= 990, std::to_string(ok) +
                         "/1000 trials below 1% ICI power (worst " +
                         fmt(worst) + "), need 990"};
}

// --- criterion 6: exactness suite -----------------------------------------

Outcome check_exactness() {
  std::vector<std::string> failures;

  // (a) Parseval: the PN coefficients of any phase vector carry unit power.
  double worst_parseval = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    cfpn::Rng rng(300 + s);
    std::vector<double> theta(12);
    for (double& v : theta) v = rng.uniform(-3.0, 3.0);
    const cfpn::CVec p = cfpn::pn_freq_coeffs(theta);
    double sum = 0.0;
    for (const auto& c : p) sum += std::norm(c);
    worst_parseval = std::max(worst_parseval, std::abs(sum - 1.0));
  }
  if (worst_parseval > 1e-9)
    failures.push_back("Parseval off by " + fmt(worst_parseval));

  // (b) Shared seeds: symbol-0 SE identical across oscillator models.
  cfpn::ExperimentConfig tiny;
  tiny.network.M = 4;
  tiny.network.L = 2;
  tiny.network.K = 3;
  tiny.network.area_m = 100.0;
  tiny.network.cluster.top_n = 2;
  tiny.drops = 2;
  tiny.ensemble = 8;
  tiny.master_seed = 5;
  const auto run_tiny = [&tiny](const cfpn::OscillatorModel& model) {
    cfpn::ExperimentConfig c = tiny;
    c.oscillator = model;
    return cfpn::run_experiment(c).per_symbol[0].mean_se;
  };
  const double se_none = run_tiny(cfpn::NoOscillator{});
  const double se_wiener = run_tiny(cfpn::WienerOscillator{0.23, 0.0});
  const double se_b200 = run_tiny(device_model("b200"));
  const double worst_symbol0 = std::max(std::abs(se_wiener - se_none),
                                        std::abs(se_b200 - se_none));
  if (worst_symbol0 > 1e-9)
    failures.push_back("symbol-0 SE differs by " + fmt(worst_symbol0));

  // (c) Frequency-domain assembly equals the time-domain pipeline.
  double worst_assembly = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    cfpn::Rng rng(400 + s);
    const std::size_t n = 12;
    cfpn::CVec x(n), h(n), z(n);
    std::vector<double> theta(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.circular_gaussian();
      h[i] = rng.circular_gaussian();
      z[i] = 0.1 * rng.circular_gaussian();
      theta[i] = rng.uniform(-0.5, 0.5);
    }
    const cfpn::CVec p = cfpn::pn_freq_coeffs(theta);
    const cfpn::CVec freq = cfpn::received_with_ici(x, h, p, z);
    cfpn::CVec hx(n);
    for (std::size_t i = 0; i < n; ++i) hx[i] = h[i] * x[i];
    cfpn::CVec time = cfpn::idft(hx);
    for (std::size_t i = 0; i < n; ++i)
      time[i] *= std::polar(1.0, theta[i]);
    const cfpn::CVec direct = cfpn::dft(time);
    for (std::size_t i = 0; i < n; ++i)
      worst_assembly =
          std::max(worst_assembly, std::abs(freq[i] - (direct[i] + z[i])));
  }
  if (worst_assembly > 1e-9)
    failures.push_back("assembly paths differ by " + fmt(worst_assembly));

  // (d) MMSE never loses to MR beyond Monte-Carlo tolerance at desk scale.
  cfpn::ExperimentConfig desk = desk_config();
  desk.drops = 20;
  desk.ensemble = 50;
  desk.combiner = cfpn::CombinerKind::MMSE;
  const double se_mmse = cfpn::run_experiment(desk).per_symbol[0].mean_se;
  desk.combiner = cfpn::CombinerKind::MR;
  const double se_mr = cfpn::run_experiment(desk).per_symbol[0].mean_se;
  if (!(se_mmse >= 0.99 * se_mr))
    failures.push_back("MMSE SE " + fmt(se_mmse) + " < 0.99 * MR SE " +
                       fmt(se_mr));

  if (!failures.empty()) {
    std::string joined = failures[0];
    for (std::size_t i = 1; i < failures.size(); ++i)
      joined += "; " + failures[i];
    return {false, joined};
  }
  return {true, "Parseval " + fmt(worst_parseval) + ", symbol-0 delta " +
                    fmt(worst_symbol0) + ", assembly delta " +
                    fmt(worst_assembly) + ", MMSE/MR SE " + fmt(se_mmse) +
                    "/" + fmt(se_mr)};
}

// --- criterion 7: CLI determinism -----------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome check_cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "cfpn_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "cfg.json") << R"({
    "network": {"m": 6, "l": 2, "k": 4, "area_m": 150.0,
                "cluster": {"rule": "top_n", "top_n": 3}},
    "models": [{"type": "none"}, {"type": "wiener", "sigma2": 0.23}],
    "drops": 8,
    "ensemble": 30,
    "master_seed": 17
  })";
  const auto run = [&dir](const std::string& out) {
    const std::string cmd = "cd '" + dir.string() + "' && '" + kCli.string() +
                            "' sim --config cfg.json --out " + out +
                            " > " + out + ".log 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  if (run("r1") != 0 || run("r2") != 0) {
    return {false, "sim invocation failed, see " + dir.string()};
  }
  std::size_t identical = 0;
  const std::vector<std::string> names = {"none.csv", "wiener.csv",
                                          "comparison.csv"};
  for (const auto& name : names) {
    const std::string a = slurp(dir / "r1" / name);
    const std::string b = slurp(dir / "r2" / name);
    if (!a.empty() && a == b) ++identical;
  }
  fs::remove_all(dir);
  return {identical == names.size(),
          std::to_string(identical) + "/" + std::to_string(names.size()) +
              " output files byte-identical across runs"};
}

struct Criterion {
  int id;
  std::string summary;
  std::function<Outcome()> check;
  double time_limit_s;  // 0 = unconstrained
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "device PSD synthesis fidelity", check_synthesis_fidelity, 10.0},
      {2, "Wiener innovation calibration", check_wiener_calibration, 1.0},
      {3, "free-running vs hardware drift separation", check_drift_separation,
       30.0},
      {4, "per-symbol SE degradation at desk scale", check_se_degradation,
       0.0},
      {5, "hardware-model ICI negligibility", check_ici_negligibility, 30.0},
      {6, "exactness suite", check_exactness, 0.0},
      {7, "sim CLI byte determinism", check_cli_determinism, 0.0},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = criterion.check();
    } catch (const std::exception& ex) {
      outcome = {false, std::string("exception: ") + ex.what()};
    }
    const double elapsed = seconds_since(start);
    if (criterion.time_limit_s > 0.0 && elapsed > criterion.time_limit_s) {
      outcome.pass = false;
      outcome.detail += "; over time limit " + fmt(criterion.time_limit_s) +
                        " s";
    }
    if (!outcome.pass) ++failures;
    std::printf("%s criterion %d: %s (%s; %.1f s)\n",
                outcome.pass ? "PASS" : "FAIL", criterion.id,
                criterion.summary.c_str(), outcome.detail.c_str(), elapsed);
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
