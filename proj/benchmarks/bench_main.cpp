// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the simulator's hot paths.  The drop benchmark is the
// one that predicts wall time of a full experiment: total runtime is roughly
// drops x (time per drop).
#include <benchmark/benchmark.h>

#include <filesystem>

#include "cfpn/channel.hpp"
#include "cfpn/combining.hpp"
#include "cfpn/experiment.hpp"
#include "cfpn/network.hpp"
#include "cfpn/oscillator.hpp"
#include "cfpn/psd.hpp"
#include "cfpn/rng.hpp"
#include "cfpn/welch.hpp"

namespace {

const std::filesystem::path kDataDir = CFPN_DATA_DIR;

cfpn::PsdTable b200_table() {
  static const cfpn::PsdTable table =
      cfpn::PsdTable::from_csv(kDataDir / "devices" / "b200.csv");
  return table;
}

void BM_SynthesizePn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const cfpn::OscillatorModel model =
      cfpn::DeviceOscillator{b200_table(), "b200"};
  cfpn::SynthesisOptions options;
  options.fft_len = n;  // pin the synthesis length to the benchmark size
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfpn::Rng rng(++seed, {cfpn::kStreamPhaseNoise, 0});
    benchmark::DoNotOptimize(
        cfpn::oscillator_trace(model, 14, 14000.0, rng, options));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SynthesizePn)->Arg(1024)->Arg(4096)->Arg(16384);

void BM_EstimatePsd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const cfpn::OscillatorModel model =
      cfpn::DeviceOscillator{b200_table(), "b200"};
  cfpn::Rng rng(3, {cfpn::kStreamPhaseNoise, 0});
  const cfpn::PhaseTrace trace =
      cfpn::oscillator_trace(model, n, 14000.0, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(cfpn::estimate_psd(trace, 8));
}
BENCHMARK(BM_EstimatePsd)->Arg(1 << 14)->Arg(1 << 16);

void BM_MmseCombine(benchmark::State& state) {
  cfpn::NetworkConfig cfg;
  cfg.M = 25;
  cfg.L = 2;
  cfg.K = 8;
  cfg.area_m = 200.0;
  cfpn::Rng geo(1, {cfpn::kStreamGeometry, 0});
  const cfpn::NetworkRealization net = cfpn::drop_network(cfg, geo);
  const double p = cfg.p_w;
  const double noise = cfg.noise_variance_w();
  cfpn::Rng ch_rng(2, {cfpn::kStreamChannel, 0});
  const cfpn::ChannelRealization ch = cfpn::sample_channels(net, ch_rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cfpn::combiner(cfpn::CombinerKind::MMSE, ch.h, net, p, noise));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MmseCombine);

// One full Monte-Carlo drop at desk scale (hardware oscillator, the most
// expensive configuration): multiply by the drop count for experiment time.
void BM_ExperimentDrop(benchmark::State& state) {
  cfpn::ExperimentConfig cfg;
  cfg.network.M = 25;
  cfg.network.L = 2;
  cfg.network.K = 8;
  cfg.network.area_m = 200.0;
  cfg.drops = 1;
  cfg.ensemble = static_cast<std::size_t>(state.range(0));
  cfg.oscillator = cfpn::DeviceOscillator{b200_table(), "b200"};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.master_seed = ++seed;
    benchmark::DoNotOptimize(cfpn::run_experiment(cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExperimentDrop)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
