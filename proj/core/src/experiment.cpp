// SPDX-License-Identifier: Apache-2.0
#include "cfpn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "cfpn/channel.hpp"
#include "cfpn/sinr.hpp"

namespace cfpn {

namespace {

// Oscillator model as actually sampled: Wiener sigma2 is referenced to one
// OFDM symbol (so full-rate draws rescale correctly) and optionally split
// across the two oscillators of a link.
OscillatorModel effective_oscillator(const ExperimentConfig& cfg) {
  OscillatorModel osc = cfg.oscillator;
  if (auto* w = std::get_if<WienerOscillator>(&osc)) {
    if (w->dt_ref <= 0.0) w->dt_ref = cfg.numerology.t_ofdm;
    if (cfg.wiener_sigma2_is_link_total) w->sigma2 *= 0.5;
  }
  return osc;
}

// Quantile with linear interpolation on the sorted sample.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted[0];
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct DropResult {
  // se(k, t): per-UE SE at each symbol index for this drop.
  Eigen::MatrixXd se;
  bool failed = false;
  std::string error;
};

DropResult run_drop(const ExperimentConfig& cfg, const OscillatorModel& osc,
                    std::size_t drop) {
  const std::size_t T = cfg.numerology.n_ct;
  const std::size_t K = cfg.network.K;
  const std::size_t M = cfg.network.M;
  const auto L = static_cast<Eigen::Index>(cfg.network.L);
  const double fs = cfg.numerology.symbol_rate();
  const double p_w = cfg.network.p_w;
  const double noise_w = cfg.network.noise_variance_w();
  const bool no_pn = std::holds_alternative<NoOscillator>(osc);

  DropResult result;
  Rng geom_rng(cfg.master_seed, {kStreamGeometry, drop});
  const NetworkRealization net = drop_network(cfg.network, geom_rng);
  const CombinerContext context(net, p_w, noise_w);

  // One accumulator per (UE, symbol index).
  std::vector<SinrAccumulator> acc(K * T, SinrAccumulator(K));

  Eigen::MatrixXd ue_phase(K, T);
  Eigen::MatrixXd ap_phase(M, T);
  std::vector<std::complex<double>> c(K);
  std::vector<std::complex<double>> u(M);  // per-AP rotations at symbol t
  std::vector<std::complex<double>> w(K);  // per-UE rotations at symbol t
  Eigen::MatrixXcd partials;               // (serving slot, UE) inner products

  for (std::size_t e = 0; e < cfg.ensemble; ++e) {
    Rng ch_rng(cfg.master_seed, {kStreamChannel, drop, e});
    const ChannelRealization ch = sample_channels(net, ch_rng);

    if (!no_pn) {
      // Oscillator index space: UEs first, then APs; each oscillator owns an
      // independent substream so the draw count of one never shifts another.
      for (std::size_t k = 0; k < K; ++k) {
        Rng pn_rng(cfg.master_seed, {kStreamPhaseNoise, drop, e, k});
        const PhaseTrace trace =
            oscillator_trace(osc, T, fs, pn_rng, cfg.synthesis);
        for (std::size_t t = 0; t < T; ++t)
          ue_phase(static_cast<Eigen::Index>(k),
                   static_cast<Eigen::Index>(t)) = trace.samples[t];
      }
      for (std::size_t m = 0; m < M; ++m) {
        Rng pn_rng(cfg.master_seed, {kStreamPhaseNoise, drop, e, K + m});
        const PhaseTrace trace =
            oscillator_trace(osc, T, fs, pn_rng, cfg.synthesis);
        for (std::size_t t = 0; t < T; ++t)
          ap_phase(static_cast<Eigen::Index>(m),
                   static_cast<Eigen::Index>(t)) = trace.samples[t];
      }
    }

    const Eigen::MatrixXcd v = context.combine(cfg.combiner, ch.h);

    for (std::size_t k = 0; k < K; ++k) {
      const auto& aps = context.active_aps(k);
      const Eigen::VectorXcd vk = v.col(static_cast<Eigen::Index>(k));
      double vnorm2 = 0.0;
      for (std::size_t m : aps)
        vnorm2 +=
            vk.segment(static_cast<Eigen::Index>(m) * L, L).squaredNorm();

      // Per-AP partial inner products a(i, l) = v_k^{(m_i)H} h_l^{(m_i)};
      // the symbol index only rotates them, so compute once per member.
      partials.resize(static_cast<Eigen::Index>(aps.size()),
                      static_cast<Eigen::Index>(K));
      for (std::size_t i = 0; i < aps.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(aps[i]) * L;
        for (std::size_t l = 0; l < K; ++l)
          partials(static_cast<Eigen::Index>(i),
                   static_cast<Eigen::Index>(l)) =
              vk.segment(row, L).dot(
                  ch.h.col(static_cast<Eigen::Index>(l)).segment(row, L));
      }

      for (std::size_t t = 0; t < T; ++t) {
        if (no_pn || t == 0) {
          // Theta^0 = I (and the no-PN model keeps it for all t).
          for (std::size_t l = 0; l < K; ++l) {
            std::complex<double> s(0.0, 0.0);
            for (std::size_t i = 0; i < aps.size(); ++i)
              s += partials(static_cast<Eigen::Index>(i),
                            static_cast<Eigen::Index>(l));
            c[l] = s;
          }
        } else {
          const auto ti = static_cast<Eigen::Index>(t);
          for (std::size_t m : aps)
            u[m] = std::polar(1.0, ap_phase(static_cast<Eigen::Index>(m), ti) -
                                       ap_phase(static_cast<Eigen::Index>(m), 0));
          for (std::size_t l = 0; l < K; ++l)
            w[l] = std::polar(1.0, ue_phase(static_cast<Eigen::Index>(l), ti) -
                                       ue_phase(static_cast<Eigen::Index>(l), 0));
          for (std::size_t l = 0; l < K; ++l) {
            std::complex<double> s(0.0, 0.0);
            for (std::size_t i = 0; i < aps.size(); ++i)
              s += u[aps[i]] * partials(static_cast<Eigen::Index>(i),
                                        static_cast<Eigen::Index>(l));
            c[l] = w[l] * s;
          }
        }
        acc[k * T + t].add(c.data(), K, k, vnorm2);
      }
    }
  }

  result.se.resize(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(T));
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t t = 0; t < T; ++t)
      result.se(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) =
          se_per_symbol(acc[k * T + t].sinr(k, p_w, noise_w));
  return result;
}

}  // namespace

void ExperimentConfig::validate() const {
  network.validate();
  numerology.validate();
  if (drops < 1) throw std::invalid_argument("drops must be >= 1");
  if (ensemble < 2) throw std::invalid_argument("ensemble must be >= 2");
  if (synthesis.fft_len < 2)
    throw std::invalid_argument("synthesis fft_len must be >= 2");
  if (!(synthesis.min_offset_hz >= 0.0))
    throw std::invalid_argument("synthesis min offset must be >= 0");
  if (const auto* w = std::get_if<WienerOscillator>(&oscillator)) {
    if (!(w->sigma2 >= 0.0))
      throw std::invalid_argument("Wiener sigma2 must be >= 0");
  }
}

ResultsRecord run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const OscillatorModel osc = effective_oscillator(cfg);
  const std::size_t T = cfg.numerology.n_ct;
  const std::size_t K = cfg.network.K;

  // Drops are independent; each consumes only substreams keyed on its own
  // index, so any execution order (and thread count) yields the same slots.
  std::vector<DropResult> slots(cfg.drops);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t d = next.fetch_add(1);
      if (d >= cfg.drops) return;
      try {
        slots[d] = run_drop(cfg, osc, d);
      } catch (const std::exception& ex) {
        slots[d].failed = true;
        slots[d].error = ex.what();
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads = std::min<std::size_t>(hw, cfg.drops);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ResultsRecord record;
  record.model = model_label(cfg.oscillator);
  record.master_seed = cfg.master_seed;
  record.config_hash = config_hash(cfg);
  record.provenance = "cfpn 0.1.0";
  record.per_symbol.resize(T);

  // Deterministic reduction in (drop, UE) order; failed drops are reported
  // via the record and skipped in the pooling.
  std::vector<double> pool_t;
  pool_t.reserve(cfg.drops * K);
  for (std::size_t t = 0; t < T; ++t) {
    pool_t.clear();
    for (std::size_t d = 0; d < cfg.drops; ++d) {
      if (slots[d].failed) continue;
      for (std::size_t k = 0; k < K; ++k)
        pool_t.push_back(slots[d].se(static_cast<Eigen::Index>(k),
                                     static_cast<Eigen::Index>(t)));
    }
    if (pool_t.empty())
      throw std::invalid_argument("all drops failed: " +
                                  (cfg.drops > 0 ? slots[0].error : ""));
    double mean = 0.0;
    for (double v : pool_t) mean += v;
    mean /= static_cast<double>(pool_t.size());
    std::vector<double> sorted = pool_t;
    std::sort(sorted.begin(), sorted.end());
    record.per_symbol[t] = {mean, quantile(sorted, 0.05),
                            quantile(sorted, 0.50), quantile(sorted, 0.95)};
  }
  for (const auto& slot : slots)
    if (slot.failed) ++record.failed_drops;
  return record;
}

ComparisonResult compare_models(const std::vector<ExperimentConfig>& cfgs) {
  if (cfgs.size() < 2)
    throw std::invalid_argument("model comparison needs >= 2 configs");
  const std::string reference = config_hash_without_oscillator(cfgs.front());
  for (const auto& cfg : cfgs)
    if (config_hash_without_oscillator(cfg) != reference)
      throw std::invalid_argument(
          "comparison configs must differ only in the oscillator model");

  ComparisonResult result;
  result.records.reserve(cfgs.size());
  result.drifts.reserve(cfgs.size());
  for (const auto& cfg : cfgs) {
    result.records.push_back(run_experiment(cfg));
    // Fig.-3-style drift trace: one shared-seed symbol-rate trace per model
    // over the TTI (same substream key for every model = paired draw).
    Rng drift_rng(cfg.master_seed, {kStreamDrift, 0});
    DriftSummary drift;
    drift.model = model_label(cfg.oscillator);
    drift.trace = oscillator_trace(effective_oscillator(cfg),
                                   cfg.numerology.n_ct,
                                   cfg.numerology.symbol_rate(), drift_rng,
                                   cfg.synthesis);
    drift.max_drift = drift.trace.max_drift();
    result.drifts.push_back(std::move(drift));
  }
  return result;
}

}  // namespace cfpn
