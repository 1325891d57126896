// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cfpn/csv.hpp"
#include "cfpn/errors.hpp"
#include "cfpn/experiment.hpp"

namespace cfpn {

namespace {

using nlohmann::json;

json oscillator_to_json(const OscillatorModel& osc) {
  json j;
  if (std::holds_alternative<NoOscillator>(osc)) {
    j["type"] = "none";
  } else if (const auto* w = std::get_if<WienerOscillator>(&osc)) {
    j["type"] = "wiener";
    j["sigma2"] = w->sigma2;
    if (w->dt_ref > 0.0) j["dt_ref_s"] = w->dt_ref;
  } else {
    const auto& dev = std::get<DeviceOscillator>(osc);
    j["type"] = "device";
    j["label"] = dev.label;
    // Canonical form embeds the PSD content, so the hash tracks substance
    // rather than file names.
    json points = json::array();
    for (const auto& p : dev.psd.points())
      points.push_back({p.offset_hz, p.dbc_per_hz});
    j["points"] = points;
  }
  return j;
}

json config_to_json_obj(const ExperimentConfig& cfg) {
  json j;
  j["network"] = {
      {"m", cfg.network.M},
      {"l", cfg.network.L},
      {"k", cfg.network.K},
      {"area_m", cfg.network.area_m},
      {"fc_hz", cfg.network.fc_hz},
      {"p_w", cfg.network.p_w},
      {"noise_psd_dbm_hz", cfg.network.noise_psd_dbm_hz},
      {"bandwidth_hz", cfg.network.bandwidth_hz},
      {"pathloss",
       {{"lambda0_db", cfg.network.pathloss.lambda0_db},
        {"eta", cfg.network.pathloss.eta},
        {"d0_m", cfg.network.pathloss.d0_m},
        {"sigma_sf_db", cfg.network.pathloss.sigma_sf_db}}},
      {"correlation", cfg.network.correlation == CorrelationModel::Uncorrelated
                          ? "uncorrelated"
                          : "local_scattering"},
      {"angular_spread_deg", cfg.network.angular_spread_deg},
  };
  if (cfg.network.cluster.kind == ClusterRule::Kind::TopN)
    j["network"]["cluster"] = {{"rule", "top_n"},
                               {"top_n", cfg.network.cluster.top_n}};
  else
    j["network"]["cluster"] = {{"rule", "threshold_db"},
                               {"threshold_db", cfg.network.cluster.threshold_db}};
  j["numerology"] = {
      {"delta_f_hz", cfg.numerology.delta_f}, {"b_c_hz", cfg.numerology.b_c},
      {"t_c_s", cfg.numerology.t_c},          {"t_ofdm_s", cfg.numerology.t_ofdm},
      {"tau_p", cfg.numerology.tau_p},
  };
  j["oscillator"] = oscillator_to_json(cfg.oscillator);
  j["combiner"] = cfg.combiner == CombinerKind::MMSE ? "mmse" : "mr";
  j["drops"] = cfg.drops;
  j["ensemble"] = cfg.ensemble;
  j["master_seed"] = cfg.master_seed;
  j["synthesis"] = {
      {"fft_len", cfg.synthesis.fft_len},
      {"min_offset_hz", cfg.synthesis.min_offset_hz},
      {"max_offset_hz", cfg.synthesis.max_offset_hz},
  };
  j["wiener_sigma2_is_link_total"] = cfg.wiener_sigma2_is_link_total;
  return j;
}

// Collects human-readable problems instead of stopping at the first one.
struct ErrorList {
  std::vector<std::string> errors;
  void add(const std::string& message) { errors.push_back(message); }
  void raise_if_any() const {
    if (errors.empty()) return;
    std::string joined = "invalid config:";
    for (const auto& e : errors) joined += "\n  - " + e;
    throw std::invalid_argument(joined);
  }
};

template <typename T>
T get_or(const json& j, const char* key, T fallback, ErrorList* errs) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    errs->add(std::string("field '") + key + "' has the wrong type");
    return fallback;
  }
}

PsdTable load_psd_checked(const std::filesystem::path& path, ErrorList* errs) {
  try {
    return PsdTable::from_csv(path);
  } catch (const std::exception& ex) {
    errs->add(std::string("PSD file ") + path.string() + ": " + ex.what());
    return PsdTable({{1.0, -100.0}, {10.0, -100.0}});  // placeholder
  }
}

OscillatorModel oscillator_from_json(const json& j,
                                     const std::filesystem::path& base_dir,
                                     ErrorList* errs) {
  const std::string type = get_or<std::string>(j, "type", "none", errs);
  if (type == "none") return NoOscillator{};
  if (type == "wiener") {
    WienerOscillator w;
    w.sigma2 = get_or<double>(j, "sigma2", 0.23, errs);
    w.dt_ref = get_or<double>(j, "dt_ref_s", 0.0, errs);
    if (!(w.sigma2 >= 0.0)) errs->add("wiener sigma2 must be >= 0");
    return w;
  }
  if (type == "device") {
    const std::string label = get_or<std::string>(j, "label", "", errs);
    // PsdTable has no empty state; this stand-in is only ever returned
    // alongside recorded errors, so it never reaches a simulation.
    PsdTable table({{1.0, -100.0}, {10.0, -100.0}});
    if (j.contains("points")) {
      std::vector<PsdPoint> points;
      try {
        for (const auto& row : j.at("points"))
          points.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
        table = PsdTable(std::move(points));
      } catch (const std::exception& ex) {
        errs->add(std::string("device points: ") + ex.what());
      }
    } else if (j.contains("psd")) {
      table = load_psd_checked(
          base_dir / get_or<std::string>(j, "psd", "", errs), errs);
    } else if (j.contains("xo") && j.contains("pll_vco")) {
      HardwareLoParams hw{
          load_psd_checked(base_dir / get_or<std::string>(j, "xo", "", errs),
                           errs),
          load_psd_checked(
              base_dir / get_or<std::string>(j, "pll_vco", "", errs), errs),
          get_or<double>(j, "f_xo_hz", 0.0, errs),
          get_or<double>(j, "f_pll_hz", 0.0, errs),
          get_or<double>(j, "f_c_hz", 0.0, errs)};
      try {
        table = tabulate_composite_lo(hw);
      } catch (const std::exception& ex) {
        errs->add(std::string("composite LO: ") + ex.what());
      }
    } else {
      errs->add("device oscillator needs 'points', 'psd', or 'xo'+'pll_vco'");
    }
    return DeviceOscillator{std::move(table), label};
  }
  errs->add("unknown oscillator type '" + type + "'");
  return NoOscillator{};
}

json results_to_json(const ResultsRecord& results,
                     const ExperimentConfig& cfg) {
  json j;
  j["model"] = results.model;
  j["config"] = config_to_json_obj(cfg);
  j["config_hash"] = results.config_hash;
  j["master_seed"] = results.master_seed;
  j["provenance"] = results.provenance;
  j["failed_drops"] = results.failed_drops;
  json stats = json::array();
  for (std::size_t t = 0; t < results.per_symbol.size(); ++t) {
    const auto& s = results.per_symbol[t];
    stats.push_back({{"symbol_index", t},
                     {"mean_se", s.mean_se},
                     {"q05", s.q05},
                     {"q50", s.q50},
                     {"q95", s.q95}});
  }
  j["per_symbol"] = stats;
  return j;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char byte : data) {
    hash ^= byte;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
  return config_to_json_obj(cfg).dump(2);
}

ExperimentConfig config_from_json(const std::string& text,
                                  const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                ex.what());
  }
  ErrorList errs;
  ExperimentConfig cfg;
  if (j.contains("network")) {
    const json& n = j["network"];
    cfg.network.M = get_or<std::size_t>(n, "m", cfg.network.M, &errs);
    cfg.network.L = get_or<std::size_t>(n, "l", cfg.network.L, &errs);
    cfg.network.K = get_or<std::size_t>(n, "k", cfg.network.K, &errs);
    cfg.network.area_m = get_or<double>(n, "area_m", cfg.network.area_m, &errs);
    cfg.network.fc_hz = get_or<double>(n, "fc_hz", cfg.network.fc_hz, &errs);
    cfg.network.p_w = get_or<double>(n, "p_w", cfg.network.p_w, &errs);
    cfg.network.noise_psd_dbm_hz = get_or<double>(
        n, "noise_psd_dbm_hz", cfg.network.noise_psd_dbm_hz, &errs);
    cfg.network.bandwidth_hz =
        get_or<double>(n, "bandwidth_hz", cfg.network.bandwidth_hz, &errs);
    if (n.contains("pathloss")) {
      const json& p = n["pathloss"];
      cfg.network.pathloss.lambda0_db = get_or<double>(
          p, "lambda0_db", cfg.network.pathloss.lambda0_db, &errs);
      cfg.network.pathloss.eta =
          get_or<double>(p, "eta", cfg.network.pathloss.eta, &errs);
      cfg.network.pathloss.d0_m =
          get_or<double>(p, "d0_m", cfg.network.pathloss.d0_m, &errs);
      cfg.network.pathloss.sigma_sf_db = get_or<double>(
          p, "sigma_sf_db", cfg.network.pathloss.sigma_sf_db, &errs);
    }
    if (n.contains("cluster")) {
      const json& c = n["cluster"];
      const std::string rule = get_or<std::string>(c, "rule", "top_n", &errs);
      if (rule == "top_n") {
        cfg.network.cluster.kind = ClusterRule::Kind::TopN;
        cfg.network.cluster.top_n =
            get_or<std::size_t>(c, "top_n", cfg.network.cluster.top_n, &errs);
      } else if (rule == "threshold_db") {
        cfg.network.cluster.kind = ClusterRule::Kind::ThresholdDb;
        cfg.network.cluster.threshold_db = get_or<double>(
            c, "threshold_db", cfg.network.cluster.threshold_db, &errs);
      } else {
        errs.add("unknown cluster rule '" + rule + "'");
      }
    }
    const std::string corr =
        get_or<std::string>(n, "correlation", "uncorrelated", &errs);
    if (corr == "uncorrelated") {
      cfg.network.correlation = CorrelationModel::Uncorrelated;
    } else if (corr == "local_scattering") {
      cfg.network.correlation = CorrelationModel::LocalScattering;
    } else {
      errs.add("unknown correlation model '" + corr + "'");
    }
    cfg.network.angular_spread_deg = get_or<double>(
        n, "angular_spread_deg", cfg.network.angular_spread_deg, &errs);
  }
  if (j.contains("numerology")) {
    const json& n = j["numerology"];
    const double delta_f =
        get_or<double>(n, "delta_f_hz", cfg.numerology.delta_f, &errs);
    const double b_c = get_or<double>(n, "b_c_hz", cfg.numerology.b_c, &errs);
    const double t_c = get_or<double>(n, "t_c_s", cfg.numerology.t_c, &errs);
    const double t_ofdm =
        get_or<double>(n, "t_ofdm_s", cfg.numerology.t_ofdm, &errs);
    const std::size_t tau_p =
        get_or<std::size_t>(n, "tau_p", cfg.numerology.tau_p, &errs);
    try {
      cfg.numerology =
          Numerology::from_physical(delta_f, b_c, t_c, t_ofdm, tau_p);
    } catch (const std::exception& ex) {
      errs.add(std::string("numerology: ") + ex.what());
    }
  }
  if (j.contains("oscillator"))
    cfg.oscillator = oscillator_from_json(j["oscillator"], base_dir, &errs);
  const std::string comb = get_or<std::string>(j, "combiner", "mmse", &errs);
  if (comb == "mmse") {
    cfg.combiner = CombinerKind::MMSE;
  } else if (comb == "mr") {
    cfg.combiner = CombinerKind::MR;
  } else {
    errs.add("unknown combiner '" + comb + "'");
  }
  cfg.drops = get_or<std::size_t>(j, "drops", cfg.drops, &errs);
  cfg.ensemble = get_or<std::size_t>(j, "ensemble", cfg.ensemble, &errs);
  cfg.master_seed = get_or<std::uint64_t>(j, "master_seed", cfg.master_seed, &errs);
  if (j.contains("synthesis")) {
    const json& s = j["synthesis"];
    cfg.synthesis.fft_len =
        get_or<std::size_t>(s, "fft_len", cfg.synthesis.fft_len, &errs);
    cfg.synthesis.min_offset_hz = get_or<double>(
        s, "min_offset_hz", cfg.synthesis.min_offset_hz, &errs);
    cfg.synthesis.max_offset_hz = get_or<double>(
        s, "max_offset_hz", cfg.synthesis.max_offset_hz, &errs);
  }
  cfg.wiener_sigma2_is_link_total = get_or<bool>(
      j, "wiener_sigma2_is_link_total", cfg.wiener_sigma2_is_link_total, &errs);

  try {
    cfg.validate();
  } catch (const std::exception& ex) {
    errs.add(ex.what());
  }
  errs.raise_if_any();
  return cfg;
}

std::string config_hash(const ExperimentConfig& cfg) {
  return hex64(fnv1a(config_to_json_obj(cfg).dump()));
}

std::string config_hash_without_oscillator(const ExperimentConfig& cfg) {
  json j = config_to_json_obj(cfg);
  j.erase("oscillator");
  return hex64(fnv1a(j.dump()));
}

void persist(const ResultsRecord& results, const ExperimentConfig& cfg,
             const std::filesystem::path& base) {
  CsvTable table;
  table.header = {"model", "symbol_index", "mean_se", "q05", "q50", "q95"};
  for (std::size_t t = 0; t < results.per_symbol.size(); ++t) {
    const auto& s = results.per_symbol[t];
    table.rows.push_back({results.model, std::to_string(t),
                          format_g9(s.mean_se), format_g9(s.q05),
                          format_g9(s.q50), format_g9(s.q95)});
  }
  std::filesystem::path csv_path = base;
  csv_path += ".csv";
  write_csv(csv_path, table);

  std::filesystem::path json_path = base;
  json_path += ".json";
  std::ofstream out(json_path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + json_path.string());
  out << results_to_json(results, cfg).dump(2) << "\n";
  if (!out) throw IoError("write failed for " + json_path.string());
}

ResultsRecord load_results(const std::filesystem::path& base) {
  std::filesystem::path json_path = base;
  json_path += ".json";
  std::ifstream in(json_path);
  if (!in) throw IoError("cannot open " + json_path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& ex) {
    throw std::invalid_argument("results sidecar " + json_path.string() +
                                " is not valid JSON: " + ex.what());
  }
  ResultsRecord record;
  try {
    record.model = j.at("model").get<std::string>();
    record.config_hash = j.at("config_hash").get<std::string>();
    record.master_seed = j.at("master_seed").get<std::uint64_t>();
    record.provenance = j.at("provenance").get<std::string>();
    record.failed_drops = j.at("failed_drops").get<std::size_t>();
    for (const auto& s : j.at("per_symbol"))
      record.per_symbol.push_back({s.at("mean_se").get<double>(),
                                   s.at("q05").get<double>(),
                                   s.at("q50").get<double>(),
                                   s.at("q95").get<double>()});
  } catch (const json::exception& ex) {
    throw std::invalid_argument("results sidecar " + json_path.string() +
                                " is missing fields: " + ex.what());
  }
  return record;
}

}  // namespace cfpn
