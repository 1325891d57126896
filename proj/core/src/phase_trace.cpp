// SPDX-License-Identifier: Apache-2.0
#include "cfpn/phase_trace.hpp"

#include <cmath>
#include <stdexcept>

#include "cfpn/csv.hpp"
#include "cfpn/errors.hpp"

namespace cfpn {

void PhaseTrace::validate() const {
  if (samples.empty())
    throw std::invalid_argument("phase trace must have >= 1 sample");
  if (!(sample_rate > 0.0))
    throw std::invalid_argument("phase trace sample rate must be > 0");
  for (double s : samples)
    if (!std::isfinite(s))
      throw std::invalid_argument("phase trace samples must be finite");
}

double PhaseTrace::max_drift() const {
  if (samples.empty()) return 0.0;
  double worst = 0.0;
  for (double s : samples)
    worst = std::max(worst, std::abs(s - samples.front()));
  return worst;
}

double PhaseTrace::increment_variance() const {
  if (samples.size() < 2)
    throw std::invalid_argument("increment variance needs >= 2 samples");
  const std::size_t n = samples.size() - 1;
  double mean = 0.0;
  for (std::size_t t = 1; t < samples.size(); ++t)
    mean += samples[t] - samples[t - 1];
  mean /= static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t t = 1; t < samples.size(); ++t) {
    const double d = samples[t] - samples[t - 1] - mean;
    acc += d * d;
  }
  // Population variance: at n = 1e5 increments the 1/n vs 1/(n-1) choice is
  // far inside the 5% calibration tolerance.
  return acc / static_cast<double>(n);
}

PhaseTrace PhaseTrace::from_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const int tcol = table.column("t_s");
  const int pcol = table.column("phase_rad");
  if (tcol < 0 || pcol < 0)
    throw std::invalid_argument("trace file " + path.string() +
                                " must have columns t_s,phase_rad");
  if (table.rows.empty())
    throw std::invalid_argument("trace file " + path.string() + " has no rows");
  PhaseTrace trace;
  trace.samples.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (static_cast<int>(row.size()) <= std::max(tcol, pcol))
      throw std::invalid_argument("short row in trace file " + path.string());
    trace.samples.push_back(parse_double(row[pcol], path.string()));
  }
  if (table.rows.size() >= 2) {
    const double t0 = parse_double(table.rows[0][tcol], path.string());
    const double t1 = parse_double(table.rows[1][tcol], path.string());
    if (!(t1 > t0))
      throw std::invalid_argument("non-increasing time axis in " +
                                  path.string());
    trace.sample_rate = 1.0 / (t1 - t0);
  } else {
    trace.sample_rate = 1.0;  // single sample: rate is unconstrained
  }
  trace.model_id = "file:" + path.filename().string();
  trace.validate();
  return trace;
}

void PhaseTrace::to_csv(const std::filesystem::path& path) const {
  validate();
  CsvTable table;
  table.header = {"t_s", "phase_rad"};
  for (std::size_t t = 0; t < samples.size(); ++t)
    table.rows.push_back(
        {format_g9(static_cast<double>(t) / sample_rate),
         format_g9(samples[t])});
  write_csv(path, table);
}

std::vector<std::complex<double>> cpe_sequence(const PhaseTrace& ue_trace,
                                               const PhaseTrace& ap_trace) {
  if (ue_trace.samples.size() != ap_trace.samples.size())
    throw std::invalid_argument("CPE sequence requires equal-length traces");
  std::vector<std::complex<double>> cpe(ue_trace.samples.size());
  cpe[0] = {1.0, 0.0};  // symbol-0 CPE is absorbed into channel estimation
  for (std::size_t t = 1; t < cpe.size(); ++t) {
    const double theta = (ue_trace.samples[t] - ue_trace.samples[0]) +
                         (ap_trace.samples[t] - ap_trace.samples[0]);
    cpe[t] = std::polar(1.0, theta);
  }
  return cpe;
}

}  // namespace cfpn
