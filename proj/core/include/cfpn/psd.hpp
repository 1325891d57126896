// SPDX-License-Identifier: Apache-2.0
//
// Phase-noise PSD tables and the composite hardware LO model.
//
// A PsdTable holds a single-sideband phase-noise profile L(f) sampled at a
// handful of frequency offsets, in dBc/Hz.  Between samples the profile is
// interpolated linearly in (log10 f, dB) space, the usual straight-segments-
// on-a-Bode-plot reading of datasheet plots; outside the tabulated range the
// boundary level is held constant.
#pragma once

#include <filesystem>
#include <vector>

namespace cfpn {

struct PsdPoint {
  double offset_hz = 0.0;   // frequency offset from the carrier, Hz (> 0)
  double dbc_per_hz = 0.0;  // SSB phase-noise level L(f), dBc/Hz
};

class PsdTable {
 public:
  // Validates and stores the profile.  Throws std::invalid_argument unless
  // there are >= 2 points, offsets are strictly increasing and positive, and
  // all levels are finite.
  explicit PsdTable(std::vector<PsdPoint> points);

  // L(f) in dBc/Hz at an arbitrary positive offset: piecewise-linear in
  // (log10 f, dB) between samples, constant beyond the first/last sample.
  double level_at(double offset_hz) const;

  const std::vector<PsdPoint>& points() const { return points_; }
  double min_offset_hz() const { return points_.front().offset_hz; }
  double max_offset_hz() const { return points_.back().offset_hz; }

  // CSV round-trip; format is a header line "offset_hz,dbc_per_hz" followed
  // by one row per sample.  from_csv throws IoError on unreadable files and
  // std::invalid_argument on malformed content.
  static PsdTable from_csv(const std::filesystem::path& path);
  void to_csv(const std::filesystem::path& path) const;

 private:
  std::vector<PsdPoint> points_;
};

// Free-function form of PsdTable::level_at; throws std::invalid_argument for
// offset_hz <= 0.
double interpolate_psd(const PsdTable& table, double offset_hz);

// Translates a reference-oscillator phase-noise level to the carrier.  The
// linear-power scaling is S * f_c / f_xo, i.e.
//   level + 10 log10(f_c / f_xo)   [dBc/Hz].
double scale_psd_to_carrier(double xo_level_dbc, double f_c, double f_xo);

// Parameters of the PLL + crystal composite LO model.  The crystal (XO)
// contribution is multiplied up to the carrier and low-pass filtered by the
// PLL loop with corner f_pll; the PLL/VCO contribution passes through as-is.
struct HardwareLoParams {
  PsdTable xo;          // reference crystal phase noise at f_xo, dBc/Hz
  PsdTable pll_vco;     // PLL + VCO phase noise at the carrier, dBc/Hz
  double f_xo = 0.0;    // reference crystal frequency, Hz
  double f_pll = 0.0;   // PLL loop corner (cut-off), Hz
  double f_c = 0.0;     // carrier frequency, Hz

  // Throws std::invalid_argument unless f_xo > 0, f_pll > 0, f_c >= f_xo.
  void validate() const;
};

// Composite LO phase-noise level at offset f (Hz), in dBc/Hz:
//   S_LO(f) = S_PLL+VCO(f) + S_XO(f) * (f_c/f_xo) / sqrt(1 + (f/f_pll)^2)
// evaluated in linear power units and converted back to dB.
double composite_lo_psd(const HardwareLoParams& params, double offset_hz);

// Tabulates composite_lo_psd at the union of the two component offset grids
// (restricted to [min, max] of the union), producing a PsdTable usable by the
// synthesis and simulation paths.
PsdTable tabulate_composite_lo(const HardwareLoParams& params);

}  // namespace cfpn
