// SPDX-License-Identifier: Apache-2.0
#include "cfpn/psd.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "cfpn/csv.hpp"
#include "cfpn/errors.hpp"

namespace cfpn {

PsdTable::PsdTable(std::vector<PsdPoint> points) : points_(std::move(points)) {
  if (points_.size() < 2)
    throw std::invalid_argument("PsdTable needs at least 2 points");
  double prev = 0.0;
  for (const auto& p : points_) {
    if (!(p.offset_hz > 0.0) || !std::isfinite(p.offset_hz))
      throw std::invalid_argument("PsdTable offsets must be positive finite");
    if (p.offset_hz <= prev)
      throw std::invalid_argument("PsdTable offsets must be strictly increasing");
    if (!std::isfinite(p.dbc_per_hz))
      throw std::invalid_argument("PsdTable levels must be finite");
    prev = p.offset_hz;
  }
}

double PsdTable::level_at(double offset_hz) const {
  if (!(offset_hz > 0.0))
    throw std::invalid_argument("PSD interpolation requires offset > 0");
  if (offset_hz <= points_.front().offset_hz) return points_.front().dbc_per_hz;
  if (offset_hz >= points_.back().offset_hz) return points_.back().dbc_per_hz;
  // First point strictly above the query; interval [it-1, it] brackets it.
  const auto it = std::upper_bound(
      points_.begin(), points_.end(), offset_hz,
      [](double f, const PsdPoint& p) { return f < p.offset_hz; });
  const PsdPoint& hi = *it;
  const PsdPoint& lo = *(it - 1);
  const double u = (std::log10(offset_hz) - std::log10(lo.offset_hz)) /
                   (std::log10(hi.offset_hz) - std::log10(lo.offset_hz));
  return lo.dbc_per_hz + u * (hi.dbc_per_hz - lo.dbc_per_hz);
}

PsdTable PsdTable::from_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const int fcol = table.column("offset_hz");
  const int lcol = table.column("dbc_per_hz");
  if (fcol < 0 || lcol < 0)
    throw std::invalid_argument("PSD file " + path.string() +
                                " must have columns offset_hz,dbc_per_hz");
  std::vector<PsdPoint> points;
  points.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (static_cast<int>(row.size()) <= std::max(fcol, lcol))
      throw std::invalid_argument("short row in PSD file " + path.string());
    points.push_back({parse_double(row[fcol], path.string()),
                      parse_double(row[lcol], path.string())});
  }
  return PsdTable(std::move(points));
}

void PsdTable::to_csv(const std::filesystem::path& path) const {
  CsvTable table;
  table.header = {"offset_hz", "dbc_per_hz"};
  for (const auto& p : points_)
    table.rows.push_back({format_g9(p.offset_hz), format_g9(p.dbc_per_hz)});
  write_csv(path, table);
}

double interpolate_psd(const PsdTable& table, double offset_hz) {
  return table.level_at(offset_hz);
}

double scale_psd_to_carrier(double xo_level_dbc, double f_c, double f_xo) {
  if (!(f_c > 0.0) || !(f_xo > 0.0))
    throw std::invalid_argument("carrier scaling requires f_c, f_xo > 0");
  return xo_level_dbc + 10.0 * std::log10(f_c / f_xo);
}

void HardwareLoParams::validate() const {
  if (!(f_xo > 0.0)) throw std::invalid_argument("f_xo must be > 0");
  if (!(f_pll > 0.0)) throw std::invalid_argument("f_pll must be > 0");
  if (!(f_c >= f_xo)) throw std::invalid_argument("f_c must be >= f_xo");
}

double composite_lo_psd(const HardwareLoParams& params, double offset_hz) {
  params.validate();
  if (!(offset_hz > 0.0))
    throw std::invalid_argument("composite PSD requires offset > 0");
  const double pll_lin =
      std::pow(10.0, params.pll_vco.level_at(offset_hz) / 10.0);
  const double xo_scaled = scale_psd_to_carrier(params.xo.level_at(offset_hz),
                                                params.f_c, params.f_xo);
  // Single-pole PLL low-pass: the multiplied reference noise is attenuated
  // by 1/sqrt(1 + (f/f_pll)^2) outside the loop bandwidth.
  const double ratio = offset_hz / params.f_pll;
  const double xo_lin = std::pow(10.0, xo_scaled / 10.0) /
                        std::sqrt(1.0 + ratio * ratio);
  return 10.0 * std::log10(pll_lin + xo_lin);
}

PsdTable tabulate_composite_lo(const HardwareLoParams& params) {
  params.validate();
  std::set<double> grid;
  for (const auto& p : params.xo.points()) grid.insert(p.offset_hz);
  for (const auto& p : params.pll_vco.points()) grid.insert(p.offset_hz);
  std::vector<PsdPoint> points;
  points.reserve(grid.size());
  for (double f : grid) points.push_back({f, composite_lo_psd(params, f)});
  return PsdTable(std::move(points));
}

}  // namespace cfpn
