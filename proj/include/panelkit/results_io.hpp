#pragma once

// Solver output formats and visualization exports.
//
// agps (pressures per node):
//   AGPS <title>
//   CASES <n> <alpha_1> ... <alpha_n>
//   NETWORK <name> <rows> <cols> <n>       one block per network
//   x y z cp_1 ... cp_n                    one record per node, row-major
//   END
//
// ffm / ffmf (force summary, half and full geometry):
//   FFMF full|half
//   MACH <m>
//   COLUMNS ALPHA CL CDI CM CY CROLL CN
//   <seven numbers per alpha>
//   END
//
// Numbers are written in shortest round-trip form.

#include <cstddef>
#include <string>
#include <vector>

#include "panelkit/geometry.hpp"
#include "panelkit/panel_solver.hpp"

namespace panelkit {

struct AgpsNetwork {
  std::string name;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<Point3> points;           ///< n_rows * n_cols
  std::vector<std::vector<double>> cp;  ///< [case][node]

  friend bool operator==(const AgpsNetwork&, const AgpsNetwork&) = default;
};

struct AgpsDocument {
  std::string title;
  std::vector<double> alphas;
  std::vector<AgpsNetwork> networks;

  std::size_t total_nodes() const;
  friend bool operator==(const AgpsDocument&, const AgpsDocument&) = default;
};

std::string write_agps(const AgpsDocument& doc);
/// Throws MalformedAgps naming the network and line. In tolerant mode an
/// optional "COLUMNS" line after a NETWORK header may reorder the x, y, z and
/// CP<k> fields, and blank lines or '#' comments are skipped.
AgpsDocument parse_agps(const std::string& text, bool tolerant = false);

struct ForceRow {
  double alpha = 0.0;
  double cl = 0.0;
  double cdi = 0.0;
  double cm = 0.0;
  double cy = 0.0;
  double croll = 0.0;
  double cn = 0.0;

  friend bool operator==(const ForceRow&, const ForceRow&) = default;
};

struct FfmfSummary {
  bool full = true;
  double mach = 0.0;
  std::vector<ForceRow> rows;

  friend bool operator==(const FfmfSummary&, const FfmfSummary&) = default;
};

std::string write_ffmf(const FfmfSummary& s);
/// Throws MalformedFfmf for an empty table, non-increasing alphas or
/// non-finite values.
FfmfSummary parse_ffmf(const std::string& text);

/// Full-geometry summary of a symmetric half model: longitudinal terms
/// double, lateral terms vanish.
FfmfSummary full_from_half(const FfmfSummary& half);
/// Inverse of full_from_half for a symmetric configuration.
FfmfSummary half_from_full(const FfmfSummary& full);
/// True when `full` equals full_from_half(`half`) within `tol` (absolute).
bool doubling_consistent(const FfmfSummary& half, const FfmfSummary& full, double tol = 0.0);

/// Pressures at the nodes of every network, one column per case. Wakes
/// carry no load and are written with Cp = 0 so they can still be plotted.
AgpsDocument agps_from_solution(const std::string& title, const std::vector<StructuredNetwork>& networks,
                                const SolutionSet& solution);
/// Uses the Trefftz-plane induced drag.
FfmfSummary ffmf_from_solution(const SolutionSet& solution);

/// POINT-ordered structured zones, grouped by case then network. Zone titles
/// are "<network> alpha=<a>". Throws UnknownCase for an alpha not in `doc`.
/// An empty selection means every case.
std::string write_tecplot_dat(const AgpsDocument& doc, const std::vector<double>& alphas = {});

/// Tecplot macro: loads `dat_file`, then one contour group per alpha (zones
/// n_networks * k + 1 .. n_networks * (k + 1)), then isometric and planform
/// view presets.
std::string write_macro(const std::string& dat_file, const std::vector<double>& alphas, std::size_t n_networks);

/// alpha,CL,CDi,CD0,CD_total with CD_total = CDi + CD0.
std::string write_polar_csv(const FfmfSummary& s, double cd0);

}  // namespace panelkit
