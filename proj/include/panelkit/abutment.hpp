#pragma once

// Edge matching between networks: gap diagnostics, welding, and polynomial
// resampling of section curves so neighbouring edges carry equal point counts.

#include <array>
#include <string>
#include <vector>

#include "panelkit/geometry.hpp"

namespace panelkit {

/// Per-coordinate least-squares polynomial in normalized arc length t in [0,1],
/// constrained to pass through both endpoints.
struct SectionFit {
  int degree = 6;
  std::array<std::vector<double>, 3> coeffs;  ///< ascending powers, degree+1 each
  std::vector<double> params;                 ///< arc-length parameter of every input point
  double max_residual = 0.0;                  ///< largest point distance from the curve
  double condition = 0.0;                     ///< condition estimate of the normal equations

  Point3 eval(double t) const;
};

/// Arc-length parameters of a polyline, normalized to [0,1].
std::vector<double> arc_length_params(const std::vector<Point3>& points);

/// Throws InsufficientPoints with fewer than degree + 2 distinct points and
/// IllConditionedFit when the condition estimate exceeds 1e12.
SectionFit fit_section_polynomial(const std::vector<Point3>& points, int degree = 6);

/// `n` points at uniform parameters on the fitted curve; endpoints are copied
/// from the input. Falls back to a piecewise-cubic interpolant when the
/// polynomial fit is ill conditioned or has too few points.
std::vector<Point3> resample_section(const std::vector<Point3>& points, std::size_t n, int degree = 6);
/// Same, at caller-chosen parameters (must be ascending in [0,1]).
std::vector<Point3> resample_section(const std::vector<Point3>& points, const std::vector<double>& params,
                                     int degree = 6);

enum class SnapMode { Midpoint, OneSided };

/// Pairs edge points in order (or reversed, whichever pairing is closer) and
/// moves both to their midpoint, or B onto A in one-sided mode. Throws
/// CountMismatch on differing lengths and GapTooLarge if any gap exceeds
/// 10 * tol.
void enforce_abutment(std::vector<Point3>& a, std::vector<Point3>& b, double tol,
                      SnapMode mode = SnapMode::Midpoint);
/// Network form: snaps the given edges in place.
void enforce_abutment(StructuredNetwork& a, GridEdge ea, StructuredNetwork& b, GridEdge eb, double tol,
                      SnapMode mode = SnapMode::Midpoint);

enum class EdgeClass { Matched, Mismatched, OnSymmetryPlane, Free, Open, Collapsed };
std::string to_string(EdgeClass c);

struct EdgePair {
  std::string network_a;
  GridEdge edge_a = GridEdge::FirstRow;
  std::string network_b;
  GridEdge edge_b = GridEdge::FirstRow;
  double max_gap = 0.0;
  bool matched = true;
};

struct EdgeStatus {
  std::string network;
  GridEdge edge = GridEdge::FirstRow;
  EdgeClass cls = EdgeClass::Matched;
  std::size_t unpaired_points = 0;
};

struct AbutmentReport {
  double tolerance = 0.0;
  std::vector<EdgePair> pairs;
  std::vector<EdgeStatus> edges;

  std::vector<EdgeStatus> free_edges() const;
  std::size_t mismatched_count() const;
  /// True when no pair is mismatched and no body edge is open.
  bool passed() const;

  std::string to_text() const;
  std::string to_json() const;
};

/// Default tolerance: 1e-4 of the bounding-box diagonal of the non-wake networks.
double default_abutment_tolerance(const std::vector<StructuredNetwork>& networks);

/// Every edge point is matched to the nearest edge point of another edge
/// within 10 * tol; matches are aggregated per edge pair. With `symmetry`
/// set, unmatched points on y = 0 are accepted as lying on the mirror plane.
AbutmentReport abutment_report(const std::vector<StructuredNetwork>& networks, double tol, bool symmetry = false);

/// Welds every cluster of edge points closer than `max_gap`: all members move
/// to the cluster mean (or to the first member in one-sided mode). Returns
/// the number of points moved.
std::size_t weld_edges(std::vector<StructuredNetwork>& networks, double max_gap, SnapMode mode = SnapMode::Midpoint);

}  // namespace panelkit
