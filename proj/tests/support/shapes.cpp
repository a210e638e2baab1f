#include "shapes.hpp"

#include <cmath>
#include <numbers>

namespace panelkit::testkit {

namespace {

constexpr double kPi = std::numbers::pi;

double naca_thickness(double x, double tc) {
  return 5.0 * tc * (0.2969 * std::sqrt(x) - 0.126 * x - 0.3516 * x * x + 0.2843 * x * x * x - 0.1036 * x * x * x * x);
}

double chord_at(const WingSpec& s, double eta) {
  if (s.elliptic) return s.root_chord * std::sqrt(std::max(0.0, 1.0 - eta * eta));
  return s.root_chord + (s.tip_chord - s.root_chord) * eta;
}

}  // namespace

StructuredNetwork sphere_network(int n_rows, int n_cols, double radius) {
  std::vector<Point3> pts;
  pts.reserve(static_cast<std::size_t>((n_rows + 1) * (n_cols + 1)));
  for (int r = 0; r <= n_rows; ++r) {
    const double th = kPi * r / n_rows;
    for (int c = 0; c <= n_cols; ++c) {
      const double ph = 2.0 * kPi * c / n_cols;
      pts.push_back({-radius * std::cos(th), radius * std::sin(th) * std::sin(ph), radius * std::sin(th) * std::cos(ph)});
    }
  }
  StructuredNetwork net("sphere", ComponentKind::Fuselage, n_rows + 1, n_cols + 1, std::move(pts));
  net.flag_collapsed(GridEdge::FirstRow);
  net.flag_collapsed(GridEdge::LastRow);
  return net;
}

CrossSection naca00_section(double y, double x_le, double chord, double tc, int n) {
  CrossSection s;
  s.station = y;
  std::vector<Point3> up, lo;
  for (int i = 0; i <= n; ++i) {
    const double x = 0.5 * (1.0 - std::cos(kPi * i / n));
    const double t = naca_thickness(x, tc) * chord;
    up.push_back({x_le + x * chord, y, t});
    lo.push_back({x_le + x * chord, y, -t});
  }
  // Close the trailing edge exactly.
  up.back().z = 0.0;
  lo.back().z = 0.0;
  for (int i = n; i >= 0; --i) s.points.push_back(up[static_cast<std::size_t>(i)]);
  for (int i = 1; i <= n; ++i) s.points.push_back(lo[static_cast<std::size_t>(i)]);
  return s;
}

double wing_area(const WingSpec& s) {
  if (s.elliptic) return kPi * s.root_chord * s.semi_span / 2.0;
  return (s.root_chord + s.tip_chord) * s.semi_span;
}

SolverModel wing_model(const WingSpec& s) {
  const double tan_sweep = std::tan(s.sweep_quarter_chord_deg * kPi / 180.0);
  auto section = [&](double y) {
    const double eta = std::abs(y) / s.semi_span;
    const double c = chord_at(s, eta);
    const double xqc = 0.25 * s.root_chord + std::abs(y) * tan_sweep;
    if (c <= 0.0) {
      CrossSection tip;
      tip.station = y;
      tip.points = {{xqc, y, 0.0}};
      return tip;
    }
    return naca00_section(y, xqc - 0.25 * c, c, s.tc, s.n_chord);
  };

  std::vector<double> stations;
  for (int j = 0; j <= s.n_span; ++j) {
    double eta = std::sin(0.5 * kPi * j / s.n_span);
    if (j == s.n_span) eta = 1.0;
    stations.push_back(eta * s.semi_span);
  }
  std::vector<CrossSection> sections;
  if (s.full_span) {
    for (int j = s.n_span; j >= 1; --j) sections.push_back(section(-stations[static_cast<std::size_t>(j)]));
  }
  for (double y : stations) sections.push_back(section(y));

  const LiftingSurface ls = build_lifting_surface(sections, LiftingKind::Wing, "wing", 1e-9);
  const StructuredNetwork wake = attach_wake(ls, {}, "wing_wake", 1e-9);

  SolverModel m;
  m.networks = {ls.upper, ls.lower, wake};
  m.wakes = {{"wing_wake", ls.upper.name(), ls.lower.name()}};
  m.flow.sref = wing_area(s);
  m.flow.span = 2.0 * s.semi_span;
  m.flow.cbar = m.flow.sref / m.flow.span;
  m.flow.xref = 0.25 * s.root_chord;
  m.flow.symmetry = !s.full_span;
  m.compressibility = Compressibility::None;
  return m;
}

}  // namespace panelkit::testkit
