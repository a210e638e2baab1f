#include "panelkit/geometry.hpp"

#include <algorithm>
#include <utility>

#include "panelkit/error.hpp"

namespace panelkit {

std::string to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::WingUpper: return "wing_upper";
    case ComponentKind::WingLower: return "wing_lower";
    case ComponentKind::Fuselage: return "fuselage";
    case ComponentKind::HTailUpper: return "htail_upper";
    case ComponentKind::HTailLower: return "htail_lower";
    case ComponentKind::Wake: return "wake";
  }
  return "fuselage";
}

ComponentKind component_kind_from_string(const std::string& s) {
  if (s == "wing_upper") return ComponentKind::WingUpper;
  if (s == "wing_lower") return ComponentKind::WingLower;
  if (s == "fuselage") return ComponentKind::Fuselage;
  if (s == "htail_upper") return ComponentKind::HTailUpper;
  if (s == "htail_lower") return ComponentKind::HTailLower;
  if (s == "wake") return ComponentKind::Wake;
  throw Error(ErrorKind::ParseError, "unknown component kind '" + s + "'");
}

std::string to_string(GridEdge edge) {
  switch (edge) {
    case GridEdge::FirstRow: return "first_row";
    case GridEdge::LastRow: return "last_row";
    case GridEdge::FirstCol: return "first_col";
    case GridEdge::LastCol: return "last_col";
  }
  return "?";
}

StructuredNetwork::StructuredNetwork(std::string name, ComponentKind kind, std::size_t n_rows,
                                     std::size_t n_cols, std::vector<Point3> points)
    : name_(std::move(name)), n_rows_(n_rows), n_cols_(n_cols), points_(std::move(points)) {
  if (n_rows_ < 2 || n_cols_ < 2) {
    throw Error(ErrorKind::InvalidNetwork, "network '" + name_ + "' needs at least 2x2 points");
  }
  if (points_.size() != n_rows_ * n_cols_) {
    throw Error(ErrorKind::InvalidNetwork, "network '" + name_ + "' has " +
                                               std::to_string(points_.size()) + " points for a " +
                                               std::to_string(n_rows_) + "x" + std::to_string(n_cols_) +
                                               " grid");
  }
  set_kind(kind);
}

void StructuredNetwork::set_kind(ComponentKind kind) {
  kind_ = kind;
  bc_class_ = kind == ComponentKind::Wake ? BoundaryClass::Wake : BoundaryClass::ImpermeableSurface;
}

std::vector<std::size_t> StructuredNetwork::edge_indices(GridEdge edge) const {
  std::vector<std::size_t> idx;
  switch (edge) {
    case GridEdge::FirstRow:
    case GridEdge::LastRow: {
      const std::size_t r = edge == GridEdge::FirstRow ? 0 : n_rows_ - 1;
      for (std::size_t c = 0; c < n_cols_; ++c) idx.push_back(r * n_cols_ + c);
      break;
    }
    case GridEdge::FirstCol:
    case GridEdge::LastCol: {
      const std::size_t c = edge == GridEdge::FirstCol ? 0 : n_cols_ - 1;
      for (std::size_t r = 0; r < n_rows_; ++r) idx.push_back(r * n_cols_ + c);
      break;
    }
  }
  return idx;
}

std::vector<Point3> StructuredNetwork::edge_points(GridEdge edge) const {
  std::vector<Point3> pts;
  for (std::size_t i : edge_indices(edge)) pts.push_back(points_[i]);
  return pts;
}

void StructuredNetwork::detect_collapsed_edges(double tol) {
  for (GridEdge e : {GridEdge::FirstRow, GridEdge::LastRow, GridEdge::FirstCol, GridEdge::LastCol}) {
    const auto pts = edge_points(e);
    bool collapsed = true;
    for (const auto& p : pts) {
      if (distance(p, pts.front()) > tol) {
        collapsed = false;
        break;
      }
    }
    flag_collapsed(e, collapsed);
  }
}

Vec3 panel_normal(const Point3& p1, const Point3& p2, const Point3& p3, const Point3& p4) {
  const Vec3 d1 = p3 - p1;
  const Vec3 d2 = p4 - p2;
  const Vec3 n = cross(d1, d2);
  const double scale = std::max(dot(d1, d1), dot(d2, d2));
  const double len = norm(n);
  if (!(len >= 1e-12 * scale) || len == 0.0) {
    throw Error(ErrorKind::DegeneratePanel, "diagonals are parallel or vanishing");
  }
  return n / len;
}

PanelMetrics panel_metrics(const Point3& p1, const Point3& p2, const Point3& p3, const Point3& p4) {
  PanelMetrics m;
  m.unit_normal = panel_normal(p1, p2, p3, p4);
  const Vec3 a1 = cross(p2 - p1, p3 - p1) * 0.5;
  const Vec3 a2 = cross(p3 - p1, p4 - p1) * 0.5;
  const double s1 = norm(a1);
  const double s2 = norm(a2);
  m.area = s1 + s2;
  const Point3 c1 = (p1 + p2 + p3) / 3.0;
  const Point3 c2 = (p1 + p3 + p4) / 3.0;
  m.centroid = m.area > 0.0 ? (c1 * s1 + c2 * s2) / m.area : (p1 + p2 + p3 + p4) / 4.0;
  return m;
}

PanelMetrics panel_metrics(const StructuredNetwork& net, std::size_t r, std::size_t c) {
  const auto q = net.panel_corners(r, c);
  return panel_metrics(q[0], q[1], q[2], q[3]);
}

OrientationReport check_orientation(const StructuredNetwork& net, const DirectionField& outward_ref) {
  OrientationReport rep;
  rep.n_panels = net.n_panels();
  const std::size_t nc = net.n_cols() - 1;
  for (std::size_t r = 0; r + 1 < net.n_rows(); ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      bool ok = false;
      try {
        const PanelMetrics m = panel_metrics(net, r, c);
        ok = dot(m.unit_normal, outward_ref(m.centroid)) > 0.0;
      } catch (const Error&) {
        ok = false;
      }
      if (!ok) rep.offending.push_back(r * nc + c);
    }
  }
  rep.fraction_outward =
      rep.n_panels == 0 ? 1.0
                        : static_cast<double>(rep.n_panels - rep.offending.size()) / static_cast<double>(rep.n_panels);
  return rep;
}

namespace {

StructuredNetwork remap(const StructuredNetwork& net, std::size_t rows, std::size_t cols,
                        const std::function<Point3(std::size_t, std::size_t)>& source,
                        const std::array<GridEdge, 4>& edge_source) {
  std::vector<Point3> pts;
  pts.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) pts.push_back(source(r, c));
  }
  StructuredNetwork out(net.name(), net.kind(), rows, cols, std::move(pts));
  const std::array<GridEdge, 4> edges{GridEdge::FirstRow, GridEdge::LastRow, GridEdge::FirstCol,
                                      GridEdge::LastCol};
  for (std::size_t i = 0; i < 4; ++i) out.flag_collapsed(edges[i], net.edge_collapsed(edge_source[i]));
  return out;
}

}  // namespace

StructuredNetwork reverse_rows(const StructuredNetwork& net) {
  const std::size_t R = net.n_rows();
  return remap(
      net, R, net.n_cols(), [&](std::size_t r, std::size_t c) { return net.at(R - 1 - r, c); },
      {GridEdge::LastRow, GridEdge::FirstRow, GridEdge::FirstCol, GridEdge::LastCol});
}

StructuredNetwork reverse_cols(const StructuredNetwork& net) {
  const std::size_t C = net.n_cols();
  return remap(
      net, net.n_rows(), C, [&](std::size_t r, std::size_t c) { return net.at(r, C - 1 - c); },
      {GridEdge::FirstRow, GridEdge::LastRow, GridEdge::LastCol, GridEdge::FirstCol});
}

StructuredNetwork transpose(const StructuredNetwork& net) {
  return remap(
      net, net.n_cols(), net.n_rows(), [&](std::size_t r, std::size_t c) { return net.at(c, r); },
      {GridEdge::FirstCol, GridEdge::LastCol, GridEdge::FirstRow, GridEdge::LastRow});
}

void BoundingBox::expand(const Point3& p) {
  lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
  hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
}

double BoundingBox::diagonal() const { return lo.x <= hi.x ? distance(lo, hi) : 0.0; }

BoundingBox bounding_box(std::span<const StructuredNetwork> nets) {
  BoundingBox box;
  for (const auto& n : nets) {
    for (const auto& p : n.points()) box.expand(p);
  }
  return box;
}

double enclosed_volume(std::span<const StructuredNetwork> nets) {
  double six_v = 0.0;
  for (const auto& net : nets) {
    if (net.kind() == ComponentKind::Wake) continue;
    for (std::size_t r = 0; r + 1 < net.n_rows(); ++r) {
      for (std::size_t c = 0; c + 1 < net.n_cols(); ++c) {
        const auto q = net.panel_corners(r, c);
        six_v += dot(q[0], cross(q[1], q[2]));
        six_v += dot(q[0], cross(q[2], q[3]));
      }
    }
  }
  return six_v / 6.0;
}

void validate_network(const StructuredNetwork& net, double diag, double rel_tol) {
  const double tol = rel_tol * diag;
  for (const auto& p : net.points()) {
    if (!is_finite(p)) throw Error(ErrorKind::InvalidNetwork, "non-finite point in '" + net.name() + "'");
  }
  auto on_collapsed = [&](std::size_t r1, std::size_t c1, std::size_t r2, std::size_t c2) {
    const std::size_t R = net.n_rows() - 1, C = net.n_cols() - 1;
    auto both = [&](bool a, bool b) { return a && b; };
    return (net.edge_collapsed(GridEdge::FirstRow) && both(r1 == 0, r2 == 0)) ||
           (net.edge_collapsed(GridEdge::LastRow) && both(r1 == R, r2 == R)) ||
           (net.edge_collapsed(GridEdge::FirstCol) && both(c1 == 0, c2 == 0)) ||
           (net.edge_collapsed(GridEdge::LastCol) && both(c1 == C, c2 == C));
  };
  for (std::size_t r = 0; r < net.n_rows(); ++r) {
    for (std::size_t c = 0; c < net.n_cols(); ++c) {
      if (c + 1 < net.n_cols() && distance(net.at(r, c), net.at(r, c + 1)) <= tol &&
          !on_collapsed(r, c, r, c + 1)) {
        throw Error(ErrorKind::InvalidNetwork, "coincident points at row " + std::to_string(r) + " col " +
                                                   std::to_string(c) + " of '" + net.name() + "'");
      }
      if (r + 1 < net.n_rows() && distance(net.at(r, c), net.at(r + 1, c)) <= tol &&
          !on_collapsed(r, c, r + 1, c)) {
        throw Error(ErrorKind::InvalidNetwork, "coincident points at row " + std::to_string(r) + " col " +
                                                   std::to_string(c) + " of '" + net.name() + "'");
      }
    }
  }
}

}  // namespace panelkit
