#include "panelkit/network_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "panelkit/error.hpp"
#include "panelkit/point_index.hpp"

namespace panelkit {

namespace {

std::vector<CrossSection> sorted_by_station(std::vector<CrossSection> sections) {
  std::stable_sort(sections.begin(), sections.end(),
                   [](const CrossSection& a, const CrossSection& b) { return a.station < b.station; });
  return sections;
}

double model_scale(const std::vector<CrossSection>& sections) {
  BoundingBox box;
  for (const auto& s : sections) {
    for (const auto& p : s.points) box.expand(p);
  }
  return box.diagonal();
}

// Grid rows from per-section point lists; one-point sections become collapsed rows.
StructuredNetwork stack_rows(const std::vector<std::vector<Point3>>& rows, const std::string& name,
                             ComponentKind kind) {
  std::size_t ncols = 0;
  for (const auto& r : rows) {
    if (r.size() == 1) continue;
    if (ncols == 0) {
      ncols = r.size();
    } else if (r.size() != ncols) {
      throw Error(ErrorKind::NonMatchingSectionCounts, "network '" + name + "': sections have " +
                                                           std::to_string(ncols) + " and " +
                                                           std::to_string(r.size()) + " points");
    }
  }
  if (ncols == 0) throw Error(ErrorKind::InvalidNetwork, "network '" + name + "' has only apex sections");
  std::vector<Point3> pts;
  pts.reserve(rows.size() * ncols);
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < ncols; ++c) pts.push_back(r.size() == 1 ? r.front() : r[c]);
  }
  StructuredNetwork net(name, kind, rows.size(), ncols, std::move(pts));
  if (rows.front().size() == 1) net.flag_collapsed(GridEdge::FirstRow);
  if (rows.back().size() == 1) net.flag_collapsed(GridEdge::LastRow);
  return net;
}

void require_outward(const StructuredNetwork& net, const DirectionField& ref) {
  const auto rep = check_orientation(net, ref);
  if (rep.fraction_outward < 1.0) {
    throw Error(ErrorKind::InvalidNetwork, "network '" + net.name() + "' has " +
                                               std::to_string(rep.offending.size()) + " of " +
                                               std::to_string(rep.n_panels) + " panels facing inward");
  }
}

}  // namespace

CrossSection close_loop(CrossSection section) {
  if (section.points.size() > 1 && !(section.points.front() == section.points.back())) {
    section.points.push_back(section.points.front());
  }
  return section;
}

DirectionField upward_reference() {
  return [](const Point3&) { return Vec3{0, 0, 1}; };
}

DirectionField downward_reference() {
  return [](const Point3&) { return Vec3{0, 0, -1}; };
}

DirectionField fuselage_radial_reference(const StructuredNetwork& net) {
  struct RowAxis {
    double x;
    double y;
    double z;
  };
  std::vector<RowAxis> axes;
  const std::size_t C = net.n_cols();
  for (std::size_t r = 0; r < net.n_rows(); ++r) {
    const Point3& first = net.at(r, 0);
    const Point3& last = net.at(r, C - 1);
    BoundingBox box;
    double x = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      box.expand(net.at(r, c));
      x += net.at(r, c).x;
    }
    x /= static_cast<double>(C);
    if (box.diagonal() == 0.0) {  // apex row: the axis passes through the apex
      axes.push_back({x, first.y, first.z});
      continue;
    }
    // An open arc is referenced to the midpoint of its end chord.
    const bool closed = distance(first, last) <= 1e-9 * box.diagonal();
    if (closed) {
      axes.push_back({x, 0.5 * (box.lo.y + box.hi.y), 0.5 * (box.lo.z + box.hi.z)});
    } else {
      axes.push_back({x, 0.5 * (first.y + last.y), 0.5 * (first.z + last.z)});
    }
  }
  std::stable_sort(axes.begin(), axes.end(), [](const RowAxis& a, const RowAxis& b) { return a.x < b.x; });
  // Axis point linearly interpolated in x between the bracketing rows.
  return [axes = std::move(axes)](const Point3& p) {
    if (axes.empty()) return Vec3{0, p.y, p.z};
    if (p.x <= axes.front().x) return Vec3{0.0, p.y - axes.front().y, p.z - axes.front().z};
    if (p.x >= axes.back().x) return Vec3{0.0, p.y - axes.back().y, p.z - axes.back().z};
    std::size_t k = 1;
    while (axes[k].x < p.x) ++k;
    const RowAxis& a = axes[k - 1];
    const RowAxis& b = axes[k];
    const double t = b.x > a.x ? (p.x - a.x) / (b.x - a.x) : 0.0;
    return Vec3{0.0, p.y - (a.y + t * (b.y - a.y)), p.z - (a.z + t * (b.z - a.z))};
  };
}

LiftingSurface build_lifting_surface(const std::vector<CrossSection>& input, LiftingKind kind,
                                     const std::string& name, double tol) {
  if (input.size() < 2) throw Error(ErrorKind::InvalidNetwork, "lifting surface '" + name + "' needs two sections");
  auto sections = sorted_by_station(input);
  // Rows run root -> tip: the root is the station nearest the plane of symmetry.
  if (std::abs(sections.front().station) > std::abs(sections.back().station)) {
    std::reverse(sections.begin(), sections.end());
  }

  std::vector<std::vector<Point3>> upper_rows, lower_rows;
  for (const auto& s : sections) {
    if (s.points.size() == 1) {
      upper_rows.push_back(s.points);
      lower_rows.push_back(s.points);
      continue;
    }
    if (s.points.size() < 4) {
      throw Error(ErrorKind::MalformedMesh, "section at station " + std::to_string(s.station) + " of '" + name +
                                                "' is too small for an airfoil loop");
    }
    const double gap = distance(s.points.front(), s.points.back());
    if (gap > tol) {
      throw Error(ErrorKind::OpenSectionLoop, "section at station " + std::to_string(s.station) + " of '" + name +
                                                  "' is open (gap " + std::to_string(gap) + ")");
    }
    std::vector<Point3> loop(s.points.begin(), s.points.end() - 1);
    const std::size_t n = loop.size();

    auto pick = [&](bool want_min) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < n; ++i) {
        const double a = loop[i].x, b = loop[best].x;
        const bool better = want_min ? a < b : a > b;
        if (better || (a == b && loop[i].z > loop[best].z)) best = i;
      }
      return best;
    };
    const std::size_t le = pick(true);
    const std::size_t te = pick(false);
    if (le == te) throw Error(ErrorKind::MalformedMesh, "section of '" + name + "' has no chord");

    // Two chains from TE to LE: one walking forward through the loop, one backward.
    std::vector<Point3> fwd, bwd;
    for (std::size_t i = te;; i = (i + 1) % n) {
      fwd.push_back(loop[i]);
      if (i == le) break;
    }
    for (std::size_t i = te;; i = (i + n - 1) % n) {
      bwd.push_back(loop[i]);
      if (i == le) break;
    }
    auto mean_z = [](const std::vector<Point3>& chain) {
      double z = 0.0;
      for (std::size_t i = 1; i + 1 < chain.size(); ++i) z += chain[i].z;
      return chain.size() > 2 ? z / static_cast<double>(chain.size() - 2) : 0.0;
    };
    const bool fwd_is_upper = mean_z(fwd) >= mean_z(bwd);
    std::vector<Point3> upper = fwd_is_upper ? fwd : bwd;
    std::vector<Point3> lower = fwd_is_upper ? bwd : fwd;
    std::reverse(lower.begin(), lower.end());
    upper_rows.push_back(std::move(upper));
    lower_rows.push_back(std::move(lower));
  }

  const bool wing = kind == LiftingKind::Wing;
  LiftingSurface out{
      stack_rows(upper_rows, name + "_upper", wing ? ComponentKind::WingUpper : ComponentKind::HTailUpper),
      stack_rows(lower_rows, name + "_lower", wing ? ComponentKind::WingLower : ComponentKind::HTailLower)};

  // A surface whose sections run toward -y gets its rows flipped so normals face out.
  if (check_orientation(out.upper, upward_reference()).fraction_outward < 0.5) {
    out.upper = reverse_rows(out.upper);
    out.lower = reverse_rows(out.lower);
  }
  require_outward(out.upper, upward_reference());
  require_outward(out.lower, downward_reference());
  return out;
}

StructuredNetwork build_fuselage(const std::vector<CrossSection>& input, const std::string& name, RingMode mode) {
  if (input.size() < 2) throw Error(ErrorKind::InvalidNetwork, "fuselage '" + name + "' needs two sections");
  const auto sections = sorted_by_station(input);
  const double dup_tol = 1e-12 * std::max(model_scale(sections), 1.0);

  std::vector<std::vector<Point3>> rows;
  for (const auto& s : sections) {
    std::vector<Point3> pts;
    for (const auto& p : order_clockwise(s.points, Axis::X)) {
      if (pts.empty() || distance(pts.back(), p) > dup_tol) pts.push_back(p);
    }
    while (pts.size() > 1 && distance(pts.front(), pts.back()) <= dup_tol) pts.pop_back();
    if (pts.size() == 2) {
      throw Error(ErrorKind::MalformedMesh, "fuselage section at station " + std::to_string(s.station) +
                                                " has only two points");
    }
    if (pts.size() >= 3) {
      bool closed = mode == RingMode::Closed;
      if (mode == RingMode::Auto) {
        double max_gap = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) max_gap = std::max(max_gap, distance(pts[i], pts[i + 1]));
        closed = distance(pts.back(), pts.front()) <= 1.5 * max_gap;
      }
      if (closed) pts.push_back(pts.front());
    }
    rows.push_back(std::move(pts));
  }

  StructuredNetwork net = stack_rows(rows, name, ComponentKind::Fuselage);
  const auto ref = fuselage_radial_reference(net);
  if (check_orientation(net, ref).fraction_outward < 0.5) net = reverse_cols(net);
  require_outward(net, ref);
  return net;
}

SymmetryResult apply_symmetry(const std::vector<StructuredNetwork>& networks, double tol) {
  PointIndex<int> index(std::max(tol, 1e-300) * 4.0);
  for (const auto& net : networks) {
    for (const auto& p : net.points()) index.insert(p, 0);
  }
  for (const auto& net : networks) {
    for (const auto& p : net.points()) {
      if (p.y <= tol) continue;
      if (!index.nearest({p.x, -p.y, p.z}, tol)) {
        throw Error(ErrorKind::AsymmetricGeometry, "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                                       ", " + std::to_string(p.z) + ") of '" + net.name() +
                                                       "' has no mirror image");
      }
    }
  }

  SymmetryResult out;
  out.symmetry = true;
  for (const auto& net : networks) {
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (const auto& p : net.points()) {
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    if (ymax <= tol && ymin < -tol) continue;  // mirror half
    if (ymin >= -tol) {
      out.networks.push_back(net);
      continue;
    }
    // Straddles the plane: keep the rows (or columns) on the positive side of
    // a grid line lying on y = 0.
    auto on_plane_row = [&](const StructuredNetwork& n) -> std::optional<std::size_t> {
      for (std::size_t r = 0; r < n.n_rows(); ++r) {
        bool all = true;
        for (std::size_t c = 0; c < n.n_cols() && all; ++c) all = std::abs(n.at(r, c).y) <= tol;
        if (all) return r;
      }
      return std::nullopt;
    };
    StructuredNetwork work = net;
    auto r0 = on_plane_row(work);
    bool transposed = false;
    if (!r0) {
      work = transpose(work);
      transposed = true;
      r0 = on_plane_row(work);
    }
    if (!r0) {
      throw Error(ErrorKind::AsymmetricGeometry, "network '" + net.name() + "' crosses y = 0 without a grid line on it");
    }
    const bool keep_after = work.at(work.n_rows() - 1, 0).y > 0.0 ||
                            (r0 == 0 && work.at(work.n_rows() - 1, 0).y >= 0.0);
    const std::size_t lo = keep_after ? *r0 : 0;
    const std::size_t hi = keep_after ? work.n_rows() - 1 : *r0;
    std::vector<Point3> pts;
    for (std::size_t r = lo; r <= hi; ++r) {
      for (std::size_t c = 0; c < work.n_cols(); ++c) {
        Point3 p = work.at(r, c);
        if (r == *r0) p.y = 0.0;
        pts.push_back(p);
      }
    }
    StructuredNetwork half(net.name(), net.kind(), hi - lo + 1, work.n_cols(), std::move(pts));
    half.flag_collapsed(GridEdge::FirstCol, work.edge_collapsed(GridEdge::FirstCol));
    half.flag_collapsed(GridEdge::LastCol, work.edge_collapsed(GridEdge::LastCol));
    if (keep_after) half.flag_collapsed(GridEdge::LastRow, work.edge_collapsed(GridEdge::LastRow));
    else half.flag_collapsed(GridEdge::FirstRow, work.edge_collapsed(GridEdge::FirstRow));
    out.networks.push_back(transposed ? transpose(half) : half);
  }
  return out;
}

StructuredNetwork attach_wake(const LiftingSurface& surface, const WakeOptions& options, const std::string& name,
                              double tol) {
  const auto& up = surface.upper;
  const auto& lo = surface.lower;
  if (up.n_rows() != lo.n_rows()) {
    throw Error(ErrorKind::MissingTrailingEdge, "upper and lower networks of '" + name + "' have different row counts");
  }
  const double dlen = norm(options.direction);
  if (!(dlen > 0.0) || !is_finite(options.direction)) {
    throw Error(ErrorKind::InvalidNetwork, "wake direction must be a nonzero vector");
  }
  const Vec3 d = options.direction / dlen;
  const std::size_t R = up.n_rows();
  std::vector<Point3> te;
  double chord = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    const Point3& a = up.at(r, 0);
    const Point3& b = lo.at(r, lo.n_cols() - 1);
    if (distance(a, b) > tol) {
      throw Error(ErrorKind::MissingTrailingEdge, "row " + std::to_string(r) + " of '" + up.name() + "' and '" +
                                                      lo.name() + "' do not share a trailing-edge point");
    }
    te.push_back(a);
    chord = std::max(chord, distance(a, up.at(r, up.n_cols() - 1)));
  }
  if (!(chord > 0.0)) throw Error(ErrorKind::MissingTrailingEdge, "surface '" + up.name() + "' has no chord");
  const double length = options.length_chords * chord;
  std::vector<Point3> pts = te;
  for (const auto& p : te) pts.push_back(p + d * length);
  return StructuredNetwork(name, ComponentKind::Wake, 2, R, std::move(pts));
}

}  // namespace panelkit
