#include "panelkit/abutment.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>
#include <unsupported/Eigen/Splines>

#include "panelkit/error.hpp"
#include "panelkit/point_index.hpp"

namespace panelkit {

Point3 SectionFit::eval(double t) const {
  double v[3];
  for (int k = 0; k < 3; ++k) {
    double acc = 0.0;
    for (int i = degree; i >= 0; --i) acc = acc * t + coeffs[k][static_cast<std::size_t>(i)];
    v[k] = acc;
  }
  return {v[0], v[1], v[2]};
}

std::vector<double> arc_length_params(const std::vector<Point3>& points) {
  std::vector<double> t(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) t[i] = t[i - 1] + distance(points[i - 1], points[i]);
  const double total = points.empty() ? 0.0 : t.back();
  if (total > 0.0) {
    for (auto& v : t) v /= total;
    t.back() = 1.0;
  }
  return t;
}

SectionFit fit_section_polynomial(const std::vector<Point3>& points, int degree) {
  if (degree < 1) throw Error(ErrorKind::InsufficientPoints, "polynomial degree must be at least 1");
  const auto t = arc_length_params(points);
  std::size_t distinct = points.empty() ? 0 : 1;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] > t[i - 1]) ++distinct;
  }
  const auto need = static_cast<std::size_t>(degree) + 2;
  if (distinct < need) {
    throw Error(ErrorKind::InsufficientPoints, "a degree-" + std::to_string(degree) + " fit needs " +
                                                   std::to_string(need) + " distinct points, got " +
                                                   std::to_string(distinct));
  }

  const auto m = static_cast<Eigen::Index>(points.size());
  const Eigen::Index n = degree + 1;
  Eigen::MatrixXd V(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    double p = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      V(i, j) = p;
      p *= t[static_cast<std::size_t>(i)];
    }
  }
  const Eigen::MatrixXd N = V.transpose() * V;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(N).singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(cond <= 1e12)) {
    throw Error(ErrorKind::IllConditionedFit, "normal-equations condition estimate " + std::to_string(cond) +
                                                  " exceeds 1e12; subdivide the section");
  }

  // Endpoint interpolation as equality constraints, solved through the KKT system.
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 2, n + 2);
  K.topLeftCorner(n, n) = 2.0 * N;
  Eigen::RowVectorXd e0 = Eigen::RowVectorXd::Zero(n), e1 = Eigen::RowVectorXd::Ones(n);
  e0(0) = 1.0;
  K.block(n, 0, 1, n) = e0;
  K.block(n + 1, 0, 1, n) = e1;
  K.block(0, n, n, 1) = e0.transpose();
  K.block(0, n + 1, n, 1) = e1.transpose();
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(K);

  SectionFit fit;
  fit.degree = degree;
  fit.params = t;
  fit.condition = cond;
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd x(m);
    for (Eigen::Index i = 0; i < m; ++i) x(i) = points[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    Eigen::VectorXd rhs(n + 2);
    rhs.head(n) = 2.0 * V.transpose() * x;
    rhs(n) = x(0);
    rhs(n + 1) = x(m - 1);
    const Eigen::VectorXd sol = lu.solve(rhs);
    fit.coeffs[static_cast<std::size_t>(k)].assign(sol.data(), sol.data() + n);
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    fit.max_residual = std::max(fit.max_residual, distance(fit.eval(t[i]), points[i]));
  }
  return fit;
}

namespace {

std::vector<Point3> piecewise_cubic(const std::vector<Point3>& points, const std::vector<double>& params) {
  const auto t = arc_length_params(points);
  std::vector<Point3> out;
  out.reserve(params.size());
  if (points.size() < 4) {
    for (double s : params) {
      std::size_t i = 1;
      while (i + 1 < t.size() && t[i] < s) ++i;
      const double span = t[i] - t[i - 1];
      const double w = span > 0.0 ? (s - t[i - 1]) / span : 0.0;
      out.push_back(points[i - 1] + (points[i] - points[i - 1]) * w);
    }
    return out;
  }
  using Spline3 = Eigen::Spline<double, 3>;
  Eigen::MatrixXd pts(3, static_cast<Eigen::Index>(points.size()));
  Eigen::RowVectorXd knots(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    pts.col(static_cast<Eigen::Index>(i)) << points[i].x, points[i].y, points[i].z;
    knots(static_cast<Eigen::Index>(i)) = t[i];
  }
  const Spline3 spline = Eigen::SplineFitting<Spline3>::Interpolate(pts, 3, knots);
  for (double s : params) {
    const auto v = spline(s);
    out.push_back({v(0), v(1), v(2)});
  }
  return out;
}

}  // namespace

std::vector<Point3> resample_section(const std::vector<Point3>& points, const std::vector<double>& params,
                                     int degree) {
  if (points.size() < 2) throw Error(ErrorKind::InsufficientPoints, "cannot resample fewer than two points");
  std::vector<Point3> out;
  try {
    const SectionFit fit = fit_section_polynomial(points, degree);
    for (double s : params) out.push_back(fit.eval(s));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::IllConditionedFit && e.kind() != ErrorKind::InsufficientPoints) throw;
    out = piecewise_cubic(points, params);
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i] == 0.0) out[i] = points.front();
    if (params[i] == 1.0) out[i] = points.back();
  }
  return out;
}

std::vector<Point3> resample_section(const std::vector<Point3>& points, std::size_t n, int degree) {
  if (n < 2) throw Error(ErrorKind::InsufficientPoints, "resampling needs at least two output points");
  std::vector<double> params(n);
  for (std::size_t i = 0; i < n; ++i) params[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  params.back() = 1.0;
  return resample_section(points, params, degree);
}

void enforce_abutment(std::vector<Point3>& a, std::vector<Point3>& b, double tol, SnapMode mode) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::CountMismatch, "edges have " + std::to_string(a.size()) + " and " +
                                              std::to_string(b.size()) + " points; resample first");
  }
  const std::size_t n = a.size();
  auto worst = [&](bool reversed) {
    double g = 0.0;
    for (std::size_t i = 0; i < n; ++i) g = std::max(g, distance(a[i], b[reversed ? n - 1 - i : i]));
    return g;
  };
  const double g_fwd = worst(false);
  const double g_rev = worst(true);
  const bool reversed = g_rev < g_fwd;
  const double gap = std::min(g_fwd, g_rev);
  if (gap > 10.0 * tol) {
    throw Error(ErrorKind::GapTooLarge, "edge gap " + std::to_string(gap) + " exceeds 10x the tolerance " +
                                            std::to_string(tol));
  }
  for (std::size_t i = 0; i < n; ++i) {
    Point3& pa = a[i];
    Point3& pb = b[reversed ? n - 1 - i : i];
    if (mode == SnapMode::Midpoint) pa = pa + (pb - pa) * 0.5;
    pb = pa;
  }
}

void enforce_abutment(StructuredNetwork& a, GridEdge ea, StructuredNetwork& b, GridEdge eb, double tol,
                      SnapMode mode) {
  auto pa = a.edge_points(ea);
  auto pb = b.edge_points(eb);
  enforce_abutment(pa, pb, tol, mode);
  const auto ia = a.edge_indices(ea);
  const auto ib = b.edge_indices(eb);
  for (std::size_t i = 0; i < ia.size(); ++i) a.set(ia[i] / a.n_cols(), ia[i] % a.n_cols(), pa[i]);
  for (std::size_t i = 0; i < ib.size(); ++i) b.set(ib[i] / b.n_cols(), ib[i] % b.n_cols(), pb[i]);
}

std::string to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::Matched: return "matched";
    case EdgeClass::Mismatched: return "mismatched";
    case EdgeClass::OnSymmetryPlane: return "symmetry_plane";
    case EdgeClass::Free: return "free";
    case EdgeClass::Open: return "open";
    case EdgeClass::Collapsed: return "collapsed";
  }
  return "?";
}

std::vector<EdgeStatus> AbutmentReport::free_edges() const {
  std::vector<EdgeStatus> out;
  for (const auto& e : edges) {
    if (e.cls == EdgeClass::Free || e.cls == EdgeClass::Open) out.push_back(e);
  }
  return out;
}

std::size_t AbutmentReport::mismatched_count() const {
  return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [](const EdgePair& p) { return !p.matched; }));
}

bool AbutmentReport::passed() const {
  if (mismatched_count() > 0) return false;
  return std::none_of(edges.begin(), edges.end(), [](const EdgeStatus& e) { return e.cls == EdgeClass::Open; });
}

std::string AbutmentReport::to_text() const {
  std::ostringstream os;
  os << "abutment report (tolerance " << tolerance << ")\n";
  os << "pairs: " << pairs.size() << ", mismatched: " << mismatched_count() << "\n";
  for (const auto& p : pairs) {
    os << (p.matched ? "  ok    " : "  GAP   ") << p.network_a << ":" << to_string(p.edge_a) << " <-> "
       << p.network_b << ":" << to_string(p.edge_b) << "  max_gap " << p.max_gap << "\n";
  }
  os << "edges:\n";
  for (const auto& e : edges) {
    os << "  " << e.network << ":" << to_string(e.edge) << "  " << to_string(e.cls);
    if (e.unpaired_points > 0) os << " (" << e.unpaired_points << " unpaired points)";
    os << "\n";
  }
  os << (passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string AbutmentReport::to_json() const {
  nlohmann::ordered_json j;
  j["tolerance"] = tolerance;
  j["passed"] = passed();
  j["pairs"] = nlohmann::ordered_json::array();
  for (const auto& p : pairs) {
    j["pairs"].push_back({{"network_a", p.network_a},
                          {"edge_a", to_string(p.edge_a)},
                          {"network_b", p.network_b},
                          {"edge_b", to_string(p.edge_b)},
                          {"max_gap", p.max_gap},
                          {"matched", p.matched}});
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : edges) {
    j["edges"].push_back({{"network", e.network},
                          {"edge", to_string(e.edge)},
                          {"class", to_string(e.cls)},
                          {"unpaired_points", e.unpaired_points}});
  }
  return j.dump(2) + "\n";
}

double default_abutment_tolerance(const std::vector<StructuredNetwork>& networks) {
  // Wakes reach far downstream and would inflate the box.
  std::vector<StructuredNetwork> bodies;
  for (const auto& n : networks) {
    if (n.kind() != ComponentKind::Wake) bodies.push_back(n);
  }
  return 1e-4 * bounding_box(bodies.empty() ? networks : bodies).diagonal();
}

namespace {

constexpr std::array<GridEdge, 4> kEdges{GridEdge::FirstRow, GridEdge::LastRow, GridEdge::FirstCol, GridEdge::LastCol};

struct EdgePointRef {
  std::size_t net;
  std::size_t edge;  // index into kEdges
  std::size_t grid;  // linear grid index
};

bool edge_is_collapsed(const StructuredNetwork& net, GridEdge e, double tol) {
  if (net.edge_collapsed(e)) return true;
  const auto pts = net.edge_points(e);
  return std::all_of(pts.begin(), pts.end(), [&](const Point3& p) { return distance(p, pts.front()) <= tol; });
}

}  // namespace

AbutmentReport abutment_report(const std::vector<StructuredNetwork>& networks, double tol, bool symmetry) {
  AbutmentReport rep;
  rep.tolerance = tol;
  const double radius = 10.0 * tol;

  std::vector<std::array<bool, 4>> collapsed(networks.size());
  PointIndex<EdgePointRef> index(radius > 0.0 ? radius : 1.0);
  for (std::size_t n = 0; n < networks.size(); ++n) {
    for (std::size_t e = 0; e < 4; ++e) {
      collapsed[n][e] = edge_is_collapsed(networks[n], kEdges[e], tol);
      if (collapsed[n][e]) continue;
      for (std::size_t g : networks[n].edge_indices(kEdges[e])) index.insert(networks[n].points()[g], {n, e, g});
    }
  }

  using EdgeKey = std::pair<std::size_t, std::size_t>;  // (net, edge)
  std::map<std::pair<EdgeKey, EdgeKey>, double> pair_gap;
  for (std::size_t n = 0; n < networks.size(); ++n) {
    const auto& net = networks[n];
    for (std::size_t e = 0; e < 4; ++e) {
      EdgeStatus st{net.name(), kEdges[e], EdgeClass::Matched, 0};
      if (collapsed[n][e]) {
        st.cls = EdgeClass::Collapsed;
        rep.edges.push_back(st);
        continue;
      }
      bool any_pair = false, any_mismatch = false;
      std::size_t on_plane = 0;
      for (std::size_t g : net.edge_indices(kEdges[e])) {
        const Point3& p = net.points()[g];
        const auto hits = index.within(p, radius, [&](const EdgePointRef& r) {
          if (r.net == n && r.edge == e) return false;
          return !(r.net == n && r.grid == g);
        });
        if (hits.empty()) {
          if (symmetry && std::abs(p.y) <= tol) ++on_plane;
          else ++st.unpaired_points;
          continue;
        }
        any_pair = true;
        const double best = hits.front().dist;
        if (best > tol) any_mismatch = true;
        // A point at a corner touches every edge through that corner; each
        // edge about as near as the nearest one forms a pair.
        std::set<EdgeKey> seen;
        for (const auto& h : hits) {
          if (h.dist > best + tol) break;
          EdgeKey a{n, e}, b{h.payload->net, h.payload->edge};
          if (!seen.insert(b).second) continue;
          auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
          auto [it, fresh] = pair_gap.emplace(key, h.dist);
          if (!fresh) it->second = std::max(it->second, h.dist);
        }
      }
      if (any_mismatch) st.cls = EdgeClass::Mismatched;
      else if (st.unpaired_points > 0) st.cls = net.kind() == ComponentKind::Wake ? EdgeClass::Free : EdgeClass::Open;
      else if (!any_pair && on_plane > 0) st.cls = EdgeClass::OnSymmetryPlane;
      rep.edges.push_back(st);
    }
  }
  for (const auto& [key, gap] : pair_gap) {
    rep.pairs.push_back({networks[key.first.first].name(), kEdges[key.first.second], networks[key.second.first].name(),
                         kEdges[key.second.second], gap, gap <= tol});
  }
  return rep;
}

std::size_t weld_edges(std::vector<StructuredNetwork>& networks, double max_gap, SnapMode mode) {
  std::vector<EdgePointRef> refs;
  PointIndex<std::size_t> index(max_gap > 0.0 ? max_gap : 1.0);
  for (std::size_t n = 0; n < networks.size(); ++n) {
    std::vector<bool> seen(networks[n].points().size(), false);
    for (std::size_t e = 0; e < 4; ++e) {
      for (std::size_t g : networks[n].edge_indices(kEdges[e])) {
        if (seen[g]) continue;
        seen[g] = true;
        index.insert(networks[n].points()[g], refs.size());
        refs.push_back({n, e, g});
      }
    }
  }
  // Union-find over points closer than max_gap.
  std::vector<std::size_t> parent(refs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const Point3& p = networks[refs[i].net].points()[refs[i].grid];
    index.nearest(p, max_gap, [&](const std::size_t& j) {
      if (j != i && distance(networks[refs[j].net].points()[refs[j].grid], p) <= max_gap) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
      return false;
    });
  }
  std::map<std::size_t, std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < refs.size(); ++i) clusters[find(i)].push_back(i);

  auto point_of = [&](std::size_t i) { return networks[refs[i].net].points()[refs[i].grid]; };
  std::size_t moved = 0;
  for (const auto& [root, members] : clusters) {
    if (members.size() < 2) continue;
    Point3 target = point_of(members.front());
    if (std::all_of(members.begin(), members.end(), [&](std::size_t i) { return point_of(i) == target; })) continue;
    if (mode == SnapMode::Midpoint) {
      Point3 sum{};
      for (std::size_t i : members) sum += point_of(i);
      target = sum / static_cast<double>(members.size());
    }
    for (std::size_t i : members) {
      if (point_of(i) == target) continue;
      auto& net = networks[refs[i].net];
      net.set(refs[i].grid / net.n_cols(), refs[i].grid % net.n_cols(), target);
      ++moved;
    }
  }
  return moved;
}

}  // namespace panelkit
