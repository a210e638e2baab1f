#include "panelkit/panel_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>

#include "panelkit/error.hpp"

namespace panelkit {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

Point3 mirror(const Point3& p) { return {p.x, -p.y, p.z}; }

std::array<Point3, 4> mirror(const std::array<Point3, 4>& q) {
  // Reversed so the image keeps an outward normal; the split diagonal maps onto
  // the image of the original one.
  return {mirror(q[3]), mirror(q[2]), mirror(q[1]), mirror(q[0])};
}

bool negligible_triangle(const Point3& a, const Point3& b, const Point3& c) {
  const Vec3 n = cross(b - a, c - a);
  const double scale = std::max({dot(b - a, b - a), dot(c - a, c - a), dot(c - b, c - b)});
  return scale == 0.0 || dot(n, n) <= 1e-28 * scale * scale;
}

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

}  // namespace

double triangle_doublet(const Point3& a, const Point3& b, const Point3& c, const Point3& p) {
  const Vec3 r1 = a - p, r2 = b - p, r3 = c - p;
  const double l1 = norm(r1), l2 = norm(r2), l3 = norm(r3);
  const double num = dot(r1, cross(r2, r3));
  const double den = l1 * l2 * l3 + dot(r1, r2) * l3 + dot(r1, r3) * l2 + dot(r2, r3) * l1;
  const double omega = 2.0 * std::atan2(num, den);
  return -omega / kFourPi;
}

double triangle_source(const Point3& a, const Point3& b, const Point3& c, const Point3& p) {
  const Vec3 nn = cross(b - a, c - a);
  const double len = norm(nn);
  if (len == 0.0) return 0.0;
  const Vec3 n = nn / len;
  const double h = dot(p - a, n);
  const std::array<Point3, 3> v{a, b, c};
  std::array<double, 3> r{};
  for (int i = 0; i < 3; ++i) r[i] = distance(v[i], p);
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Point3& v0 = v[i];
    const Point3& v1 = v[(i + 1) % 3];
    const double l = distance(v0, v1);
    if (l == 0.0) continue;
    const Vec3 t = (v1 - v0) / l;
    const Vec3 m = cross(t, n);
    const double d = dot(v0 - p, m);
    const double s = r[i] + r[(i + 1) % 3];
    const double lo = s - l;
    if (d == 0.0 || lo <= 0.0) continue;  // on the edge line: the term vanishes
    sum += d * std::log((s + l) / lo);
  }
  const double omega = std::abs(2.0 * std::atan2(dot(a - p, cross(b - p, c - p)),
                                                 r[0] * r[1] * r[2] + dot(a - p, b - p) * r[2] +
                                                     dot(a - p, c - p) * r[1] + dot(b - p, c - p) * r[0]));
  return -(sum - std::abs(h) * omega) / kFourPi;
}

std::array<std::array<Point3, 3>, 2> split_quad(const std::array<Point3, 4>& q) {
  // Shorter diagonal first: the choice is geometric, so mirror images of a
  // warped panel are split the same way.
  const double d13 = dot(q[2] - q[0], q[2] - q[0]);
  const double d24 = dot(q[3] - q[1], q[3] - q[1]);
  if (d24 < d13) return {{{q[1], q[2], q[3]}, {q[1], q[3], q[0]}}};
  return {{{q[0], q[1], q[2]}, {q[0], q[2], q[3]}}};
}

double panel_doublet(const std::array<Point3, 4>& q, const Point3& p) {
  double phi = 0.0;
  for (const auto& t : split_quad(q)) {
    if (!negligible_triangle(t[0], t[1], t[2])) phi += triangle_doublet(t[0], t[1], t[2], p);
  }
  return phi;
}

double panel_source(const std::array<Point3, 4>& q, const Point3& p) {
  double phi = 0.0;
  for (const auto& t : split_quad(q)) {
    if (!negligible_triangle(t[0], t[1], t[2])) phi += triangle_source(t[0], t[1], t[2], p);
  }
  return phi;
}

Vec3 freestream(double alpha_deg, double beta_deg) {
  const double a = deg2rad(alpha_deg), b = deg2rad(beta_deg);
  return {std::cos(a) * std::cos(b), -std::sin(b), std::sin(a) * std::cos(b)};
}

PanelSolver::PanelSolver(SolverModel model, SolverOptions options) : model_(std::move(model)) {
  const auto& f = model_.flow;
  if (f.symmetry && f.beta != 0.0) throw Error(ErrorKind::InvalidModel, "symmetric half model needs zero sideslip");
  if (!(f.sref > 0.0) || !(f.cbar > 0.0) || !(f.span > 0.0)) {
    throw Error(ErrorKind::InvalidModel, "reference area, chord and span must be positive");
  }
  if (model_.compressibility == Compressibility::PrandtlGlauert && f.mach > 0.0) {
    if (!(f.mach < 0.8)) {
      throw Error(ErrorKind::InvalidModel, "Prandtl-Glauert scaling needs a subsonic Mach number below 0.8");
    }
    pg_factor_ = 1.0 / std::sqrt(1.0 - f.mach * f.mach);
  }
  build_panels();
  build_wakes();
  assemble(std::max(1u, options.threads));
  factorize();
}

void PanelSolver::build_panels() {
  net_first_panel_.assign(model_.networks.size(), 0);
  for (std::size_t n = 0; n < model_.networks.size(); ++n) {
    const auto& net = model_.networks[n];
    net_first_panel_[n] = panels_.size();
    if (net.bc_class() == BoundaryClass::Wake) continue;
    for (std::size_t r = 0; r + 1 < net.n_rows(); ++r) {
      for (std::size_t c = 0; c + 1 < net.n_cols(); ++c) {
        Panel p;
        p.net = n;
        p.row = r;
        p.col = c;
        p.corners = net.panel_corners(r, c);
        PanelMetrics m;
        try {
          m = panel_metrics(p.corners[0], p.corners[1], p.corners[2], p.corners[3]);
        } catch (const Error&) {
          throw Error(ErrorKind::DegeneratePanel, "panel (" + std::to_string(r) + ", " + std::to_string(c) +
                                                      ") of '" + net.name() + "' is degenerate");
        }
        if (!(m.area > 0.0)) {
          throw Error(ErrorKind::DegeneratePanel, "panel (" + std::to_string(r) + ", " + std::to_string(c) +
                                                      ") of '" + net.name() + "' has zero area");
        }
        p.normal = m.unit_normal;
        p.area = 0.0;
        Point3 weighted{};
        for (const auto& t : split_quad(p.corners)) {
          const double a = 0.5 * norm(cross(t[1] - t[0], t[2] - t[0]));
          p.area += a;
          weighted += (t[0] + t[1] + t[2]) * (a / 3.0);
        }
        p.centroid = weighted / p.area;
        // Offset inside by a fraction of the panel's narrow width; thin trailing-edge
        // panels are sensitive to anything coarser.
        const double diag = std::max(distance(p.corners[0], p.corners[2]), distance(p.corners[1], p.corners[3]));
        p.collocation = p.centroid - p.normal * (1e-6 * p.area / diag);
        panels_.push_back(p);
      }
    }
  }
  if (panels_.empty()) throw Error(ErrorKind::InvalidModel, "model has no body panels");
}

void PanelSolver::build_wakes() {
  std::map<std::string, std::size_t> by_name;
  for (std::size_t n = 0; n < model_.networks.size(); ++n) by_name[model_.networks[n].name()] = n;
  auto lookup = [&](const std::string& name) {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw Error(ErrorKind::InvalidModel, "wake link names unknown network '" + name + "'");
    return it->second;
  };
  for (std::size_t li = 0; li < model_.wakes.size(); ++li) {
    const auto& link = model_.wakes[li];
    const std::size_t w = lookup(link.wake), u = lookup(link.upper), l = lookup(link.lower);
    const auto& wn = model_.networks[w];
    const auto& un = model_.networks[u];
    const auto& ln = model_.networks[l];
    if (wn.bc_class() != BoundaryClass::Wake || un.bc_class() == BoundaryClass::Wake ||
        ln.bc_class() == BoundaryClass::Wake) {
      throw Error(ErrorKind::InvalidModel, "wake link '" + link.wake + "' must join a wake to two body networks");
    }
    if (wn.n_cols() != un.n_rows() || un.n_rows() != ln.n_rows()) {
      throw Error(ErrorKind::InvalidModel, "wake '" + link.wake + "' does not follow the rows of '" + link.upper + "'");
    }
    const double tol = 1e-6 * std::max(1.0, bounding_box(std::vector<StructuredNetwork>{un}).diagonal());
    for (std::size_t k = 0; k < wn.n_cols(); ++k) {
      if (distance(wn.at(0, k), un.at(k, 0)) > tol || distance(wn.at(0, k), ln.at(k, ln.n_cols() - 1)) > tol) {
        throw Error(ErrorKind::InvalidModel, "wake '" + link.wake + "' is not attached to the trailing edge at column " +
                                                 std::to_string(k));
      }
    }
    for (std::size_t k = 0; k + 1 < wn.n_cols(); ++k) {
      Strip s;
      s.link = li;
      s.wake_net = w;
      s.k = k;
      s.upper_panel = net_first_panel_[u] + k * (un.n_cols() - 1);
      s.lower_panel = net_first_panel_[l] + k * (ln.n_cols() - 1) + (ln.n_cols() - 2);
      const auto q = wn.panel_corners(0, k);
      Vec3 nw{0, 0, 1};
      try {
        nw = panel_normal(q[0], q[1], q[2], q[3]);
      } catch (const Error&) {
        throw Error(ErrorKind::DegeneratePanel, "wake '" + link.wake + "' strip " + std::to_string(k) + " is degenerate");
      }
      const double d = dot(nw, panels_[s.upper_panel].normal - panels_[s.lower_panel].normal);
      s.sign = d < 0.0 ? -1.0 : 1.0;
      strips_.push_back(s);
    }
  }
}

void PanelSolver::assemble(unsigned threads) {
  const auto n = static_cast<Eigen::Index>(panels_.size());
  A_.resize(n, n);
  B_.resize(n, n);
  const bool sym = model_.flow.symmetry;

  std::vector<std::array<Point3, 4>> wake_q;
  for (const auto& s : strips_) wake_q.push_back(model_.networks[s.wake_net].panel_corners(0, s.k));

  auto rows = [&](Eigen::Index begin, Eigen::Index end) {
    for (Eigen::Index i = begin; i < end; ++i) {
      const Point3& p = panels_[static_cast<std::size_t>(i)].collocation;
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto& q = panels_[static_cast<std::size_t>(j)].corners;
        double d = i == j ? -0.5 : panel_doublet(q, p);
        double s = panel_source(q, p);
        if (sym) {
          const auto qi = mirror(q);
          d += panel_doublet(qi, p);
          s += panel_source(qi, p);
        }
        A_(i, j) = d;
        B_(i, j) = s;
      }
      for (std::size_t w = 0; w < strips_.size(); ++w) {
        double d = panel_doublet(wake_q[w], p);
        if (sym) d += panel_doublet(mirror(wake_q[w]), p);
        const auto& st = strips_[w];
        A_(i, static_cast<Eigen::Index>(st.upper_panel)) += st.sign * d;
        A_(i, static_cast<Eigen::Index>(st.lower_panel)) -= st.sign * d;
      }
    }
  };

  const auto nt = static_cast<Eigen::Index>(std::min<std::size_t>(threads, panels_.size()));
  if (nt <= 1) {
    rows(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const Eigen::Index chunk = (n + nt - 1) / nt;
  for (Eigen::Index t = 0; t < nt; ++t) {
    const Eigen::Index b = t * chunk, e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back(rows, b, e);
  }
  for (auto& th : pool) th.join();
}

void PanelSolver::factorize() {
  lu_.compute(A_);
  rcond_ = lu_.rcond();
  if (!(rcond_ > 1e-14)) {
    const auto& lu = lu_.matrixLU();
    Eigen::Index worst = 0;
    for (Eigen::Index i = 1; i < lu.rows(); ++i) {
      if (std::abs(lu(i, i)) < std::abs(lu(worst, worst))) worst = i;
    }
    const auto& idx = lu_.permutationP().indices();
    Eigen::Index orig = worst;
    for (Eigen::Index k = 0; k < idx.size(); ++k) {
      if (idx(k) == worst) orig = k;
    }
    const auto& p = panels_[static_cast<std::size_t>(orig)];
    throw Error(ErrorKind::SingularMatrix, "influence matrix is singular (rcond " + std::to_string(rcond_) +
                                               "); worst row is panel (" + std::to_string(p.row) + ", " +
                                               std::to_string(p.col) + ") of '" + model_.networks[p.net].name() +
                                               "' (duplicate or unflagged degenerate panels?)");
  }
}

std::vector<double> PanelSolver::tangential_gradient_cp(const Eigen::VectorXd& mu, const Vec3& vinf,
                                                        std::size_t net_index, std::size_t first) const {
  const auto& net = model_.networks[net_index];
  const std::size_t R = net.n_rows() - 1, C = net.n_cols() - 1;
  const double scale = std::max(1e-300, bounding_box(std::vector<StructuredNetwork>{net}).diagonal());
  const double tol = 1e-9 * scale;

  auto edge_coincide = [&](GridEdge a, GridEdge b) {
    const auto pa = net.edge_points(a), pb = net.edge_points(b);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      if (distance(pa[i], pb[i]) > tol) return false;
    }
    return true;
  };
  auto on_plane = [&](GridEdge e) {
    if (!model_.flow.symmetry) return false;
    const auto pts = net.edge_points(e);
    return std::all_of(pts.begin(), pts.end(), [&](const Point3& p) { return std::abs(p.y) <= tol; });
  };
  const bool wrap_c = C > 1 && edge_coincide(GridEdge::FirstCol, GridEdge::LastCol);
  const bool wrap_r = R > 1 && edge_coincide(GridEdge::FirstRow, GridEdge::LastRow);
  const bool ghost_c0 = on_plane(GridEdge::FirstCol), ghost_c1 = on_plane(GridEdge::LastCol);
  const bool ghost_r0 = on_plane(GridEdge::FirstRow), ghost_r1 = on_plane(GridEdge::LastRow);

  auto idx = [&](std::size_t r, std::size_t c) { return first + r * C + c; };
  struct Sample {
    Point3 x;
    double mu;
  };
  // Neighbour samples on either side along one grid direction.
  auto neighbours = [&](std::size_t r, std::size_t c, bool along_cols, std::optional<Sample>& lo,
                        std::optional<Sample>& hi) {
    const std::size_t n = along_cols ? C : R;
    const std::size_t i = along_cols ? c : r;
    const bool wrap = along_cols ? wrap_c : wrap_r;
    const bool g0 = along_cols ? ghost_c0 : ghost_r0;
    const bool g1 = along_cols ? ghost_c1 : ghost_r1;
    auto at = [&](std::size_t k) {
      const std::size_t pi = along_cols ? idx(r, k) : idx(k, c);
      return Sample{panels_[pi].centroid, mu(static_cast<Eigen::Index>(pi))};
    };
    const Sample self = at(i);
    if (i > 0) lo = at(i - 1);
    else if (wrap) lo = at(n - 1);
    else if (g0) lo = Sample{mirror(self.x), self.mu};
    if (i + 1 < n) hi = at(i + 1);
    else if (wrap) hi = at(0);
    else if (g1) hi = Sample{mirror(self.x), self.mu};
  };

  std::vector<double> cp(R * C, 0.0);
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      const std::size_t pi = idx(r, c);
      const auto& P = panels_[pi];
      const Vec3& n = P.normal;
      const Sample self{P.centroid, mu(static_cast<Eigen::Index>(pi))};
      std::vector<std::pair<Vec3, double>> dirs;
      for (bool along_cols : {true, false}) {
        std::optional<Sample> lo, hi;
        neighbours(r, c, along_cols, lo, hi);
        Vec3 e{};
        double dm = 0.0;
        if (lo && hi) {
          e = hi->x - lo->x;
          dm = hi->mu - lo->mu;
        } else if (hi) {
          e = hi->x - self.x;
          dm = hi->mu - self.mu;
        } else if (lo) {
          e = self.x - lo->x;
          dm = self.mu - lo->mu;
        } else {
          continue;
        }
        e = e - n * dot(e, n);
        if (dot(e, e) > 0.0) dirs.emplace_back(e, dm);
      }
      Vec3 g{};
      if (dirs.size() == 2) {
        const Vec3& e1 = dirs[0].first;
        const Vec3& e2 = dirs[1].first;
        const double g11 = dot(e1, e1), g12 = dot(e1, e2), g22 = dot(e2, e2);
        const double det = g11 * g22 - g12 * g12;
        if (det > 1e-12 * g11 * g22) {
          const double a = (g22 * dirs[0].second - g12 * dirs[1].second) / det;
          const double b = (g11 * dirs[1].second - g12 * dirs[0].second) / det;
          g = e1 * a + e2 * b;
        } else {
          g = e1 * (dirs[0].second / g11);
        }
      } else if (dirs.size() == 1) {
        g = dirs[0].first * (dirs[0].second / dot(dirs[0].first, dirs[0].first));
      }
      const Vec3 vt = vinf - n * dot(vinf, n) + g;
      cp[r * C + c] = (1.0 - dot(vt, vt)) * pg_factor_;
    }
  }
  return cp;
}

double PanelSolver::trefftz_cdi(const std::vector<double>& strip_mu) const {
  // Each wake trace becomes a polyline in the Trefftz plane carrying a
  // continuous, piecewise-linear potential jump: strip values sit at strip
  // midpoints and fall to zero at free edges. Every segment is then a vortex
  // sheet of constant strength, so the kinetic-energy integral stays finite.
  struct Node {
    Point3 x;
    double mu;
  };
  struct Sheet {
    Point3 a;
    Vec3 u, m;  // unit tangent and in-plane normal (e x u)
    double len, mu_a, mu_b;
  };
  const bool sym = model_.flow.symmetry;
  std::vector<Sheet> sheets;
  auto add_polyline = [&](const std::vector<Node>& nodes, const Vec3& e) {
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const Vec3 d = nodes[i + 1].x - nodes[i].x;
      const double len = norm(d);
      if (len == 0.0) continue;
      const Vec3 u = d / len;
      sheets.push_back({nodes[i].x, u, cross(e, u), len, nodes[i].mu, nodes[i + 1].mu});
    }
  };

  std::size_t i = 0;
  while (i < strips_.size()) {
    const std::size_t link = strips_[i].link;
    const auto& wn = model_.networks[strips_[i].wake_net];
    Vec3 e{};
    for (std::size_t k = 0; k < wn.n_cols(); ++k) e += wn.at(1, k) - wn.at(0, k);
    e = normalized(e);
    auto proj = [&](const Point3& p) { return p - e * dot(p, e); };

    std::vector<Node> mid;
    std::size_t j = i;
    for (; j < strips_.size() && strips_[j].link == link; ++j) {
      const std::size_t k = strips_[j].k;
      mid.push_back({proj((wn.at(0, k) + wn.at(0, k + 1)) * 0.5), strip_mu[j]});
    }
    const Point3 first = proj(wn.at(0, strips_[i].k));
    const Point3 last = proj(wn.at(0, strips_[j - 1].k + 1));
    const double tol = 1e-9 * std::max(1e-300, distance(first, last));
    auto mirrored = [&](std::vector<Node> nodes) {
      std::reverse(nodes.begin(), nodes.end());
      for (auto& n : nodes) n.x = mirror(n.x);
      return nodes;
    };

    std::vector<Node> line{{first, 0.0}};
    line.insert(line.end(), mid.begin(), mid.end());
    line.push_back({last, 0.0});
    if (!sym) {
      add_polyline(line, e);
    } else if (std::abs(first.y) <= tol) {
      // Trace continues through the plane of symmetry into its image.
      std::vector<Node> full = mirrored(std::vector<Node>(line.begin() + 1, line.end()));
      full.insert(full.end(), line.begin() + 1, line.end());
      add_polyline(full, mirror(e));
    } else if (std::abs(last.y) <= tol) {
      std::vector<Node> full(line.begin(), line.end() - 1);
      const auto image = mirrored(std::vector<Node>(line.begin(), line.end() - 1));
      full.insert(full.end(), image.begin(), image.end());
      add_polyline(full, e);
    } else {
      add_polyline(line, e);
      add_polyline(mirrored(line), mirror(e));
    }
    i = j;
  }

  // Velocity induced in the Trefftz plane by all sheets.
  auto velocity = [&](const Point3& x) {
    Vec3 v{};
    for (const auto& sh : sheets) {
      const double c = -(sh.mu_b - sh.mu_a) / sh.len;
      if (c == 0.0) continue;
      const Vec3 r0 = x - sh.a;
      const double xi = dot(r0, sh.u), eta = dot(r0, sh.m);
      const double d0 = xi * xi + eta * eta;
      const double d1 = (xi - sh.len) * (xi - sh.len) + eta * eta;
      if (d0 == 0.0 || d1 == 0.0) continue;  // at a sheet end: integrable, skipped by the quadrature
      const double theta = std::atan2(sh.len * eta, eta * eta + xi * (xi - sh.len));
      v += (sh.m * (0.5 * std::log(d0 / d1)) - sh.u * theta) * (c / (2.0 * std::numbers::pi));
    }
    return v;
  };

  // Cosine-graded Gauss rule on each sheet tames the logarithmic end behaviour.
  using Rule = boost::math::quadrature::gauss<double, 30>;
  double sum = 0.0;
  for (const auto& sh : sheets) {
    auto f = [&](double tau) {
      const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * tau));
      const double jac = 0.5 * std::numbers::pi * std::sin(std::numbers::pi * tau);
      const Point3 x = sh.a + sh.u * (t * sh.len);
      const double mu = sh.mu_a + (sh.mu_b - sh.mu_a) * t;
      return mu * dot(velocity(x), sh.m) * jac;
    };
    sum += Rule::integrate(f, 0.0, 1.0) * sh.len;
  }
  return -sum / model_.flow.sref;
}

CaseResult PanelSolver::solve(double alpha_deg) const {
  const Vec3 vinf = freestream(alpha_deg, model_.flow.beta);
  const auto n = static_cast<Eigen::Index>(panels_.size());
  Eigen::VectorXd sigma(n);
  for (Eigen::Index j = 0; j < n; ++j) sigma(j) = -dot(vinf, panels_[static_cast<std::size_t>(j)].normal);
  const Eigen::VectorXd b = -(B_ * sigma);
  Eigen::VectorXd mu = lu_.solve(b);
  Eigen::VectorXd res = A_ * mu - b;
  const double bnorm = b.lpNorm<Eigen::Infinity>();
  auto rel = [&](const Eigen::VectorXd& r) { return bnorm > 0.0 ? r.lpNorm<Eigen::Infinity>() / bnorm : r.lpNorm<Eigen::Infinity>(); };
  if (rel(res) > 1e-10) {
    mu -= lu_.solve(res);  // one step of iterative refinement
    res = A_ * mu - b;
  }

  CaseResult out;
  out.alpha = alpha_deg;
  out.residual = rel(res);
  if (!(out.residual <= 1e-10)) {
    throw Error(ErrorKind::SingularMatrix, "linear solve residual " + std::to_string(out.residual) + " exceeds 1e-10");
  }

  const auto& f = model_.flow;
  const Point3 ref{f.xref, f.yref, f.zref};
  Vec3 force{}, moment{};
  for (std::size_t ni = 0; ni < model_.networks.size(); ++ni) {
    const auto& net = model_.networks[ni];
    if (net.bc_class() == BoundaryClass::Wake) continue;
    const std::size_t first = net_first_panel_[ni];
    const std::size_t R = net.n_rows() - 1, C = net.n_cols() - 1;
    NetworkSolution ns;
    ns.name = net.name();
    ns.n_rows = net.n_rows();
    ns.n_cols = net.n_cols();
    ns.panel_cp = tangential_gradient_cp(mu, vinf, ni, first);
    for (std::size_t k = 0; k < R * C; ++k) {
      const auto& P = panels_[first + k];
      ns.mu.push_back(mu(static_cast<Eigen::Index>(first + k)));
      ns.sigma.push_back(sigma(static_cast<Eigen::Index>(first + k)));
      const Vec3 dF = P.normal * (-ns.panel_cp[k] * P.area);
      force += dF;
      moment += cross(P.centroid - ref, dF);
    }
    // Node values: area-weighted mean of the adjacent panels.
    const bool wrap_c = [&] {
      for (std::size_t r = 0; r < net.n_rows(); ++r) {
        if (distance(net.at(r, 0), net.at(r, C)) > 1e-12 * std::max(1.0, norm(net.at(r, 0)))) return false;
      }
      return C > 1;
    }();
    ns.node_cp.assign(net.n_rows() * net.n_cols(), 0.0);
    for (std::size_t r = 0; r < net.n_rows(); ++r) {
      for (std::size_t c = 0; c < net.n_cols(); ++c) {
        double wsum = 0.0, acc = 0.0;
        auto add = [&](std::size_t pr, std::size_t pc) {
          const double a = panels_[first + pr * C + pc].area;
          wsum += a;
          acc += a * ns.panel_cp[pr * C + pc];
        };
        for (std::size_t pr : {r - 1, r}) {
          if (pr >= R) continue;  // also rejects r - 1 wrapping below zero
          if (c < C) add(pr, c);
          if (c > 0) add(pr, c - 1);
          if (wrap_c && c == 0) add(pr, C - 1);
          if (wrap_c && c == C) add(pr, 0);
        }
        ns.node_cp[r * net.n_cols() + c] = wsum > 0.0 ? acc / wsum : 0.0;
      }
    }
    out.networks.push_back(std::move(ns));
  }

  if (f.symmetry) {
    force = {2.0 * force.x, 0.0, 2.0 * force.z};
    moment = {0.0, 2.0 * moment.y, 0.0};
  }
  const double a = deg2rad(alpha_deg);
  const Vec3 lift_dir{-std::sin(a), 0.0, std::cos(a)};
  const Vec3 side_dir = cross(lift_dir, vinf);
  out.cl = dot(force, lift_dir) / f.sref;
  out.cdi_nearfield = dot(force, vinf) / f.sref;
  out.cy = dot(force, side_dir) / f.sref;
  out.cm = moment.y / (f.sref * f.cbar);
  out.croll = moment.x / (f.sref * f.span);
  out.cn = moment.z / (f.sref * f.span);

  std::vector<double> strip_mu;
  out.wake_mu.assign(model_.wakes.size(), {});
  for (const auto& s : strips_) {
    const double m = s.sign * (mu(static_cast<Eigen::Index>(s.upper_panel)) - mu(static_cast<Eigen::Index>(s.lower_panel)));
    strip_mu.push_back(m * pg_factor_);
    out.wake_mu[s.link].push_back(m);
  }
  out.cdi_trefftz = strips_.empty() ? 0.0 : trefftz_cdi(strip_mu);
  return out;
}

SolutionSet PanelSolver::sweep(const std::vector<double>& alphas_deg) const {
  SolutionSet set;
  set.mach = model_.flow.mach;
  set.symmetry = model_.flow.symmetry;
  for (double a : alphas_deg) set.cases.push_back(solve(a));
  return set;
}

}  // namespace panelkit
