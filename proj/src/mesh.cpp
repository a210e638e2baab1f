#include "panelkit/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include "panelkit/error.hpp"
#include "panelkit/point_index.hpp"

namespace panelkit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) lines_.push_back(trim(line));
  }
  bool done() const { return pos_ >= lines_.size(); }
  const std::string& next() { return lines_[pos_++]; }
  std::size_t line_no() const { return pos_; }  // 1-based number of the last line read

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::MalformedMesh, "line " + std::to_string(line_no()) + ": " + what);
  }

  const std::string& expect_line(const std::string& block) {
    if (done()) fail("unexpected end of file inside " + block);
    return next();
  }

 private:
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

template <typename T>
T to_number(const std::string& tok, const LineReader& rd) {
  T v{};
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) rd.fail("bad number '" + tok + "'");
  return v;
}

std::size_t read_count(LineReader& rd, const std::string& block) {
  const auto toks = split_ws(rd.expect_line(block));
  if (toks.size() != 1) rd.fail("expected a record count in " + block);
  const long n = to_number<long>(toks[0], rd);
  if (n < 0) rd.fail("negative count in " + block);
  return static_cast<std::size_t>(n);
}

void read_format(LineReader& rd) {
  const auto toks = split_ws(rd.expect_line("$MeshFormat"));
  if (toks.size() != 3) rd.fail("malformed $MeshFormat record");
  if (toks[0] != "2.2") {
    throw Error(ErrorKind::UnsupportedMeshVersion,
                "MSH version " + toks[0] + " is not supported; expected ASCII version 2.2");
  }
  if (toks[1] != "0") {
    throw Error(ErrorKind::UnsupportedMeshVersion, "binary MSH is not supported; expected ASCII version 2.2");
  }
  if (rd.expect_line("$MeshFormat") != "$EndMeshFormat") rd.fail("expected $EndMeshFormat");
}

void read_physical_names(LineReader& rd, RawMesh& mesh) {
  const std::size_t n = read_count(rd, "$PhysicalNames");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& line = rd.expect_line("$PhysicalNames");
    if (line.rfind("$End", 0) == 0) rd.fail("declared " + std::to_string(n) + " physical names, found " + std::to_string(i));
    const auto q1 = line.find('"');
    const auto q2 = line.rfind('"');
    if (q1 == std::string::npos || q2 == q1) rd.fail("physical name must be quoted");
    const auto toks = split_ws(line.substr(0, q1));
    if (toks.size() != 2) rd.fail("malformed physical name record");
    PhysicalName pn{to_number<int>(toks[0], rd), line.substr(q1 + 1, q2 - q1 - 1)};
    mesh.physical_names[to_number<long>(toks[1], rd)] = pn;
  }
  if (rd.expect_line("$PhysicalNames") != "$EndPhysicalNames") rd.fail("expected $EndPhysicalNames");
}

void read_nodes(LineReader& rd, RawMesh& mesh) {
  const std::size_t n = read_count(rd, "$Nodes");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& line = rd.expect_line("$Nodes");
    if (line.rfind("$End", 0) == 0) {
      rd.fail("node block declares " + std::to_string(n) + " nodes but holds " + std::to_string(i));
    }
    const auto toks = split_ws(line);
    if (toks.size() != 4) rd.fail("node record needs 'id x y z'");
    const Point3 p{to_number<double>(toks[1], rd), to_number<double>(toks[2], rd), to_number<double>(toks[3], rd)};
    if (!is_finite(p)) rd.fail("non-finite node coordinate");
    if (!mesh.nodes.emplace(to_number<long>(toks[0], rd), p).second) rd.fail("duplicate node id " + toks[0]);
  }
  if (rd.expect_line("$Nodes") != "$EndNodes") {
    rd.fail("node block declares " + std::to_string(n) + " nodes but holds more");
  }
}

void read_elements(LineReader& rd, RawMesh& mesh) {
  const std::size_t n = read_count(rd, "$Elements");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& line = rd.expect_line("$Elements");
    if (line.rfind("$End", 0) == 0) {
      rd.fail("element block declares " + std::to_string(n) + " elements but holds " + std::to_string(i));
    }
    const auto toks = split_ws(line);
    if (toks.size() < 3) rd.fail("element record too short");
    MeshElement el;
    el.id = to_number<long>(toks[0], rd);
    const int type = to_number<int>(toks[1], rd);
    if (type != 2 && type != 3) rd.fail("unsupported element type " + toks[1] + " (accepted: 2 tri, 3 quad)");
    el.type = static_cast<ElementType>(type);
    const auto ntags = to_number<std::size_t>(toks[2], rd);
    const std::size_t nn = type == 2 ? 3 : 4;
    if (toks.size() != 3 + ntags + nn) rd.fail("element " + toks[0] + " has the wrong number of fields");
    for (std::size_t t = 0; t < ntags; ++t) el.tags.push_back(to_number<long>(toks[3 + t], rd));
    for (std::size_t k = 0; k < nn; ++k) {
      const long id = to_number<long>(toks[3 + ntags + k], rd);
      if (!mesh.nodes.contains(id)) rd.fail("element " + toks[0] + " references unknown node " + toks[3 + ntags + k]);
      el.nodes.push_back(id);
    }
    mesh.elements.push_back(std::move(el));
  }
  if (rd.expect_line("$Elements") != "$EndElements") {
    rd.fail("element block declares " + std::to_string(n) + " elements but holds more");
  }
}

void rebuild_groups(RawMesh& mesh) {
  mesh.groups.clear();
  for (const auto& el : mesh.elements) {
    if (el.tags.empty()) continue;
    auto it = mesh.physical_names.find(el.tags.front());
    const std::string name = it != mesh.physical_names.end() ? it->second.name : std::to_string(el.tags.front());
    mesh.groups[name].push_back(el.id);
  }
}

}  // namespace

std::vector<long> RawMesh::component_nodes(const std::string& component) const {
  auto g = groups.find(component);
  if (g == groups.end()) return {};
  std::set<long> ids(g->second.begin(), g->second.end());
  std::set<long> out;
  for (const auto& el : elements) {
    if (!ids.contains(el.id)) continue;
    out.insert(el.nodes.begin(), el.nodes.end());
  }
  return {out.begin(), out.end()};
}

RawMesh parse_msh(std::istream& in) {
  LineReader rd(in);
  RawMesh mesh;
  bool have_format = false, have_nodes = false, have_elements = false;
  while (!rd.done()) {
    const std::string line = rd.next();
    if (line.empty()) continue;
    if (line == "$MeshFormat") {
      read_format(rd);
      have_format = true;
    } else if (!have_format) {
      rd.fail("file must start with $MeshFormat");
    } else if (line == "$PhysicalNames") {
      read_physical_names(rd, mesh);
    } else if (line == "$Nodes") {
      read_nodes(rd, mesh);
      have_nodes = true;
    } else if (line == "$Elements") {
      if (!have_nodes) rd.fail("$Elements before $Nodes");
      read_elements(rd, mesh);
      have_elements = true;
    } else if (line.size() > 1 && line[0] == '$') {
      const std::string end = "$End" + line.substr(1);
      const std::size_t start = rd.line_no();
      while (!rd.done() && rd.next() != end) {
      }
      mesh.warnings.push_back("skipped unknown section " + line + " at line " + std::to_string(start));
    } else {
      rd.fail("unexpected content '" + line + "'");
    }
  }
  if (!have_format) throw Error(ErrorKind::MalformedMesh, "missing $MeshFormat section");
  if (!have_nodes) throw Error(ErrorKind::MalformedMesh, "missing $Nodes section");
  if (!have_elements) throw Error(ErrorKind::MalformedMesh, "missing $Elements section");
  rebuild_groups(mesh);
  return mesh;
}

RawMesh parse_msh_text(const std::string& text) {
  std::istringstream is(text);
  return parse_msh(is);
}

std::string write_msh(const RawMesh& mesh) {
  std::string out = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  char buf[128];
  if (!mesh.physical_names.empty()) {
    out += "$PhysicalNames\n" + std::to_string(mesh.physical_names.size()) + "\n";
    for (const auto& [tag, pn] : mesh.physical_names) {
      out += std::to_string(pn.dim) + " " + std::to_string(tag) + " \"" + pn.name + "\"\n";
    }
    out += "$EndPhysicalNames\n";
  }
  out += "$Nodes\n" + std::to_string(mesh.nodes.size()) + "\n";
  for (const auto& [id, p] : mesh.nodes) {
    std::snprintf(buf, sizeof buf, "%ld %.17g %.17g %.17g\n", id, p.x, p.y, p.z);
    out += buf;
  }
  out += "$EndNodes\n$Elements\n" + std::to_string(mesh.elements.size()) + "\n";
  for (const auto& el : mesh.elements) {
    out += std::to_string(el.id) + " " + std::to_string(static_cast<int>(el.type)) + " " +
           std::to_string(el.tags.size());
    for (long t : el.tags) out += " " + std::to_string(t);
    for (long n : el.nodes) out += " " + std::to_string(n);
    out += "\n";
  }
  out += "$EndElements\n";
  return out;
}

long add_physical_group(RawMesh& mesh, const std::string& name) {
  for (const auto& [tag, pn] : mesh.physical_names) {
    if (pn.name == name) return tag;
  }
  const long tag = mesh.physical_names.empty() ? 1 : mesh.physical_names.rbegin()->first + 1;
  mesh.physical_names[tag] = {2, name};
  return tag;
}

Axis axis_from_string(const std::string& s) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  throw Error(ErrorKind::ParseError, "axis must be x, y or z, got '" + s + "'");
}

std::string to_string(Axis a) { return a == Axis::X ? "x" : (a == Axis::Y ? "y" : "z"); }

std::vector<Point3> order_clockwise(std::vector<Point3> points, Axis axis) {
  if (points.size() < 2) return points;
  const Vec3 up = axis == Axis::Z ? Vec3{0, 1, 0} : Vec3{0, 0, 1};
  Vec3 toward_viewer{};
  if (axis == Axis::X) toward_viewer = {1, 0, 0};
  if (axis == Axis::Y) toward_viewer = {0, 1, 0};
  if (axis == Axis::Z) toward_viewer = {0, 0, 1};
  const Vec3 right = cross(up, toward_viewer);

  Point3 c{};
  for (const auto& p : points) c += p;
  c = c / static_cast<double>(points.size());

  struct Keyed {
    Point3 p;
    double angle;
    double radius;
    double height;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(points.size());
  for (const auto& p : points) {
    const Vec3 d = p - c;
    double a = std::atan2(dot(d, right), dot(d, up));
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    keyed.push_back({p, a, norm(d - toward_viewer * dot(d, toward_viewer)), dot(d, up)});
  }
  const auto top = std::max_element(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.height != b.height) return a.height < b.height;
    return a.angle > b.angle;
  });
  const double a0 = top->angle;
  for (auto& k : keyed) {
    k.angle -= a0;
    if (k.angle < 0.0) k.angle += 2.0 * std::numbers::pi;
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.angle != b.angle) return a.angle < b.angle;
    if (a.radius != b.radius) return a.radius < b.radius;
    if (a.p.x != b.p.x) return a.p.x < b.p.x;
    if (a.p.y != b.p.y) return a.p.y < b.p.y;
    return a.p.z < b.p.z;
  });
  for (std::size_t i = 0; i < keyed.size(); ++i) points[i] = keyed[i].p;
  return points;
}

std::vector<CrossSection> extract_sections(const RawMesh& mesh, const std::string& component, Axis axis,
                                           double station_tol) {
  const auto ids = mesh.component_nodes(component);
  if (ids.empty()) throw Error(ErrorKind::EmptyComponent, "component '" + component + "' has no elements");

  const auto ax = static_cast<std::size_t>(axis);
  std::vector<Point3> pts;
  pts.reserve(ids.size());
  for (long id : ids) pts.push_back(mesh.nodes.at(id));
  std::sort(pts.begin(), pts.end(), [ax](const Point3& a, const Point3& b) {
    if (a[ax] != b[ax]) return a[ax] < b[ax];
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
  });

  std::vector<std::vector<Point3>> clusters;
  for (const auto& p : pts) {
    if (clusters.empty() || p[ax] - clusters.back().back()[ax] > station_tol) clusters.emplace_back();
    clusters.back().push_back(p);
  }
  if (clusters.size() < 2) {
    throw Error(ErrorKind::AmbiguousStations,
                "component '" + component + "' collapses to a single station at tolerance " + std::to_string(station_tol));
  }

  std::vector<CrossSection> sections;
  for (auto& cl : clusters) {
    if (cl.back()[ax] - cl.front()[ax] > 2.0 * station_tol) {
      throw Error(ErrorKind::AmbiguousStations, "station cluster near " + std::to_string(cl.front()[ax]) +
                                                    " spans more than twice the tolerance");
    }
    CrossSection s;
    for (const auto& p : cl) s.station += p[ax];
    s.station /= static_cast<double>(cl.size());
    s.points = std::move(cl);
    sections.push_back(std::move(s));
  }
  for (std::size_t i = 1; i < sections.size(); ++i) {
    if (sections[i].station - sections[i - 1].station < 2.0 * station_tol) {
      throw Error(ErrorKind::AmbiguousStations, "stations " + std::to_string(sections[i - 1].station) + " and " +
                                                    std::to_string(sections[i].station) + " are closer than 2*tol");
    }
  }

  for (auto& s : sections) {
    if (s.points.size() == 2) {
      throw Error(ErrorKind::MalformedMesh, "section at station " + std::to_string(s.station) + " of '" + component +
                                                "' has only two points");
    }
    s.points = order_clockwise(std::move(s.points), axis);
  }
  return sections;
}

RawMesh crop_to_half_model(const RawMesh& mesh, double tol) {
  RawMesh out;
  out.physical_names = mesh.physical_names;
  out.warnings = mesh.warnings;
  std::set<long> dropped;
  for (const auto& [name, elems] : mesh.groups) {
    const auto ids = mesh.component_nodes(name);
    PointIndex<long> index(std::max(tol, 1e-300) * 4.0);
    for (long id : ids) index.insert(mesh.nodes.at(id), id);
    for (long id : ids) {
      const Point3& p = mesh.nodes.at(id);
      if (std::abs(p.y) <= tol) continue;
      if (!index.nearest({p.x, -p.y, p.z}, tol)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "node %ld (%.6g, %.6g, %.6g) of '%s' has no mirror image", id, p.x, p.y, p.z,
                      name.c_str());
        throw Error(ErrorKind::AsymmetricGeometry, buf);
      }
    }
  }
  for (const auto& [id, p] : mesh.nodes) {
    if (p.y < -tol) dropped.insert(id);
  }
  std::set<long> used;
  for (const auto& el : mesh.elements) {
    const bool keep = std::none_of(el.nodes.begin(), el.nodes.end(), [&](long n) { return dropped.contains(n); });
    if (!keep) continue;
    out.elements.push_back(el);
    used.insert(el.nodes.begin(), el.nodes.end());
  }
  for (long id : used) {
    Point3 p = mesh.nodes.at(id);
    if (std::abs(p.y) <= tol) p.y = 0.0;
    out.nodes.emplace(id, p);
  }
  rebuild_groups(out);
  return out;
}

}  // namespace panelkit
