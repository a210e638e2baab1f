#include "panelkit/pipeline.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <signal.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "panelkit/error.hpp"
#include "panelkit/results_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace panelkit {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) config_error("'" + where + "' must be an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      config_error("unknown key '" + k + "' in " + where);
    }
  }
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) config_error("missing key '" + std::string(key) + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error("bad value for '" + std::string(key) + "' in " + where + ": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, const std::string& where, T fallback) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path q(p);
  return q.is_absolute() ? q : base / q;
}

/// Executables without a slash are looked up on PATH at run time.
std::string resolve_exe(const fs::path& base, const std::string& p) {
  if (p.empty() || p.find('/') == std::string::npos) return p;
  return resolve(base, p).string();
}

ComponentType component_type_from(const std::string& s) {
  if (s == "fuselage") return ComponentType::Fuselage;
  if (s == "wing") return ComponentType::Wing;
  if (s == "htail") return ComponentType::HTail;
  config_error("unknown component type '" + s + "' (fuselage, wing, htail)");
}

RingMode ring_from(const std::string& s) {
  if (s == "auto") return RingMode::Auto;
  if (s == "open") return RingMode::Open;
  if (s == "closed") return RingMode::Closed;
  config_error("unknown ring mode '" + s + "' (auto, open, closed)");
}

Vec3 vec_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) config_error(where + " must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

const char* kind_key(ComponentKind k) {
  switch (k) {
    case ComponentKind::WingUpper: return "wing_upper";
    case ComponentKind::WingLower: return "wing_lower";
    case ComponentKind::Fuselage: return "fuselage";
    case ComponentKind::HTailUpper: return "htail_upper";
    case ComponentKind::HTailLower: return "htail_lower";
    case ComponentKind::Wake: return "wake";
  }
  return "fuselage";
}

ComponentKind kind_from_key(const std::string& s) {
  for (auto k : {ComponentKind::WingUpper, ComponentKind::WingLower, ComponentKind::Fuselage, ComponentKind::HTailUpper,
                 ComponentKind::HTailLower, ComponentKind::Wake}) {
    if (s == kind_key(k)) return k;
  }
  throw Error(ErrorKind::ParseError, "unknown network kind '" + s + "'");
}

bool is_pipeline_file(const fs::path& rel) {
  const std::string first = rel.begin()->string();
  if (rel == "manifest.json" || rel == ".lock") return false;
  if (first == "04_raw") {
    auto it = rel.begin();
    ++it;
    if (it != rel.end() && (*it == "work" || *it == "quarantine")) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- config

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base) {
  check_keys(j, "config", {"title", "mesh", "output_dir", "symmetry", "station_tol", "components", "flow", "abutment",
                           "wake", "solver", "viscous", "post", "force"});
  PipelineConfig c;
  c.title = get_or<std::string>(j, "title", "config", c.title);
  c.mesh = resolve(base, get<std::string>(j, "mesh", "config"));
  c.output_dir = resolve(base, get<std::string>(j, "output_dir", "config"));
  c.station_tol = get_or(j, "station_tol", "config", c.station_tol);
  c.force = get_or(j, "force", "config", false);

  const json& comps = j.contains("components") ? j.at("components") : json::array();
  if (!comps.is_array() || comps.empty()) config_error("'components' must be a non-empty array");
  for (const auto& cj : comps) {
    check_keys(cj, "component", {"name", "type", "axis", "ring", "wake"});
    ComponentConfig cc;
    cc.name = get<std::string>(cj, "name", "component");
    cc.type = component_type_from(get<std::string>(cj, "type", "component '" + cc.name + "'"));
    const std::string def_axis = cc.type == ComponentType::Fuselage ? "x" : "y";
    try {
      cc.axis = axis_from_string(get_or<std::string>(cj, "axis", "component", def_axis));
    } catch (const Error& e) {
      config_error(e.what());
    }
    cc.ring = ring_from(get_or<std::string>(cj, "ring", "component", "auto"));
    cc.wake = get_or(cj, "wake", "component", true);
    c.components.push_back(cc);
  }

  if (!j.contains("flow")) config_error("missing 'flow' section");
  const json& f = j.at("flow");
  check_keys(f, "flow", {"mach", "alphas", "beta", "sref", "span", "cbar", "xref", "yref", "zref"});
  c.flow.mach = get<double>(f, "mach", "flow");
  c.flow.alphas = get<std::vector<double>>(f, "alphas", "flow");
  c.flow.beta = get_or(f, "beta", "flow", 0.0);
  c.flow.sref = get<double>(f, "sref", "flow");
  c.flow.span = get<double>(f, "span", "flow");
  c.flow.cbar = get<double>(f, "cbar", "flow");
  c.flow.xref = get_or(f, "xref", "flow", 0.0);
  c.flow.yref = get_or(f, "yref", "flow", 0.0);
  c.flow.zref = get_or(f, "zref", "flow", 0.0);
  c.flow.symmetry = get_or(j, "symmetry", "config", false);

  if (j.contains("abutment")) {
    const json& a = j.at("abutment");
    check_keys(a, "abutment", {"tolerance", "weld", "weld_max_gap"});
    if (a.contains("tolerance")) c.abutment_tol = get<double>(a, "tolerance", "abutment");
    if (a.contains("weld_max_gap")) c.weld_max_gap = get<double>(a, "weld_max_gap", "abutment");
    const std::string w = get_or<std::string>(a, "weld", "abutment", "midpoint");
    if (w == "off") c.weld = WeldPolicy::Off;
    else if (w == "midpoint") c.weld = WeldPolicy::Midpoint;
    else if (w == "one_sided") c.weld = WeldPolicy::OneSided;
    else config_error("unknown weld policy '" + w + "' (off, midpoint, one_sided)");
  }

  if (j.contains("wake")) {
    const json& w = j.at("wake");
    check_keys(w, "wake", {"length_chords", "direction"});
    c.wake.length_chords = get_or(w, "length_chords", "wake", c.wake.length_chords);
    if (w.contains("direction")) c.wake.direction = vec_from(w.at("direction"), "wake.direction");
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    check_keys(s, "solver", {"backend", "jobs", "compressibility", "panin", "panair", "timeout_s"});
    const std::string b = get_or<std::string>(s, "backend", "solver", "embedded");
    if (b == "embedded") c.backend = Backend::Embedded;
    else if (b == "external") c.backend = Backend::External;
    else config_error("unknown backend '" + b + "' (embedded, external)");
    c.jobs = get_or(s, "jobs", "solver", 1u);
    const std::string comp = get_or<std::string>(s, "compressibility", "solver", "prandtl_glauert");
    if (comp == "prandtl_glauert") c.compressibility = Compressibility::PrandtlGlauert;
    else if (comp == "none") c.compressibility = Compressibility::None;
    else config_error("unknown compressibility '" + comp + "' (prandtl_glauert, none)");
    c.external.panin = resolve_exe(base, get_or<std::string>(s, "panin", "solver", ""));
    c.external.panair = resolve_exe(base, get_or<std::string>(s, "panair", "solver", ""));
    c.external.timeout_s = get_or(s, "timeout_s", "solver", c.external.timeout_s);
  }

  if (j.contains("viscous")) {
    const json& v = j.at("viscous");
    check_keys(v, "viscous", {"velocity_mph", "velocity", "reynolds", "reference_length", "speed_of_sound", "components"});
    if (v.contains("velocity_mph")) c.viscous_flight.velocity = get<double>(v, "velocity_mph", "viscous") * kMphToFps;
    if (v.contains("velocity")) c.viscous_flight.velocity = get<double>(v, "velocity", "viscous");
    c.viscous_flight.reynolds = get<double>(v, "reynolds", "viscous");
    c.viscous_flight.reference_length = get_or(v, "reference_length", "viscous", c.flow.cbar);
    c.viscous_flight.speed_of_sound = get_or(v, "speed_of_sound", "viscous", kSeaLevelSoundFps);
    for (const auto& item : v.value("components", json::array())) {
      check_keys(item, "viscous component", {"name", "wetted_area", "length", "form_factor", "tw_over_t"});
      ComponentWettedItem it;
      it.name = get<std::string>(item, "name", "viscous component");
      it.wetted_area = get<double>(item, "wetted_area", "viscous component '" + it.name + "'");
      it.characteristic_length = get<double>(item, "length", "viscous component '" + it.name + "'");
      it.form_factor = get_or(item, "form_factor", "viscous component", 1.0);
      it.tw_over_t = get_or(item, "tw_over_t", "viscous component", 1.0);
      c.viscous_items.push_back(it);
    }
  }

  if (j.contains("post")) {
    const json& p = j.at("post");
    check_keys(p, "post", {"viewer"});
    c.viewer = get_or<std::string>(p, "viewer", "post", "");
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  if (!fs::exists(path)) config_error("config file " + path.string() + " does not exist");
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    config_error(path.string() + ": " + e.what());
  }
  return from_json(j, fs::absolute(path).parent_path());
}

void PipelineConfig::validate() const {
  if (!fs::is_regular_file(mesh)) config_error("mesh file " + mesh.string() + " does not exist");
  if (output_dir.empty()) config_error("output_dir is empty");
  if (!(station_tol > 0.0)) config_error("station_tol must be positive");
  if (abutment_tol && !(*abutment_tol > 0.0)) config_error("abutment tolerance must be positive");
  if (weld_max_gap && !(*weld_max_gap >= 0.0)) config_error("weld_max_gap must be non-negative");
  if (!(wake.length_chords > 0.0)) config_error("wake length must be positive");
  if (jobs == 0) config_error("jobs must be at least 1");
  std::set<std::string> names;
  for (const auto& c : components) {
    if (c.name.empty() || c.name.find_first_of(" \t'\"") != std::string::npos) {
      config_error("component name '" + c.name + "' must be a single word");
    }
    if (!names.insert(c.name).second) config_error("duplicate component '" + c.name + "'");
  }
  if (backend == Backend::External) {
    if (external.panair.empty()) config_error("external backend needs solver.panair");
    for (const auto& exe : {external.panin, external.panair}) {
      if (!exe.empty() && exe.find('/') != std::string::npos && access(exe.c_str(), X_OK) != 0) {
        config_error("executable " + exe + " is not runnable");
      }
    }
    if (!(external.timeout_s > 0.0)) config_error("timeout_s must be positive");
  }
  if (!viscous_items.empty() && !(viscous_flight.velocity > 0.0)) config_error("viscous velocity must be positive");
  flow.validate();
}

// ---------------------------------------------------------------- model

bool BuiltModel::orientation_ok() const {
  return std::all_of(orientation.begin(), orientation.end(),
                     [](const OrientationEntry& e) { return e.fraction_outward == 1.0; });
}

std::string BuiltModel::orientation_text() const {
  std::string s = "orientation (fraction of panels facing outward)\n";
  char buf[160];
  for (const auto& e : orientation) {
    std::snprintf(buf, sizeof buf, "  %-24s %.6f  offending %zu\n", e.network.c_str(), e.fraction_outward, e.offending);
    s += buf;
  }
  s += orientation_ok() ? "PASS\n" : "FAIL\n";
  return s;
}

BuiltModel build_model(const PipelineConfig& cfg) {
  BuiltModel m;
  {
    std::ifstream in(cfg.mesh, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot read mesh " + cfg.mesh.string());
    m.mesh = parse_msh(in);
  }
  m.symmetry = cfg.flow.symmetry;
  if (m.symmetry) {
    const bool has_port_side = std::any_of(m.mesh.nodes.begin(), m.mesh.nodes.end(),
                                           [&](const auto& kv) { return kv.second.y < -cfg.station_tol; });
    if (has_port_side) m.mesh = crop_to_half_model(m.mesh, cfg.station_tol);
  }

  std::vector<StructuredNetwork> bodies;
  std::vector<StructuredNetwork> wakes;
  for (const auto& comp : cfg.components) {
    auto sections = extract_sections(m.mesh, comp.name, comp.axis, cfg.station_tol);
    if (comp.type == ComponentType::Fuselage) {
      bodies.push_back(build_fuselage(sections, comp.name, comp.ring));
      continue;
    }
    for (auto& s : sections) s = close_loop(std::move(s));
    const auto kind = comp.type == ComponentType::Wing ? LiftingKind::Wing : LiftingKind::HTail;
    LiftingSurface surf = build_lifting_surface(sections, kind, comp.name, cfg.station_tol);
    if (comp.wake) {
      const std::string wname = comp.name + "_wake";
      wakes.push_back(attach_wake(surf, cfg.wake, wname, cfg.station_tol));
      m.wakes.push_back({wname, surf.upper.name(), surf.lower.name()});
      m.wake_specs.push_back({wname, surf.upper.name(), surf.lower.name(), cfg.wake.length_chords, cfg.wake.direction});
    }
    bodies.push_back(std::move(surf.upper));
    bodies.push_back(std::move(surf.lower));
  }
  m.networks = std::move(bodies);
  for (auto& w : wakes) m.networks.push_back(std::move(w));

  m.abutment_tol = cfg.abutment_tol ? *cfg.abutment_tol : default_abutment_tolerance(m.networks);
  if (cfg.weld != WeldPolicy::Off) {
    const double gap = cfg.weld_max_gap ? *cfg.weld_max_gap : m.abutment_tol;
    m.welded_points = weld_edges(m.networks, gap, cfg.weld == WeldPolicy::Midpoint ? SnapMode::Midpoint : SnapMode::OneSided);
  }
  m.abutment = abutment_report(m.networks, m.abutment_tol, m.symmetry);

  for (const auto& net : m.networks) {
    DirectionField ref;
    switch (net.kind()) {
      case ComponentKind::WingLower:
      case ComponentKind::HTailLower: ref = downward_reference(); break;
      case ComponentKind::Fuselage: ref = fuselage_radial_reference(net); break;
      default: ref = upward_reference(); break;
    }
    const auto rep = check_orientation(net, ref);
    m.orientation.push_back({net.name(), rep.fraction_outward, rep.offending.size()});
  }
  return m;
}

std::string networks_to_json(const std::vector<StructuredNetwork>& nets) {
  // Coordinates in shortest round-trip form so the file reloads exactly.
  std::string s = "{\n  \"networks\": [\n";
  for (std::size_t n = 0; n < nets.size(); ++n) {
    const auto& net = nets[n];
    s += "    {\"name\": \"" + net.name() + "\", \"kind\": \"" + kind_key(net.kind()) +
         "\", \"rows\": " + std::to_string(net.n_rows()) + ", \"cols\": " + std::to_string(net.n_cols()) +
         ", \"collapsed\": [";
    for (int e = 0; e < 4; ++e) {
      s += std::string(e ? ", " : "") + (net.edge_collapsed(static_cast<GridEdge>(e)) ? "true" : "false");
    }
    s += "],\n     \"points\": [";
    const auto pts = net.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      s += std::string(i ? ",\n                " : "") + "[" + shortest(pts[i].x) + ", " + shortest(pts[i].y) + ", " +
           shortest(pts[i].z) + "]";
    }
    s += "]}";
    s += n + 1 < nets.size() ? ",\n" : "\n";
  }
  s += "  ]\n}\n";
  return s;
}

std::vector<StructuredNetwork> networks_from_json(const std::string& text) {
  std::vector<StructuredNetwork> out;
  try {
    const json j = json::parse(text);
    for (const auto& nj : j.at("networks")) {
      std::vector<Point3> pts;
      for (const auto& p : nj.at("points")) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
      StructuredNetwork net(nj.at("name").get<std::string>(), kind_from_key(nj.at("kind").get<std::string>()),
                            nj.at("rows").get<std::size_t>(), nj.at("cols").get<std::size_t>(), std::move(pts));
      const auto& col = nj.at("collapsed");
      for (int e = 0; e < 4; ++e) net.flag_collapsed(static_cast<GridEdge>(e), col.at(e).get<bool>());
      out.push_back(std::move(net));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("networks file: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------- hashing, lock

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

DirectoryLock::DirectoryLock(const fs::path& dir) : path_(dir / ".lock") {
  fs::create_directories(dir);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const int fd = open(path_.c_str(), O_WRONLY | O_CREAT | O_EXCL, 0644);
    if (fd >= 0) {
      const std::string pid = std::to_string(getpid()) + "\n";
      if (write(fd, pid.data(), pid.size()) < 0) {
        close(fd);
        throw Error(ErrorKind::IoError, "cannot write " + path_.string());
      }
      close(fd);
      return;
    }
    // A lock left behind by a dead process is taken over.
    long owner = 0;
    {
      std::ifstream in(path_);
      in >> owner;
    }
    if (owner > 0 && (kill(static_cast<pid_t>(owner), 0) == 0 || errno == EPERM)) break;
    std::error_code ec;
    fs::remove(path_, ec);
  }
  throw Error(ErrorKind::IoError, "output directory " + dir.string() + " is locked by another run");
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

// ---------------------------------------------------------------- stages

Pipeline::Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {}

fs::path Pipeline::stage_dir(int stage) const {
  static const char* names[] = {"", "01_mesh", "02_networks", "03_decks", "04_raw", "05_post"};
  return cfg_.output_dir / names[stage];
}

void Pipeline::write_artifact(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + p.string());
}

void Pipeline::update_manifest() {
  std::vector<fs::path> files;
  if (fs::exists(cfg_.output_dir)) {
    for (const auto& e : fs::recursive_directory_iterator(cfg_.output_dir)) {
      if (!e.is_regular_file()) continue;
      const fs::path rel = fs::relative(e.path(), cfg_.output_dir);
      if (is_pipeline_file(rel)) files.push_back(rel);
    }
  }
  std::sort(files.begin(), files.end());
  ordered_json j;
  j["format"] = "panelkit-manifest-1";
  j["files"] = ordered_json::array();
  for (const auto& rel : files) {
    const std::string data = read_file(cfg_.output_dir / rel);
    j["files"].push_back({{"path", rel.generic_string()}, {"bytes", data.size()}, {"sha256", sha256_hex(data)}});
  }
  write_artifact(cfg_.output_dir / "manifest.json", j.dump(2) + "\n");
}

CheckOutcome Pipeline::check() {
  cfg_.validate();
  DirectoryLock lock(cfg_.output_dir);
  const BuiltModel m = build_model(cfg_);
  write_artifact(stage_dir(1) / "mesh.msh", write_msh(m.mesh));
  write_artifact(stage_dir(2) / "networks.json", networks_to_json(m.networks));
  write_artifact(stage_dir(2) / "abutment.txt", m.abutment.to_text());
  write_artifact(stage_dir(2) / "abutment.json", m.abutment.to_json());
  write_artifact(stage_dir(2) / "orientation.txt", m.orientation_text());
  update_manifest();

  CheckOutcome out;
  std::size_t panels = 0;
  for (const auto& n : m.networks) {
    if (n.kind() != ComponentKind::Wake) panels += n.n_panels();
  }
  out.report = "networks: " + std::to_string(m.networks.size()) + ", body panels: " + std::to_string(panels) +
               ", welded points: " + std::to_string(m.welded_points) + "\n" + m.abutment.to_text() +
               m.orientation_text();
  out.exit_code = m.abutment.passed() && m.orientation_ok() ? 0 : 1;
  return out;
}

void Pipeline::prep() {
  cfg_.validate();
  DirectoryLock lock(cfg_.output_dir);
  const BuiltModel m = build_model(cfg_);
  std::error_code ec;
  for (int stage : {3, 4, 5}) fs::remove_all(stage_dir(stage), ec);
  write_artifact(stage_dir(1) / "mesh.msh", write_msh(m.mesh));
  write_artifact(stage_dir(2) / "networks.json", networks_to_json(m.networks));
  write_artifact(stage_dir(2) / "abutment.txt", m.abutment.to_text());
  write_artifact(stage_dir(2) / "abutment.json", m.abutment.to_json());
  write_artifact(stage_dir(2) / "orientation.txt", m.orientation_text());

  if (!m.orientation_ok() && !cfg_.force) {
    update_manifest();
    throw Error(ErrorKind::UnresolvedAbutment, "right-hand-rule check failed:\n" + m.orientation_text());
  }

  AuxDeck aux;
  aux.title = cfg_.title;
  aux.flow = cfg_.flow;
  aux.flow.symmetry = m.symmetry;
  for (const auto& n : m.networks) aux.boundaries.push_back({n.name(), bc_code_for(n)});
  aux.wakes = m.wake_specs;
  aux.lawgs_file = "model.wgs";
  const LawgsObject lawgs = to_lawgs(cfg_.title, m.networks, m.symmetry);

  A502Deck deck;
  try {
    deck = assemble_a502(lawgs, aux, {&m.abutment, cfg_.force});
  } catch (...) {
    update_manifest();
    throw;
  }
  write_artifact(stage_dir(3) / "model.wgs", write_lawgs(lawgs));
  write_artifact(stage_dir(3) / "model.aux", write_aux(aux));
  write_artifact(stage_dir(3) / "a502.in", write_a502(deck));
  update_manifest();
}

void Pipeline::run() {
  DirectoryLock lock(cfg_.output_dir);
  const fs::path raw = stage_dir(4);
  std::error_code ec;
  for (const char* f : {"model.agps", "model.ffmf", "model.ffm"}) fs::remove(raw / f, ec);
  fs::remove_all(stage_dir(5), ec);

  const fs::path aux_path = stage_dir(3) / "model.aux";
  const fs::path nets_path = stage_dir(2) / "networks.json";
  if (!fs::exists(aux_path) || !fs::exists(nets_path)) {
    update_manifest();
    throw Error(ErrorKind::ConfigError, "run needs the prep artifacts in " + cfg_.output_dir.string());
  }
  const AuxDeck aux = parse_aux(read_file(aux_path));

  AgpsDocument agps;
  FfmfSummary full;
  if (cfg_.backend == Backend::Embedded) {
    SolverModel model;
    model.networks = networks_from_json(read_file(nets_path));
    for (const auto& w : aux.wakes) model.wakes.push_back({w.wake, w.upper, w.lower});
    model.flow = aux.flow;
    model.compressibility = cfg_.compressibility;
    const PanelSolver solver(model, {cfg_.jobs});
    const SolutionSet sol = solver.sweep(aux.flow.alphas);
    agps = agps_from_solution(aux.title, model.networks, sol);
    full = ffmf_from_solution(sol);
  } else {
    ExternalOutputs ext;
    try {
      ext = run_external_solver(cfg_.external, stage_dir(3), raw / "work", raw / "quarantine");
    } catch (...) {
      update_manifest();
      throw;
    }
    agps = parse_agps(ext.agps_text, true);
    full = parse_ffmf(ext.ffmf_text);
    fs::remove_all(raw / "work", ec);
  }
  fs::remove_all(raw / "quarantine", ec);
  full.full = true;
  write_artifact(raw / "model.agps", write_agps(agps));
  write_artifact(raw / "model.ffmf", write_ffmf(full));
  if (aux.flow.symmetry) write_artifact(raw / "model.ffm", write_ffmf(half_from_full(full)));
  update_manifest();
}

void Pipeline::post() {
  DirectoryLock lock(cfg_.output_dir);
  const fs::path raw = stage_dir(4);
  if (!fs::exists(raw / "model.agps") || !fs::exists(raw / "model.ffmf")) {
    throw Error(ErrorKind::ConfigError, "post needs solver output in " + raw.string());
  }
  const AgpsDocument agps = parse_agps(read_file(raw / "model.agps"));
  const FfmfSummary ffmf = parse_ffmf(read_file(raw / "model.ffmf"));
  if (fs::exists(raw / "model.ffm")) {
    const FfmfSummary half = parse_ffmf(read_file(raw / "model.ffm"));
    if (!doubling_consistent(half, ffmf)) {
      throw Error(ErrorKind::MalformedFfmf, "half and full force summaries disagree");
    }
  }

  double cd0 = 0.0;
  std::string viscous_text = "no viscous components configured; CD0 = 0\n";
  if (!cfg_.viscous_items.empty()) {
    const ParasiteDrag pd = parasite_drag(cfg_.viscous_items, cfg_.viscous_flight, cfg_.flow.sref);
    cd0 = pd.cd0;
    viscous_text = pd.to_text();
  }

  const fs::path out = stage_dir(5);
  write_artifact(out / "model.dat", write_tecplot_dat(agps));
  write_artifact(out / "model.mcr", write_macro("model.dat", agps.alphas, agps.networks.size()));
  write_artifact(out / "polar.csv", write_polar_csv(ffmf, cd0));
  write_artifact(out / "viscous.txt", viscous_text);
  update_manifest();

  if (!cfg_.viewer.empty()) {
    // Best effort; the viewer's exit status does not affect the pipeline.
    run_process({cfg_.viewer, "model.mcr"}, out, "", 3600.0, ".viewer");
    std::error_code ec;
    for (const char* f : {".viewer.stdin", ".viewer.stdout", ".viewer.stderr"}) fs::remove(out / f, ec);
  }
}

void Pipeline::all() {
  prep();
  run();
  post();
}

}  // namespace panelkit
