#include "panelkit/results_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "panelkit/deck_io.hpp"
#include "panelkit/error.hpp"

namespace panelkit {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool to_double(const std::string& s, double& v) {
  const char* b = s.data();
  if (!s.empty() && s.front() == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(v);
}

bool to_size(const std::string& s, std::size_t& v) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

[[noreturn]] void agps_error(const std::string& net, std::size_t line, const std::string& what) {
  std::string msg = "line " + std::to_string(line);
  if (!net.empty()) msg += " (network '" + net + "')";
  throw Error(ErrorKind::MalformedAgps, msg + ": " + what);
}

[[noreturn]] void ffmf_error(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::MalformedFfmf, "line " + std::to_string(line) + ": " + what);
}

std::string alpha_label(double a) { return shortest(a); }

}  // namespace

std::size_t AgpsDocument::total_nodes() const {
  std::size_t n = 0;
  for (const auto& net : networks) n += net.n_rows * net.n_cols;
  return n;
}

std::string write_agps(const AgpsDocument& doc) {
  std::string s = doc.title.empty() ? "AGPS\n" : "AGPS " + doc.title + "\n";
  s += "CASES " + std::to_string(doc.alphas.size());
  for (double a : doc.alphas) s += " " + shortest(a);
  s += '\n';
  for (const auto& net : doc.networks) {
    s += "NETWORK " + net.name + " " + std::to_string(net.n_rows) + " " + std::to_string(net.n_cols) + " " +
         std::to_string(net.cp.size()) + "\n";
    for (std::size_t i = 0; i < net.points.size(); ++i) {
      const auto& p = net.points[i];
      s += shortest(p.x) + " " + shortest(p.y) + " " + shortest(p.z);
      for (const auto& col : net.cp) s += " " + shortest(col.at(i));
      s += '\n';
    }
  }
  s += "END\n";
  return s;
}

AgpsDocument parse_agps(const std::string& text, bool tolerant) {
  const auto lines = lines_of(text);
  std::size_t i = 0;
  auto skippable = [&](const std::string& l) {
    if (!tolerant) return false;
    const auto t = l.find_first_not_of(" \t");
    return t == std::string::npos || l[t] == '#';
  };
  auto next = [&]() -> const std::string* {
    while (i < lines.size() && skippable(lines[i])) ++i;
    if (i >= lines.size()) return nullptr;
    return &lines[i++];
  };

  AgpsDocument doc;
  const std::string* l = next();
  if (!l || l->rfind("AGPS", 0) != 0 || (l->size() > 4 && (*l)[4] != ' ')) agps_error("", i, "expected AGPS header");
  if (l->size() > 5) doc.title = l->substr(5);

  l = next();
  if (!l) agps_error("", i, "missing CASES line");
  auto tok = split_ws(*l);
  std::size_t n_cases = 0;
  if (tok.size() < 2 || tok[0] != "CASES" || !to_size(tok[1], n_cases) || tok.size() != n_cases + 2) {
    agps_error("", i, "bad CASES line");
  }
  for (std::size_t k = 0; k < n_cases; ++k) {
    double a;
    if (!to_double(tok[k + 2], a)) agps_error("", i, "bad alpha '" + tok[k + 2] + "'");
    doc.alphas.push_back(a);
  }

  while (true) {
    l = next();
    if (!l) agps_error("", i, "missing END");
    tok = split_ws(*l);
    if (tok.size() == 1 && tok[0] == "END") break;
    AgpsNetwork net;
    std::size_t nc = 0;
    if (tok.size() != 5 || tok[0] != "NETWORK" || !to_size(tok[2], net.n_rows) || !to_size(tok[3], net.n_cols) ||
        !to_size(tok[4], nc)) {
      agps_error(tok.size() > 1 ? tok[1] : "", i, "bad NETWORK header");
    }
    net.name = tok[1];
    if (nc != n_cases) agps_error(net.name, i, "case count differs from CASES");
    if (net.n_rows == 0 || net.n_cols == 0) agps_error(net.name, i, "empty grid");

    // Column order: indices 0..2 are x, y, z; 3.. are the cases.
    std::vector<std::size_t> order(3 + nc);
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    if (tolerant && i < lines.size()) {
      const std::size_t save = i;
      const std::string* c = next();
      auto ct = c ? split_ws(*c) : std::vector<std::string>{};
      if (!ct.empty() && ct[0] == "COLUMNS") {
        if (ct.size() != order.size() + 1) agps_error(net.name, i, "COLUMNS count mismatch");
        std::vector<bool> seen(order.size(), false);
        for (std::size_t k = 0; k < order.size(); ++k) {
          std::string name = ct[k + 1];
          std::transform(name.begin(), name.end(), name.begin(), ::toupper);
          std::size_t slot = 0;
          if (name == "X") slot = 0;
          else if (name == "Y") slot = 1;
          else if (name == "Z") slot = 2;
          else if (name == "CP" && nc == 1) slot = 3;
          else if (name.rfind("CP", 0) == 0 && to_size(name.substr(2), slot) && slot >= 1 && slot <= nc) slot += 2;
          else agps_error(net.name, i, "unknown column '" + ct[k + 1] + "'");
          if (seen[slot]) agps_error(net.name, i, "duplicate column '" + ct[k + 1] + "'");
          seen[slot] = true;
          order[k] = slot;
        }
      } else {
        i = save;
      }
    }

    const std::size_t n_nodes = net.n_rows * net.n_cols;
    net.points.resize(n_nodes);
    net.cp.assign(nc, std::vector<double>(n_nodes));
    std::vector<double> vals(order.size());
    for (std::size_t r = 0; r < n_nodes; ++r) {
      l = next();
      if (!l) agps_error(net.name, i, "truncated: " + std::to_string(r) + " of " + std::to_string(n_nodes) + " records");
      tok = split_ws(*l);
      if (tok.size() != order.size()) {
        agps_error(net.name, i, "record " + std::to_string(r) + " has " + std::to_string(tok.size()) + " fields");
      }
      for (std::size_t k = 0; k < tok.size(); ++k) {
        if (!to_double(tok[k], vals[order[k]])) agps_error(net.name, i, "bad number '" + tok[k] + "'");
      }
      net.points[r] = {vals[0], vals[1], vals[2]};
      for (std::size_t k = 0; k < nc; ++k) net.cp[k][r] = vals[3 + k];
    }
    doc.networks.push_back(std::move(net));
  }
  while (i < lines.size()) {
    if (lines[i].find_first_not_of(" \t") != std::string::npos) agps_error("", i + 1, "text after END");
    ++i;
  }
  return doc;
}

std::string write_ffmf(const FfmfSummary& s) {
  std::string out = std::string("FFMF ") + (s.full ? "full" : "half") + "\n";
  out += "MACH " + shortest(s.mach) + "\n";
  out += "COLUMNS ALPHA CL CDI CM CY CROLL CN\n";
  for (const auto& r : s.rows) {
    out += shortest(r.alpha) + " " + shortest(r.cl) + " " + shortest(r.cdi) + " " + shortest(r.cm) + " " +
           shortest(r.cy) + " " + shortest(r.croll) + " " + shortest(r.cn) + "\n";
  }
  out += "END\n";
  return out;
}

FfmfSummary parse_ffmf(const std::string& text) {
  const auto lines = lines_of(text);
  FfmfSummary s;
  std::size_t i = 0;
  auto need = [&](const char* what) -> std::vector<std::string> {
    if (i >= lines.size()) ffmf_error(i, std::string("missing ") + what);
    return split_ws(lines[i++]);
  };

  auto tok = need("FFMF header");
  if (tok.size() != 2 || tok[0] != "FFMF" || (tok[1] != "full" && tok[1] != "half")) ffmf_error(i, "bad FFMF header");
  s.full = tok[1] == "full";
  tok = need("MACH line");
  if (tok.size() != 2 || tok[0] != "MACH" || !to_double(tok[1], s.mach)) ffmf_error(i, "bad MACH line");
  tok = need("COLUMNS line");
  if (tok != std::vector<std::string>{"COLUMNS", "ALPHA", "CL", "CDI", "CM", "CY", "CROLL", "CN"}) {
    ffmf_error(i, "bad COLUMNS line");
  }
  while (true) {
    tok = need("END");
    if (tok.size() == 1 && tok[0] == "END") break;
    if (tok.size() != 7) ffmf_error(i, "expected 7 values");
    double v[7];
    for (int k = 0; k < 7; ++k) {
      if (!to_double(tok[k], v[k])) ffmf_error(i, "bad number '" + tok[k] + "'");
    }
    if (!s.rows.empty() && !(v[0] > s.rows.back().alpha)) ffmf_error(i, "alphas must increase");
    s.rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  if (s.rows.empty()) ffmf_error(i, "empty table");
  for (; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") != std::string::npos) ffmf_error(i + 1, "text after END");
  }
  return s;
}

FfmfSummary full_from_half(const FfmfSummary& half) {
  FfmfSummary f = half;
  f.full = true;
  for (auto& r : f.rows) {
    r.cl *= 2.0;
    r.cdi *= 2.0;
    r.cm *= 2.0;
    r.cy = 0.0;
    r.croll = 0.0;
    r.cn = 0.0;
  }
  return f;
}

FfmfSummary half_from_full(const FfmfSummary& full) {
  FfmfSummary h = full;
  h.full = false;
  for (auto& r : h.rows) {
    r.cl *= 0.5;
    r.cdi *= 0.5;
    r.cm *= 0.5;
    r.cy = 0.0;
    r.croll = 0.0;
    r.cn = 0.0;
  }
  return h;
}

bool doubling_consistent(const FfmfSummary& half, const FfmfSummary& full, double tol) {
  if (half.full || !full.full || half.rows.size() != full.rows.size() || half.mach != full.mach) return false;
  const FfmfSummary expect = full_from_half(half);
  for (std::size_t k = 0; k < expect.rows.size(); ++k) {
    const auto& a = expect.rows[k];
    const auto& b = full.rows[k];
    const double d[] = {a.alpha - b.alpha, a.cl - b.cl, a.cdi - b.cdi, a.cm - b.cm,
                        a.cy - b.cy,       a.croll - b.croll, a.cn - b.cn};
    for (double x : d) {
      if (std::abs(x) > tol) return false;
    }
  }
  return true;
}

AgpsDocument agps_from_solution(const std::string& title, const std::vector<StructuredNetwork>& networks,
                                const SolutionSet& solution) {
  AgpsDocument doc;
  doc.title = title;
  for (const auto& c : solution.cases) doc.alphas.push_back(c.alpha);
  for (const auto& body : networks) {
    AgpsNetwork net;
    net.name = body.name();
    net.n_rows = body.n_rows();
    net.n_cols = body.n_cols();
    net.points.assign(body.points().begin(), body.points().end());
    for (const auto& c : solution.cases) {
      if (body.kind() == ComponentKind::Wake) {
        net.cp.emplace_back(net.points.size(), 0.0);
        continue;
      }
      const auto it = std::find_if(c.networks.begin(), c.networks.end(),
                                   [&](const NetworkSolution& s) { return s.name == body.name(); });
      if (it == c.networks.end() || it->node_cp.size() != net.points.size()) {
        throw Error(ErrorKind::InvalidModel, "no nodal solution for network '" + body.name() + "'");
      }
      net.cp.push_back(it->node_cp);
    }
    doc.networks.push_back(std::move(net));
  }
  return doc;
}

FfmfSummary ffmf_from_solution(const SolutionSet& solution) {
  FfmfSummary s;
  s.full = true;
  s.mach = solution.mach;
  for (const auto& c : solution.cases) {
    s.rows.push_back({c.alpha, c.cl, c.cdi_trefftz, c.cm, c.cy, c.croll, c.cn});
  }
  std::stable_sort(s.rows.begin(), s.rows.end(), [](const ForceRow& a, const ForceRow& b) { return a.alpha < b.alpha; });
  return s;
}

std::string write_tecplot_dat(const AgpsDocument& doc, const std::vector<double>& alphas) {
  std::vector<std::size_t> cases;
  if (alphas.empty()) {
    for (std::size_t k = 0; k < doc.alphas.size(); ++k) cases.push_back(k);
  } else {
    for (double a : alphas) {
      const auto it = std::find(doc.alphas.begin(), doc.alphas.end(), a);
      if (it == doc.alphas.end()) throw Error(ErrorKind::UnknownCase, "no case at alpha " + shortest(a));
      cases.push_back(static_cast<std::size_t>(it - doc.alphas.begin()));
    }
  }

  std::string s = "TITLE = \"" + doc.title + "\"\n";
  s += "VARIABLES = \"X\" \"Y\" \"Z\" \"CP\"\n";
  for (std::size_t k : cases) {
    for (const auto& net : doc.networks) {
      s += "ZONE T=\"" + net.name + " alpha=" + alpha_label(doc.alphas[k]) + "\", I=" + std::to_string(net.n_cols) +
           ", J=" + std::to_string(net.n_rows) + ", F=POINT\n";
      for (std::size_t n = 0; n < net.points.size(); ++n) {
        const auto& p = net.points[n];
        s += shortest(p.x) + " " + shortest(p.y) + " " + shortest(p.z) + " " + shortest(net.cp[k][n]) + "\n";
      }
    }
  }
  return s;
}

std::string write_macro(const std::string& dat_file, const std::vector<double>& alphas, std::size_t n_networks) {
  std::string s = "#!MC 1410\n";
  s += "$!READDATASET '\"" + dat_file + "\"'\n";
  s += "  READDATAOPTION = NEW\n";
  s += "  RESETSTYLE = YES\n";
  s += "$!PLOTTYPE = CARTESIAN3D\n";
  s += "$!GLOBALCONTOUR 1 VAR = 4\n";
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const std::size_t first = n_networks * k + 1;
    const std::size_t last = n_networks * (k + 1);
    s += "# contour alpha=" + alpha_label(alphas[k]) + "\n";
    s += "$!ACTIVEFIELDMAPS = [" + std::to_string(first) + "-" + std::to_string(last) + "]\n";
    s += "$!FIELDLAYERS SHOWCONTOUR = YES\n";
    s += "$!CONTOURLEVELS RESETTONICE\n";
    s += "  CONTOURGROUP = 1\n";
    s += "  APPROXNUMVALUES = 15\n";
    s += "$!REDRAWALL\n";
  }
  s += "# view isometric\n";
  s += "$!THREEDVIEW\n  PSIANGLE = 60\n  THETAANGLE = -135\n  ALPHAANGLE = 0\n";
  s += "$!VIEW FIT\n";
  s += "# view planform\n";
  s += "$!THREEDVIEW\n  PSIANGLE = 0\n  THETAANGLE = -90\n  ALPHAANGLE = 0\n";
  s += "$!VIEW FIT\n";
  return s;
}

std::string write_polar_csv(const FfmfSummary& s, double cd0) {
  std::string out = "alpha,CL,CDi,CD0,CD_total\n";
  for (const auto& r : s.rows) {
    out += shortest(r.alpha) + "," + shortest(r.cl) + "," + shortest(r.cdi) + "," + shortest(cd0) + "," +
           shortest(r.cdi + cd0) + "\n";
  }
  return out;
}

}  // namespace panelkit
