#include "panelkit/deck_io.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "panelkit/error.hpp"

namespace panelkit {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

bool parse_double(const std::string& tok, double& v) {
  std::string s = tok;
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(v);
}

bool parse_long(const std::string& tok, long& v) {
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

// Numbers on one line: whitespace-separated tokens, else fixed 10-column fields.
bool parse_number_line(const std::string& line, std::vector<double>& out) {
  std::vector<double> vals;
  bool ok = true;
  for (const auto& tok : split_ws(line)) {
    double v;
    if (!parse_double(tok, v)) {
      ok = false;
      break;
    }
    vals.push_back(v);
  }
  if (!ok) {
    vals.clear();
    std::string body = line;
    while (!body.empty() && body.back() == ' ') body.pop_back();
    for (std::size_t i = 0; i < body.size(); i += 10) {
      try {
        vals.push_back(parse_field10(body.substr(i, 10)));
      } catch (const Error&) {
        return false;
      }
    }
  }
  out.insert(out.end(), vals.begin(), vals.end());
  return true;
}

bool quoted(const std::string& s) { return s.size() >= 2 && s.front() == '\'' && s.back() == '\''; }

void check_name(const std::string& name, ErrorKind kind) {
  if (name.empty() || name.size() > 20 || name.find_first_of("'\" \t\n=$") != std::string::npos) {
    throw Error(kind, "network name '" + name + "' must be 1-20 characters without quotes, blanks, '=' or '$'");
  }
}

}  // namespace

void FlowConditions::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidFlowConditions, m); };
  if (!std::isfinite(mach) || mach < 0.0) bad("Mach number must be finite and non-negative");
  if (mach >= 0.8 && mach <= 1.2) bad("Mach " + shortest(mach) + " is transonic; the method needs M < 0.8 or M > 1.2");
  if (alphas.empty()) bad("at least one angle of attack is required");
  for (double a : alphas) {
    if (!std::isfinite(a) || std::abs(a) > 20.0) bad("angle of attack " + shortest(a) + " is outside [-20, 20] degrees");
  }
  if (!std::isfinite(beta) || std::abs(beta) > 90.0) bad("sideslip must lie within [-90, 90] degrees");
  if (symmetry && beta != 0.0) bad("a symmetric half model requires zero sideslip");
  if (!(sref > 0.0) || !(span > 0.0) || !(cbar > 0.0) || !std::isfinite(sref) || !std::isfinite(span) ||
      !std::isfinite(cbar)) {
    bad("reference area, span and chord must be positive");
  }
  if (!std::isfinite(xref) || !std::isfinite(yref) || !std::isfinite(zref)) bad("moment reference must be finite");
}

BcCode bc_code_for(const StructuredNetwork& net) {
  return net.bc_class() == BoundaryClass::Wake ? BcCode::Wake : BcCode::Impermeable;
}

LawgsObject to_lawgs(const std::string& title, const std::vector<StructuredNetwork>& networks, bool symmetry) {
  LawgsObject obj;
  obj.title = title;
  for (const auto& n : networks) {
    obj.networks.push_back(
        {n.name(), n.n_rows(), n.n_cols(), symmetry ? 1 : 0, std::vector<Point3>(n.points().begin(), n.points().end())});
  }
  return obj;
}

std::string write_lawgs(const LawgsObject& obj) {
  if (obj.title.find('\'') != std::string::npos || obj.title.find('\n') != std::string::npos) {
    throw Error(ErrorKind::MalformedLawgs, "title must not contain quotes or newlines");
  }
  std::string out = "'" + obj.title + "'\n";
  for (const auto& n : obj.networks) {
    check_name(n.name, ErrorKind::MalformedLawgs);
    if (n.n_rows < 2 || n.n_cols < 2 || n.points.size() != n.n_rows * n.n_cols) {
      throw Error(ErrorKind::GridSizeMismatch, "network '" + n.name + "' holds " + std::to_string(n.points.size()) +
                                                   " points for a " + std::to_string(n.n_rows) + "x" +
                                                   std::to_string(n.n_cols) + " grid");
    }
    out += "'" + n.name + "'\n";
    out += "1 " + std::to_string(n.n_rows) + " " + std::to_string(n.n_cols) + " " + std::to_string(n.isym) +
           " 0 0 0 0 0 0 1 1 1 0\n";
    std::vector<double> vals;
    vals.reserve(n.points.size() * 3);
    for (const auto& p : n.points) {
      vals.push_back(p.x);
      vals.push_back(p.y);
      vals.push_back(p.z);
    }
    out += format_records(vals);
  }
  return out;
}

LawgsObject parse_lawgs(const std::string& text) {
  const auto lines = split_lines(text);
  LawgsObject obj;
  std::size_t i = 0;
  auto fail = [&](const std::string& m) -> void {
    throw Error(ErrorKind::MalformedLawgs, "line " + std::to_string(i) + ": " + m);
  };
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i >= lines.size()) fail("empty file");
  {
    const std::string t = trim(lines[i++]);
    if (!quoted(t)) fail("title must be quoted");
    obj.title = t.substr(1, t.size() - 2);
  }
  while (i < lines.size()) {
    const std::string nm = trim(lines[i++]);
    if (nm.empty()) continue;
    if (!quoted(nm)) fail("expected a quoted network name");
    LawgsNetwork net;
    net.name = nm.substr(1, nm.size() - 2);
    if (net.name.empty()) fail("empty network name");
    if (i >= lines.size()) fail("network '" + net.name + "' has no header record");
    const auto hdr = split_ws(lines[i++]);
    long id = 0, nr = 0, nc = 0, isym = 0;
    if (hdr.size() < 4 || !parse_long(hdr[0], id) || !parse_long(hdr[1], nr) || !parse_long(hdr[2], nc) ||
        !parse_long(hdr[3], isym)) {
      fail("malformed header record for network '" + net.name + "'");
    }
    if (nr < 2 || nc < 2) {
      throw Error(ErrorKind::GridSizeMismatch, "network '" + net.name + "' declares a " + std::to_string(nr) + "x" +
                                                   std::to_string(nc) + " grid");
    }
    net.n_rows = static_cast<std::size_t>(nr);
    net.n_cols = static_cast<std::size_t>(nc);
    net.isym = static_cast<int>(isym);
    const std::size_t want = 3 * net.n_rows * net.n_cols;
    std::vector<double> vals;
    while (i < lines.size() && vals.size() < want) {
      const std::string t = trim(lines[i]);
      if (quoted(t)) break;
      ++i;
      if (t.empty()) continue;
      if (!parse_number_line(lines[i - 1], vals)) fail("bad numeric record in network '" + net.name + "'");
    }
    if (vals.size() < want) {
      if (i >= lines.size()) {
        fail("network '" + net.name + "' is truncated: " + std::to_string(vals.size()) + " of " +
             std::to_string(want) + " values");
      }
      throw Error(ErrorKind::GridSizeMismatch, "network '" + net.name + "' holds " + std::to_string(vals.size()) +
                                                   " values, expected " + std::to_string(want));
    }
    if (vals.size() > want) {
      throw Error(ErrorKind::GridSizeMismatch, "network '" + net.name + "' holds " + std::to_string(vals.size()) +
                                                   " values, expected " + std::to_string(want));
    }
    for (std::size_t k = 0; k < want; k += 3) net.points.push_back({vals[k], vals[k + 1], vals[k + 2]});
    obj.networks.push_back(std::move(net));
  }
  return obj;
}

std::string write_aux(const AuxDeck& aux) {
  aux.flow.validate();
  const auto& f = aux.flow;
  std::string out;
  auto kv = [&](const std::string& k, const std::string& v) { out += k + "=" + v + "\n"; };
  kv("TITLE", aux.title);
  kv("MACH", shortest(f.mach));
  std::string al;
  for (std::size_t i = 0; i < f.alphas.size(); ++i) al += (i ? " " : "") + shortest(f.alphas[i]);
  kv("ALPHA", al);
  kv("BETA", shortest(f.beta));
  kv("SREF", shortest(f.sref));
  kv("SPAN", shortest(f.span));
  kv("CBAR", shortest(f.cbar));
  kv("XREF", shortest(f.xref));
  kv("YREF", shortest(f.yref));
  kv("ZREF", shortest(f.zref));
  if (f.symmetry) kv("SYMM", "XZ");
  for (const auto& b : aux.boundaries) {
    check_name(b.network, ErrorKind::MalformedAux);
    kv("BOUN", b.network + " " + std::to_string(static_cast<int>(b.code)));
  }
  for (const auto& w : aux.wakes) {
    kv("WAKE", w.wake + " " + w.upper + " " + w.lower + " " + shortest(w.length_chords) + " " +
                   shortest(w.direction.x) + " " + shortest(w.direction.y) + " " + shortest(w.direction.z));
  }
  if (!aux.lawgs_file.empty()) kv("LAWGS", aux.lawgs_file);
  for (const auto& [k, v] : aux.extra) kv(k, v);
  return out;
}

AuxDeck parse_aux(const std::string& text) {
  AuxDeck aux;
  const auto lines = split_lines(text);
  std::map<std::string, bool> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = lines[i];
    auto fail = [&](const std::string& m) {
      throw Error(ErrorKind::MalformedAux, "line " + std::to_string(i + 1) + ": " + m);
    };
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected KEY=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = line.substr(eq + 1);
    auto num = [&](const std::string& tok) {
      double v;
      if (!parse_double(trim(tok), v)) fail("bad number '" + tok + "' for " + key);
      return v;
    };
    const bool repeatable = key == "BOUN" || key == "WAKE";
    const bool known = repeatable || key == "TITLE" || key == "MACH" || key == "ALPHA" || key == "BETA" ||
                       key == "SREF" || key == "SPAN" || key == "CBAR" || key == "XREF" || key == "YREF" ||
                       key == "ZREF" || key == "SYMM" || key == "LAWGS";
    if (!known) {
      aux.extra.emplace_back(key, val);
      continue;
    }
    if (!repeatable && seen[key]) fail("duplicate key " + key);
    seen[key] = true;
    if (key == "TITLE") aux.title = val;
    else if (key == "MACH") aux.flow.mach = num(val);
    else if (key == "ALPHA") {
      for (const auto& tok : split_ws(val)) aux.flow.alphas.push_back(num(tok));
    } else if (key == "BETA") aux.flow.beta = num(val);
    else if (key == "SREF") aux.flow.sref = num(val);
    else if (key == "SPAN") aux.flow.span = num(val);
    else if (key == "CBAR") aux.flow.cbar = num(val);
    else if (key == "XREF") aux.flow.xref = num(val);
    else if (key == "YREF") aux.flow.yref = num(val);
    else if (key == "ZREF") aux.flow.zref = num(val);
    else if (key == "SYMM") {
      if (trim(val) != "XZ") fail("SYMM must be XZ");
      aux.flow.symmetry = true;
    } else if (key == "LAWGS") aux.lawgs_file = val;
    else if (key == "BOUN") {
      const auto toks = split_ws(val);
      long code = 0;
      if (toks.size() != 2 || !parse_long(toks[1], code)) fail("BOUN needs '<network> <code>'");
      if (code != 1 && code != 2 && code != 3 && code != 4 && code != 18) fail("unknown boundary code " + toks[1]);
      aux.boundaries.push_back({toks[0], static_cast<BcCode>(code)});
    } else if (key == "WAKE") {
      const auto toks = split_ws(val);
      if (toks.size() != 7) fail("WAKE needs '<wake> <upper> <lower> <length> <dx> <dy> <dz>'");
      aux.wakes.push_back({toks[0], toks[1], toks[2], num(toks[3]), {num(toks[4]), num(toks[5]), num(toks[6])}});
    }
  }
  for (const char* k : {"MACH", "ALPHA", "SREF", "SPAN", "CBAR"}) {
    if (!seen[k]) throw Error(ErrorKind::MalformedAux, std::string("missing required key ") + k);
  }
  aux.flow.validate();
  return aux;
}

A502Deck assemble_a502(const LawgsObject& geometry, const AuxDeck& aux, const AssembleOptions& options) {
  aux.flow.validate();
  A502Deck deck;
  if (aux.title.size() > 80) throw Error(ErrorKind::MalformedDeck, "title longer than 80 characters");
  deck.blocks.push_back({"TITLE", {aux.title}, {}});

  if (options.abutment && !options.abutment->passed()) {
    std::vector<std::string> offending;
    for (const auto& p : options.abutment->pairs) {
      if (!p.matched) {
        offending.push_back(p.network_a + ":" + to_string(p.edge_a) + " <-> " + p.network_b + ":" +
                            to_string(p.edge_b) + " gap " + shortest(p.max_gap));
      }
    }
    for (const auto& e : options.abutment->edges) {
      if (e.cls == EdgeClass::Open) offending.push_back(e.network + ":" + to_string(e.edge) + " open");
    }
    if (!options.force) {
      std::string msg = "deck refused, " + std::to_string(offending.size()) + " leaking edges:";
      for (const auto& o : offending) msg += "\n  " + o;
      throw Error(ErrorKind::UnresolvedAbutment, msg);
    }
    DeckBlock wm{"FORCED UNRESOLVED ABUTMENT", {}, {}};
    for (const auto& o : offending) wm.text.push_back(o.substr(0, 80));
    deck.blocks.push_back(std::move(wm));
  }

  const auto& f = aux.flow;
  DeckBlock flow{"FLOW NALPHA=" + std::to_string(f.alphas.size()), {}, {}};
  flow.values = {f.mach, f.beta, f.sref, f.span, f.cbar, f.xref, f.yref, f.zref, f.symmetry ? 1.0 : 0.0};
  flow.values.insert(flow.values.end(), f.alphas.begin(), f.alphas.end());
  deck.blocks.push_back(std::move(flow));

  std::map<std::string, BcCode> bc;
  for (const auto& b : aux.boundaries) bc[b.network] = b.code;
  std::map<std::string, const WakeSpec*> wake_of;
  for (const auto& w : aux.wakes) wake_of[w.wake] = &w;

  std::vector<DeckBlock> wakes;
  for (const auto& n : geometry.networks) {
    check_name(n.name, ErrorKind::MalformedDeck);
    auto it = bc.find(n.name);
    if (it == bc.end()) {
      throw Error(ErrorKind::MissingBoundaryCondition, "network '" + n.name + "' has no boundary condition");
    }
    if (n.points.size() != n.n_rows * n.n_cols) {
      throw Error(ErrorKind::GridSizeMismatch, "network '" + n.name + "' grid size mismatch");
    }
    DeckBlock blk;
    const std::string dims = " ROWS=" + std::to_string(n.n_rows) + " COLS=" + std::to_string(n.n_cols);
    if (it->second == BcCode::Wake) {
      auto w = wake_of.find(n.name);
      blk.card = "WAKE " + n.name + " BC=18" + dims;
      if (w != wake_of.end()) blk.card += " UPPER=" + w->second->upper + " LOWER=" + w->second->lower;
    } else {
      blk.card = "NETWORK " + n.name + " BC=" + std::to_string(static_cast<int>(it->second)) + dims;
    }
    for (const auto& p : n.points) {
      blk.values.push_back(p.x);
      blk.values.push_back(p.y);
      blk.values.push_back(p.z);
    }
    if (it->second == BcCode::Wake) wakes.push_back(std::move(blk));
    else deck.blocks.push_back(std::move(blk));
  }
  for (auto& w : wakes) deck.blocks.push_back(std::move(w));
  deck.blocks.push_back({"END", {}, {}});
  return deck;
}

std::string write_a502(const A502Deck& deck) {
  std::string out;
  for (const auto& b : deck.blocks) {
    const std::string card = "$" + b.card;
    if (card.size() > 80) throw Error(ErrorKind::MalformedDeck, "card longer than 80 characters: " + card);
    out += card + "\n";
    for (const auto& t : b.text) {
      if (t.size() > 80 || (!t.empty() && t.front() == '$')) {
        throw Error(ErrorKind::MalformedDeck, "text line must be at most 80 characters and not start with '$'");
      }
      out += t + "\n";
    }
    out += format_records(b.values);
  }
  return out;
}

A502Deck parse_a502(const std::string& text) {
  A502Deck deck;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    auto fail = [&](const std::string& m) {
      throw Error(ErrorKind::MalformedDeck, "line " + std::to_string(i + 1) + ": " + m);
    };
    if (line.size() > 80) fail("record longer than 80 characters");
    if (!line.empty() && line.front() == '$') {
      deck.blocks.push_back({line.substr(1), {}, {}});
      continue;
    }
    if (deck.blocks.empty()) fail("data before the first card");
    auto& blk = deck.blocks.back();
    const bool text_block = blk.card == "TITLE" || blk.card.rfind("FORCED", 0) == 0;
    if (text_block) {
      blk.text.push_back(line);
      continue;
    }
    if (line.size() > 60 || line.size() % 10 != 0 || line.empty()) {
      fail("numeric record must hold 1 to 6 fields of exactly 10 characters");
    }
    for (std::size_t k = 0; k < line.size(); k += 10) {
      try {
        blk.values.push_back(parse_field10(line.substr(k, 10)));
      } catch (const Error& e) {
        fail(e.what());
      }
    }
  }
  if (deck.blocks.empty() || deck.blocks.back().card != "END") {
    throw Error(ErrorKind::MalformedDeck, "deck must end with $END");
  }
  return deck;
}

std::size_t deck_panel_count(const A502Deck& deck) {
  std::size_t total = 0;
  for (const auto& b : deck.blocks) {
    if (b.card.rfind("NETWORK ", 0) != 0) continue;
    long rows = 0, cols = 0;
    for (const auto& tok : split_ws(b.card)) {
      if (tok.rfind("ROWS=", 0) == 0) parse_long(tok.substr(5), rows);
      if (tok.rfind("COLS=", 0) == 0) parse_long(tok.substr(5), cols);
    }
    if (rows >= 2 && cols >= 2) total += static_cast<std::size_t>((rows - 1) * (cols - 1));
  }
  return total;
}

}  // namespace panelkit
