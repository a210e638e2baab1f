#pragma once

// Minimal independent reader for POINT-ordered ASCII Tecplot files, used as
// an oracle for the exporter.

#include <cstdlib>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace panelkit::testkit {

struct TecplotZone {
  std::string title;
  std::size_t i = 0, j = 0;
  std::vector<std::vector<double>> records;
};

struct TecplotFile {
  std::string title;
  std::vector<std::string> variables;
  std::vector<TecplotZone> zones;
  std::vector<std::string> diagnostics;
};

inline TecplotFile reparse_tecplot(const std::string& text) {
  TecplotFile f;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  const std::regex title_re(R"re(^TITLE = "([^"]*)"$)re");
  const std::regex vars_re(R"re(^VARIABLES = ((?:"[^"]+" ?)+)$)re");
  const std::regex zone_re(R"re(^ZONE T="([^"]*)", I=(\d+), J=(\d+), F=POINT$)re");
  std::smatch m;
  while (std::getline(in, line)) {
    ++n;
    const std::string where = "line " + std::to_string(n) + ": ";
    if (n == 1) {
      if (std::regex_match(line, m, title_re)) f.title = m[1];
      else f.diagnostics.push_back(where + "expected TITLE");
      continue;
    }
    if (n == 2) {
      if (std::regex_match(line, m, vars_re)) {
        const std::string v = m[1];
        const std::regex q(R"re("([^"]+)")re");
        for (auto it = std::sregex_iterator(v.begin(), v.end(), q); it != std::sregex_iterator(); ++it)
          f.variables.push_back((*it)[1]);
      } else {
        f.diagnostics.push_back(where + "expected VARIABLES");
      }
      continue;
    }
    if (std::regex_match(line, m, zone_re)) {
      if (!f.zones.empty() && f.zones.back().records.size() != f.zones.back().i * f.zones.back().j)
        f.diagnostics.push_back(where + "previous zone is short");
      f.zones.push_back({m[1], std::stoul(m[2]), std::stoul(m[3]), {}});
      continue;
    }
    if (f.zones.empty()) {
      f.diagnostics.push_back(where + "data before any zone");
      continue;
    }
    std::istringstream ls(line);
    std::vector<double> rec;
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) f.diagnostics.push_back(where + "bad number " + tok);
      rec.push_back(v);
    }
    if (rec.size() != f.variables.size()) f.diagnostics.push_back(where + "wrong value count");
    auto& z = f.zones.back();
    if (z.records.size() >= z.i * z.j) f.diagnostics.push_back(where + "zone overflow");
    z.records.push_back(std::move(rec));
  }
  if (!f.zones.empty() && f.zones.back().records.size() != f.zones.back().i * f.zones.back().j)
    f.diagnostics.push_back("last zone is short");
  return f;
}

}  // namespace panelkit::testkit
