// Writes the desk-scale test aircraft mesh and a matching pipeline config:
//   make_test_aircraft <dir>   ->  <dir>/aircraft.msh, <dir>/aircraft.json

#include <fstream>
#include <iostream>

#include "test_aircraft.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_test_aircraft <dir>\n";
    return 2;
  }
  namespace fs = std::filesystem;
  const fs::path dir = argv[1];
  fs::create_directories(dir);
  const panelkit::testkit::AircraftSpec spec;
  {
    std::ofstream out(dir / "aircraft.msh");
    out << panelkit::write_msh(panelkit::testkit::make_aircraft_mesh(spec));
  }
  {
    std::ofstream out(dir / "aircraft.json");
    out << panelkit::testkit::aircraft_config(spec, "aircraft.msh", "out").dump(2) << "\n";
  }
  std::cout << "wrote " << (dir / "aircraft.msh").string() << " and " << (dir / "aircraft.json").string() << "\n";
  return 0;
}
