#include "panelkit/viscous.hpp"

#include <cmath>
#include <cstdio>

#include "panelkit/error.hpp"

namespace panelkit {

double schlichting_cf(double reynolds) {
  if (!(reynolds > 1.0)) throw Error(ErrorKind::OutOfValidityRange, "Reynolds number must exceed 1");
  return 0.455 / std::pow(std::log10(reynolds), 2.58);
}

double sommer_short_cf(double reynolds, double mach, double tw_over_t) {
  if (!(reynolds > 1e5)) {
    throw Error(ErrorKind::OutOfValidityRange, "Re = " + std::to_string(reynolds) + " is below the turbulent range");
  }
  if (!(mach >= 0.0 && mach < 0.8)) {
    throw Error(ErrorKind::OutOfValidityRange, "M = " + std::to_string(mach) + " outside [0, 0.8)");
  }
  if (!(tw_over_t > 0.0)) throw Error(ErrorKind::OutOfValidityRange, "Tw/T must be positive");

  const double tr = 1.0 + 0.035 * mach * mach + 0.45 * (tw_over_t - 1.0);
  if (!(tr > 0.0)) throw Error(ErrorKind::OutOfValidityRange, "reference temperature ratio is not positive");
  const double re_ref = reynolds / std::pow(tr, 1.76);
  return schlichting_cf(re_ref) / tr;
}

double wing_form_factor(double thickness_ratio, double max_thickness_x) {
  return 1.0 + 0.6 / max_thickness_x * thickness_ratio + 100.0 * std::pow(thickness_ratio, 4);
}

double body_form_factor(double fineness) { return 1.0 + 60.0 / (fineness * fineness * fineness) + fineness / 400.0; }

ParasiteDrag parasite_drag(const std::vector<ComponentWettedItem>& items, const ViscousFlight& flight, double sref) {
  if (!(sref > 0.0)) throw Error(ErrorKind::InvalidFlowConditions, "reference area must be positive");
  if (items.empty()) throw Error(ErrorKind::InvalidFlowConditions, "no wetted components");
  if (!(flight.reference_length > 0.0)) {
    throw Error(ErrorKind::InvalidFlowConditions, "Reynolds reference length must be positive");
  }

  ParasiteDrag out;
  out.sref = sref;
  out.mach = flight.mach();
  for (const auto& it : items) {
    if (!(it.wetted_area > 0.0) || !(it.characteristic_length > 0.0)) {
      throw Error(ErrorKind::InvalidFlowConditions, "component '" + it.name + "' needs positive area and length");
    }
    if (!(it.form_factor >= 1.0)) {
      throw Error(ErrorKind::InvalidFlowConditions, "component '" + it.name + "' form factor below 1");
    }
    ComponentDrag c;
    c.name = it.name;
    c.reynolds = flight.reynolds * it.characteristic_length / flight.reference_length;
    c.cf = sommer_short_cf(c.reynolds, out.mach, it.tw_over_t);
    c.form_factor = it.form_factor;
    c.wetted_area = it.wetted_area;
    c.cd = c.cf * c.form_factor * c.wetted_area / sref;
    out.cd0 += c.cd;
    out.components.push_back(c);
  }

  char buf[160];
  out.assumptions.push_back("fully turbulent flat plate, Cf_inc = 0.455/(log10 Re)^2.58");
  out.assumptions.push_back("reference temperature T'/T = 1 + 0.035 M^2 + 0.45 (Tw/T - 1)");
  std::snprintf(buf, sizeof buf, "V = %.2f ft/s, M = %.4f, Re = %.4g per %.4g length units", flight.velocity,
                out.mach, flight.reynolds, flight.reference_length);
  out.assumptions.push_back(buf);
  out.assumptions.push_back("component Re scaled by its own characteristic length");
  out.assumptions.push_back("CD0 referenced to sref and added unchanged at every alpha");
  return out;
}

std::string ParasiteDrag::to_text() const {
  std::string s;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-16s %12s %10s %6s %10s %10s\n", "component", "Re", "Cf", "FF", "Swet", "CD");
  s += buf;
  for (const auto& c : components) {
    std::snprintf(buf, sizeof buf, "%-16s %12.4e %10.6f %6.3f %10.4f %10.6f\n", c.name.c_str(), c.reynolds, c.cf,
                  c.form_factor, c.wetted_area, c.cd);
    s += buf;
  }
  std::snprintf(buf, sizeof buf, "CD0 = %.6f  (sref = %.4f, M = %.4f)\n", cd0, sref, mach);
  s += buf;
  s += "assumptions:\n";
  for (const auto& a : assumptions) s += "  - " + a + "\n";
  return s;
}

}  // namespace panelkit
