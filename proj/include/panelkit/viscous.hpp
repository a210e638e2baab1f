#pragma once

// Parasite (skin-friction) drag from turbulent flat-plate friction with a
// reference-temperature compressibility correction:
//   T'/T = 1 + 0.035 M^2 + 0.45 (Tw/T - 1)
//   Re'  = Re / (T'/T)^1.76            (rho ~ 1/T, mu ~ T^0.76)
//   Cf   = Cf_inc(Re') / (T'/T)
//   Cf_inc(Re) = 0.455 / (log10 Re)^2.58
// Units are whatever the caller uses consistently (ft and ft/s by default).

#include <string>
#include <vector>

namespace panelkit {

/// Incompressible turbulent flat-plate friction (Schlichting).
double schlichting_cf(double reynolds);

/// Throws OutOfValidityRange for Re <= 1e5, M outside [0, 0.8), Tw/T <= 0.
double sommer_short_cf(double reynolds, double mach, double tw_over_t = 1.0);

struct ComponentWettedItem {
  std::string name;
  double wetted_area = 0.0;
  double characteristic_length = 0.0;
  double form_factor = 1.0;
  double tw_over_t = 1.0;
};

/// Lifting-surface form factor, 1 + 0.6/x_t (t/c) + 100 (t/c)^4.
double wing_form_factor(double thickness_ratio, double max_thickness_x = 0.3);
/// Body form factor from fineness ratio l/d, 1 + 60/f^3 + f/400.
double body_form_factor(double fineness);

/// Sea-level standard speed of sound, ft/s.
inline constexpr double kSeaLevelSoundFps = 1116.45;
inline constexpr double kMphToFps = 5280.0 / 3600.0;

struct ViscousFlight {
  double velocity = 0.0;          ///< ft/s
  double reynolds = 0.0;          ///< based on reference_length
  double reference_length = 1.0;  ///< length the Reynolds number refers to
  double speed_of_sound = kSeaLevelSoundFps;

  double mach() const { return velocity / speed_of_sound; }
};

struct ComponentDrag {
  std::string name;
  double reynolds = 0.0;
  double cf = 0.0;
  double form_factor = 1.0;
  double wetted_area = 0.0;
  double cd = 0.0;  ///< on sref
};

struct ParasiteDrag {
  double cd0 = 0.0;
  double sref = 0.0;
  double mach = 0.0;
  std::vector<ComponentDrag> components;
  std::vector<std::string> assumptions;

  std::string to_text() const;
};

/// CD0 = sum Cf_i FF_i Swet_i / sref, each component at
/// Re_i = Re * L_i / reference_length. Throws InvalidFlowConditions for
/// sref <= 0 or an empty/invalid item list.
ParasiteDrag parasite_drag(const std::vector<ComponentWettedItem>& items, const ViscousFlight& flight, double sref);

}  // namespace panelkit
