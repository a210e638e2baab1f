#pragma once

#include <string>
#include <vector>

#include "panelkit/geometry.hpp"
#include "panelkit/mesh.hpp"

namespace panelkit {

/// Appends the first point so the loop is explicitly closed.
CrossSection close_loop(CrossSection section);

enum class LiftingKind { Wing, HTail };

struct LiftingSurface {
  StructuredNetwork upper;  ///< columns trailing edge -> leading edge
  StructuredNetwork lower;  ///< columns leading edge -> trailing edge
};

/// Splits closed airfoil loops at the chordwise extremes (ties: larger z) and
/// stacks them by station. A one-point section becomes a collapsed row.
/// `tol` is the loop-closure tolerance.
LiftingSurface build_lifting_surface(const std::vector<CrossSection>& sections, LiftingKind kind,
                                     const std::string& name, double tol);

enum class RingMode { Auto, Open, Closed };

/// Rows nose -> tail, columns clockwise from the top. Points inside each
/// section are re-sorted, so shuffled input yields the same network. In
/// `Auto` mode a section whose closing gap is no larger than 1.5x its largest
/// consecutive gap is treated as a full ring and the seam point repeated.
StructuredNetwork build_fuselage(const std::vector<CrossSection>& sections, const std::string& name,
                                 RingMode mode = RingMode::Auto);

struct SymmetryResult {
  std::vector<StructuredNetwork> networks;
  bool symmetry = false;
};

/// Keeps the y >= 0 half of mirror-symmetric geometry about y = 0. Networks
/// that straddle the plane are cropped at the grid line lying on it.
SymmetryResult apply_symmetry(const std::vector<StructuredNetwork>& networks, double tol);

struct WakeOptions {
  double length_chords = 20.0;  ///< in multiples of the longest chord
  Vec3 direction{1.0, 0.0, 0.0};
};

/// Two-row flat wake from the shared trailing-edge column of a lifting
/// surface. Columns follow the lifting-surface rows.
StructuredNetwork attach_wake(const LiftingSurface& surface, const WakeOptions& options, const std::string& name,
                              double tol);

/// Outward-reference helpers used by the orientation postconditions.
DirectionField upward_reference();
DirectionField downward_reference();
/// Radial direction (in the y-z plane) from an axis through each row of
/// `net`: the bounding-box centre of a closed row, the end-chord midpoint of
/// an open arc, the point itself for an apex. Interpolated linearly in x
/// between rows.
DirectionField fuselage_radial_reference(const StructuredNetwork& net);

}  // namespace panelkit
