#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace panelkit {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

  constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

/// Positions share the vector type; the alias documents intent at call sites.
using Point3 = Vec3;

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }
inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

enum class ComponentKind { WingUpper, WingLower, Fuselage, HTailUpper, HTailLower, Wake };
enum class BoundaryClass { ImpermeableSurface, Wake };

std::string to_string(ComponentKind kind);
ComponentKind component_kind_from_string(const std::string& s);

/// Grid edges of a network, named by the index that is held fixed.
enum class GridEdge { FirstRow, LastRow, FirstCol, LastCol };
std::string to_string(GridEdge edge);

/// Rectangular grid of points describing one surface patch.
///
/// Points are stored row-major. Panel (r, c) has corners
/// (r,c), (r+1,c), (r+1,c+1), (r,c+1), so its normal follows
/// row-direction x column-direction.
class StructuredNetwork {
 public:
  StructuredNetwork() = default;
  StructuredNetwork(std::string name, ComponentKind kind, std::size_t n_rows, std::size_t n_cols,
                    std::vector<Point3> points);

  const std::string& name() const { return name_; }
  ComponentKind kind() const { return kind_; }
  BoundaryClass bc_class() const { return bc_class_; }
  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }
  std::size_t n_panels() const { return (n_rows_ - 1) * (n_cols_ - 1); }
  std::span<const Point3> points() const { return points_; }

  const Point3& at(std::size_t r, std::size_t c) const { return points_[r * n_cols_ + c]; }
  void set(std::size_t r, std::size_t c, const Point3& p) { points_[r * n_cols_ + c] = p; }

  std::array<Point3, 4> panel_corners(std::size_t r, std::size_t c) const {
    return {at(r, c), at(r + 1, c), at(r + 1, c + 1), at(r, c + 1)};
  }

  std::vector<Point3> edge_points(GridEdge edge) const;
  std::vector<std::size_t> edge_indices(GridEdge edge) const;

  /// Collapsed edges (all points coincident) must be declared; they are
  /// exempt from the degenerate-panel guard.
  bool edge_collapsed(GridEdge edge) const { return collapsed_[static_cast<int>(edge)]; }
  void flag_collapsed(GridEdge edge, bool value = true) { collapsed_[static_cast<int>(edge)] = value; }
  /// Marks every edge whose points coincide within `tol`.
  void detect_collapsed_edges(double tol);

  void rename(std::string name) { name_ = std::move(name); }
  void set_kind(ComponentKind kind);

 private:
  std::string name_;
  ComponentKind kind_ = ComponentKind::Fuselage;
  BoundaryClass bc_class_ = BoundaryClass::ImpermeableSurface;
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<Point3> points_;
  std::array<bool, 4> collapsed_{};
};

struct PanelMetrics {
  double area = 0.0;
  Point3 centroid;
  Vec3 unit_normal;
};

/// Unit normal from the cross product of the diagonals (p3-p1) x (p4-p2).
/// Throws DegeneratePanel when the diagonals are (nearly) parallel.
Vec3 panel_normal(const Point3& p1, const Point3& p2, const Point3& p3, const Point3& p4);

/// Area is the sum of the two triangles split along p1-p3; the centroid is
/// their area-weighted mean. Collapsed panels reduce to a single triangle.
PanelMetrics panel_metrics(const Point3& p1, const Point3& p2, const Point3& p3, const Point3& p4);
PanelMetrics panel_metrics(const StructuredNetwork& net, std::size_t r, std::size_t c);

struct OrientationReport {
  double fraction_outward = 1.0;
  std::vector<std::size_t> offending;  ///< linear panel indices r * (n_cols-1) + c
  std::size_t n_panels = 0;
};

using DirectionField = std::function<Vec3(const Point3&)>;

OrientationReport check_orientation(const StructuredNetwork& net, const DirectionField& outward_ref);

StructuredNetwork reverse_rows(const StructuredNetwork& net);
StructuredNetwork reverse_cols(const StructuredNetwork& net);
StructuredNetwork transpose(const StructuredNetwork& net);

struct BoundingBox {
  Point3 lo{INFINITY, INFINITY, INFINITY};
  Point3 hi{-INFINITY, -INFINITY, -INFINITY};
  void expand(const Point3& p);
  double diagonal() const;
};

BoundingBox bounding_box(std::span<const StructuredNetwork> nets);

/// Enclosed volume by the divergence theorem, summed over the split triangles
/// of every panel. Faces lying on the y = 0 plane contribute nothing, so a
/// half model returns half the volume of the closed body.
double enclosed_volume(std::span<const StructuredNetwork> nets);

/// Throws InvalidNetwork if any interior adjacent pair of points coincides
/// within rel_tol * diag (collapsed edges excepted) or a point is not finite.
void validate_network(const StructuredNetwork& net, double diag, double rel_tol = 1e-9);

}  // namespace panelkit
