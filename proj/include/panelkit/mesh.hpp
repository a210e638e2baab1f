#pragma once

// Surface-mesh ingestion: the Gmsh MSH 2.2 ASCII subset, and regrouping of a
// component's nodes into ordered cross-sections.
//
// Accepted grammar:
//   $MeshFormat / "2.2 0 8" / $EndMeshFormat            (required, first)
//   $PhysicalNames / count / {dim tag "name"} / $EndPhysicalNames
//   $Nodes / count / {id x y z} / $EndNodes              (required)
//   $Elements / count / {id type ntags tags... nodes...} / $EndElements  (required)
// Element types 2 (3-node triangle) and 3 (4-node quad) only. The first tag
// of an element is its physical group. Any other $Section is skipped with a
// warning.

#include <cstddef>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "panelkit/geometry.hpp"

namespace panelkit {

enum class ElementType { Tri = 2, Quad = 3 };

struct MeshElement {
  long id = 0;
  ElementType type = ElementType::Quad;
  std::vector<long> tags;
  std::vector<long> nodes;

  friend bool operator==(const MeshElement&, const MeshElement&) = default;
};

struct PhysicalName {
  int dim = 2;
  std::string name;

  friend bool operator==(const PhysicalName&, const PhysicalName&) = default;
};

struct RawMesh {
  std::map<long, Point3> nodes;
  std::vector<MeshElement> elements;
  std::map<long, PhysicalName> physical_names;  ///< physical tag -> name
  std::map<std::string, std::vector<long>> groups;  ///< component -> element ids
  std::vector<std::string> warnings;

  /// Structural equality; warnings are diagnostics and do not participate.
  bool same_content(const RawMesh& other) const {
    return nodes == other.nodes && elements == other.elements && physical_names == other.physical_names &&
           groups == other.groups;
  }

  /// Unique node ids used by a component's elements, ascending.
  std::vector<long> component_nodes(const std::string& component) const;
};

RawMesh parse_msh(std::istream& in);
RawMesh parse_msh_text(const std::string& text);
/// Canonical MSH 2.2 serialization; coordinates use 17 significant digits so
/// parse_msh(write_msh(m)) reproduces every node exactly.
std::string write_msh(const RawMesh& mesh);

/// Adds a component to a mesh under construction; returns its physical tag.
long add_physical_group(RawMesh& mesh, const std::string& name);

enum class Axis { X = 0, Y = 1, Z = 2 };
Axis axis_from_string(const std::string& s);
std::string to_string(Axis a);

struct CrossSection {
  double station = 0.0;
  std::vector<Point3> points;  ///< one point for an apex, otherwise >= 3
};

/// Groups a component's nodes by the `axis` coordinate (single-linkage merge
/// with `station_tol`) and orders each section clockwise as seen from the
/// +axis side looking back at the origin, starting at the topmost point.
/// "Up" is +z for the x and y axes and +y for the z axis. Collinear ties are
/// broken by radius ascending.
std::vector<CrossSection> extract_sections(const RawMesh& mesh, const std::string& component, Axis axis,
                                           double station_tol);

/// Orders points clockwise as seen from the +axis side looking back at the
/// origin, starting at the topmost point (see extract_sections).
std::vector<Point3> order_clockwise(std::vector<Point3> points, Axis axis);

/// Keeps the y >= 0 half of a full mirror-symmetric mesh. Every node with
/// |y| > tol must have a mirror image within tol inside the same component.
RawMesh crop_to_half_model(const RawMesh& mesh, double tol);

}  // namespace panelkit
