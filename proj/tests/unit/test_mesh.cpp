#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "panelkit/error.hpp"
#include "panelkit/mesh.hpp"
#include "test_aircraft.hpp"

using namespace panelkit;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no panelkit::Error thrown";
  return ErrorKind::IoError;
}

// Cylinder along x: `n_rings` rings of `n_around` points, radius 1, quads
// between rings, in physical group "body" (tag 1).
std::string cylinder_msh(int n_rings, int n_around, double dx = 1.0) {
  std::ostringstream s;
  s << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  s << "$PhysicalNames\n1\n2 1 \"body\"\n$EndPhysicalNames\n";
  s << "$Nodes\n" << n_rings * n_around << "\n";
  s.precision(17);
  for (int r = 0; r < n_rings; ++r)
    for (int k = 0; k < n_around; ++k) {
      const double th = 2.0 * std::numbers::pi * k / n_around;
      s << r * n_around + k + 1 << " " << r * dx << " " << std::sin(th) << " " << std::cos(th) << "\n";
    }
  s << "$EndNodes\n$Elements\n" << (n_rings - 1) * n_around << "\n";
  int id = 1;
  for (int r = 0; r + 1 < n_rings; ++r)
    for (int k = 0; k < n_around; ++k) {
      const int a = r * n_around + k + 1, b = r * n_around + (k + 1) % n_around + 1;
      s << id++ << " 3 2 1 1 " << a << " " << b << " " << b + n_around << " " << a + n_around << "\n";
    }
  s << "$EndElements\n";
  return s.str();
}

}  // namespace

TEST(Msh, ParsesCylinder) {
  const RawMesh m = parse_msh_text(cylinder_msh(4, 8));
  EXPECT_EQ(m.nodes.size(), 32u);
  EXPECT_EQ(m.elements.size(), 24u);
  ASSERT_TRUE(m.groups.contains("body"));
  EXPECT_EQ(m.groups.at("body").size(), 24u);
  EXPECT_EQ(m.component_nodes("body").size(), 32u);
  EXPECT_TRUE(m.warnings.empty());
}

TEST(Msh, WriteParseRoundTripIsExact) {
  const RawMesh a = testkit::make_aircraft_mesh();
  const std::string text = write_msh(a);
  const RawMesh b = parse_msh_text(text);
  EXPECT_TRUE(a.same_content(b));
  EXPECT_EQ(write_msh(b), text);
}

TEST(Msh, RandomCoordinatesRoundTripBitwise) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  RawMesh m;
  const long tag = add_physical_group(m, "patch");
  for (long i = 1; i <= 40; ++i) m.nodes[i] = {u(rng), u(rng), u(rng) * 1e-7};
  for (long e = 0; e < 10; ++e) {
    m.elements.push_back({e + 1, ElementType::Quad, {tag, tag}, {4 * e + 1, 4 * e + 2, 4 * e + 3, 4 * e + 4}});
    m.groups["patch"].push_back(e + 1);
  }
  const RawMesh back = parse_msh_text(write_msh(m));
  EXPECT_TRUE(m.same_content(back));
}

TEST(Msh, UnknownSectionIsSkippedWithWarning) {
  std::string text = cylinder_msh(3, 6);
  text.insert(text.find("$Nodes"), "$Comments\nhello\n$EndComments\n");
  const RawMesh m = parse_msh_text(text);
  ASSERT_EQ(m.warnings.size(), 1u);
  EXPECT_NE(m.warnings[0].find("$Comments"), std::string::npos);
}

TEST(Msh, Errors) {
  EXPECT_EQ(kind_of([] { parse_msh_text("$MeshFormat\n4.1 0 8\n$EndMeshFormat\n"); }),
            ErrorKind::UnsupportedMeshVersion);
  EXPECT_EQ(kind_of([] { parse_msh_text("$MeshFormat\n2.2 1 8\n$EndMeshFormat\n"); }),
            ErrorKind::UnsupportedMeshVersion);
  EXPECT_EQ(kind_of([] { parse_msh_text("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"); }), ErrorKind::MalformedMesh);

  std::string bad_count = cylinder_msh(3, 6);
  bad_count.replace(bad_count.find("$Nodes\n18"), 9, "$Nodes\n19");
  EXPECT_EQ(kind_of([&] { parse_msh_text(bad_count); }), ErrorKind::MalformedMesh);

  std::string bad_num = cylinder_msh(3, 6);
  bad_num.replace(bad_num.find("\n1 0 "), 5, "\n1 0x ");
  try {
    parse_msh_text(bad_num);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MalformedMesh);
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
  }
}

TEST(Sections, CylinderRingsOrderedClockwiseFromTop) {
  const RawMesh m = parse_msh_text(cylinder_msh(5, 12));
  const auto secs = extract_sections(m, "body", Axis::X, 1e-6);
  ASSERT_EQ(secs.size(), 5u);
  for (std::size_t i = 0; i < secs.size(); ++i) {
    EXPECT_NEAR(secs[i].station, double(i), 1e-12);
    ASSERT_EQ(secs[i].points.size(), 12u);
    EXPECT_NEAR(secs[i].points[0].z, 1.0, 1e-12);
    // Seen from +x looking back, +y is on the viewer's right, so clockwise
    // from the top moves towards +y.
    EXPECT_GT(secs[i].points[1].y, 0.0);
    // Consecutive points are neighbours on the ring.
    for (std::size_t k = 0; k + 1 < 12; ++k)
      EXPECT_NEAR(distance(secs[i].points[k], secs[i].points[k + 1]), 2.0 * std::sin(std::numbers::pi / 12), 1e-12);
  }
}

TEST(Sections, OrderIsPermutationInvariant) {
  std::vector<Point3> ring;
  for (int k = 0; k < 16; ++k) {
    const double th = 2.0 * std::numbers::pi * k / 16;
    ring.push_back({0.0, 0.3 * std::sin(th), 0.5 * std::cos(th)});
  }
  const auto ref = order_clockwise(ring, Axis::X);
  std::mt19937 rng(11);
  for (int t = 0; t < 50; ++t) {
    std::shuffle(ring.begin(), ring.end(), rng);
    EXPECT_EQ(order_clockwise(ring, Axis::X), ref);
  }
}

TEST(Sections, Errors) {
  const RawMesh m = parse_msh_text(cylinder_msh(3, 6));
  EXPECT_EQ(kind_of([&] { extract_sections(m, "nothing", Axis::X, 1e-6); }), ErrorKind::EmptyComponent);
  // Tolerance wider than the ring spacing merges everything.
  EXPECT_EQ(kind_of([&] { extract_sections(m, "body", Axis::X, 5.0); }), ErrorKind::AmbiguousStations);
  // Tolerance that chains two rings across 2*tol.
  const RawMesh close = parse_msh_text(cylinder_msh(3, 6, 0.015));
  EXPECT_EQ(kind_of([&] { extract_sections(close, "body", Axis::X, 0.01); }), ErrorKind::AmbiguousStations);
}

TEST(HalfModel, CropsMirrorMeshAndRejectsAsymmetry) {
  const RawMesh full = testkit::make_aircraft_mesh();
  const RawMesh half = crop_to_half_model(full, 1e-9);
  EXPECT_LT(half.nodes.size(), full.nodes.size());
  for (const auto& [id, p] : half.nodes) EXPECT_GE(p.y, 0.0);
  EXPECT_LT(half.elements.size(), full.elements.size());
  EXPECT_GT(half.elements.size(), full.elements.size() / 2 - 1);

  RawMesh bent = full;
  for (auto& [id, p] : bent.nodes) {
    if (p.y > 1.0) {
      p.z += 0.05;
      break;
    }
  }
  EXPECT_EQ(kind_of([&] { crop_to_half_model(bent, 1e-9); }), ErrorKind::AsymmetricGeometry);
}

TEST(Axis, Parse) {
  EXPECT_EQ(axis_from_string("x"), Axis::X);
  EXPECT_EQ(axis_from_string("z"), Axis::Z);
  EXPECT_THROW(axis_from_string("w"), Error);
}
