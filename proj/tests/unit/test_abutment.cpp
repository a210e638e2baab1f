#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "panelkit/abutment.hpp"
#include "panelkit/error.hpp"
#include "panelkit/network_builder.hpp"

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

std::vector<Point3> wavy_curve(int n) {
  std::vector<Point3> pts;
  for (int i = 0; i < n; ++i) {
    const double t = double(i) / (n - 1);
    pts.push_back({std::cos(3.0 * t), std::sin(2.0 * t) + 0.1 * t, std::exp(t)});
  }
  return pts;
}

double rms_residual(const SectionFit& f, const std::vector<Point3>& pts) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point3 d = f.eval(f.params[i]) - pts[i];
    s += dot(d, d);
  }
  return std::sqrt(s / pts.size());
}

// Ellipsoid of revolution along x, length 20, radius 2, split at x = 10 into
// two closed-ring networks that share the middle ring.
std::vector<StructuredNetwork> split_body() {
  auto sections = [](double x0, double x1, int n) {
    std::vector<CrossSection> out;
    for (int i = 0; i <= n; ++i) {
      const double x = x0 + (x1 - x0) * i / n;
      const double xi = x / 10.0 - 1.0;
      const double r = 2.0 * std::sqrt(std::max(0.0, 1.0 - xi * xi));
      CrossSection s{x, {}};
      if (r == 0.0) s.points = {{x, 0, 0}};
      else
        for (int k = 0; k < 16; ++k) {
          const double th = 2.0 * std::numbers::pi * k / 16;
          s.points.push_back({x, r * std::sin(th), r * std::cos(th)});
        }
      out.push_back(s);
    }
    return out;
  };
  return {build_fuselage(sections(0, 10, 10), "fore"), build_fuselage(sections(10, 20, 10), "aft")};
}

}  // namespace

TEST(SectionFit, ArcLengthParams) {
  const auto t = arc_length_params({{0, 0, 0}, {1, 0, 0}, {1, 3, 0}});
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 1.0);
  EXPECT_NEAR(t[1], 0.25, 1e-15);
}

TEST(SectionFit, ReproducesPolynomialCurve) {
  std::vector<Point3> pts;
  for (int i = 0; i < 30; ++i) {
    const double s = double(i) / 29.0;
    pts.push_back({s, s * s - 0.5 * s * s * s, 0.2 * std::pow(s, 5)});
  }
  const auto f = fit_section_polynomial(pts, 6);
  EXPECT_LT(f.max_residual, 2e-3);  // the curve is polynomial in x, not in arc length
  const auto f8 = fit_section_polynomial(pts, 8);
  EXPECT_LT(f8.max_residual, f.max_residual);
}

TEST(SectionFit, LeastSquaresResidualNonIncreasingWithDegree) {
  const auto pts = wavy_curve(40);
  double prev = INFINITY;
  for (int d = 2; d <= 8; ++d) {
    const auto f = fit_section_polynomial(pts, d);
    const double r = rms_residual(f, pts);
    EXPECT_LE(r, prev * (1.0 + 1e-9) + 1e-14) << "degree " << d;
    prev = r;
    EXPECT_GT(f.condition, 0.0);
  }
}

TEST(SectionFit, EndpointsInterpolated) {
  const auto pts = wavy_curve(25);
  const auto f = fit_section_polynomial(pts, 5);
  EXPECT_LT(distance(f.eval(0.0), pts.front()), 1e-12);
  EXPECT_LT(distance(f.eval(1.0), pts.back()), 1e-12);
}

TEST(SectionFit, InsufficientPoints) {
  EXPECT_EQ(kind_of([] { fit_section_polynomial(wavy_curve(7), 6); }), ErrorKind::InsufficientPoints);
  EXPECT_NO_THROW(fit_section_polynomial(wavy_curve(8), 6));
}

TEST(Resample, EndpointsBitwiseAndCounts) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  auto pts = wavy_curve(33);
  for (auto& p : pts) p += Vec3{u(rng), u(rng), u(rng)};
  for (std::size_t n : {2u, 5u, 17u, 60u}) {
    const auto r = resample_section(pts, n);
    ASSERT_EQ(r.size(), n);
    EXPECT_EQ(r.front(), pts.front());
    EXPECT_EQ(r.back(), pts.back());
  }
}

TEST(Resample, StraightLineUniform) {
  std::vector<Point3> pts;
  for (int i = 0; i <= 20; ++i) {
    const double s = std::pow(i / 20.0, 2.0);
    pts.push_back({2.0 * s, -s, 0.5 * s});
  }
  const auto r = resample_section(pts, 11);
  for (int i = 0; i <= 10; ++i) EXPECT_LT(distance(r[i], Point3{0.2 * i, -0.1 * i, 0.05 * i}), 1e-9);
}

TEST(Resample, FallsBackOnTooFewPoints) {
  const std::vector<Point3> pts{{0, 0, 0}, {1, 0.5, 0}, {2, 0.7, 0}, {3, 0.6, 0}};
  const auto r = resample_section(pts, 9);
  ASSERT_EQ(r.size(), 9u);
  EXPECT_EQ(r.front(), pts.front());
  EXPECT_EQ(r.back(), pts.back());
  for (const auto& p : r) EXPECT_TRUE(is_finite(p));
}

TEST(Enforce, MidpointAndOneSided) {
  std::vector<Point3> a{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  std::vector<Point3> b{{2, 0, 0.01}, {1, 0, 0.01}, {0, 0, 0.01}};  // reversed order
  auto a1 = a, b1 = b;
  enforce_abutment(a1, b1, 0.005, SnapMode::Midpoint);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(a1[i], b1[2 - i]);
    EXPECT_NEAR(a1[i].z, 0.005, 1e-15);
  }
  auto a2 = a, b2 = b;
  enforce_abutment(a2, b2, 0.005, SnapMode::OneSided);
  EXPECT_EQ(a2, a);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(b2[i], a[2 - i]);
}

TEST(Enforce, Errors) {
  std::vector<Point3> a{{0, 0, 0}, {1, 0, 0}};
  std::vector<Point3> b{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  EXPECT_EQ(kind_of([&] { enforce_abutment(a, b, 0.1); }), ErrorKind::CountMismatch);
  std::vector<Point3> far{{0, 0, 0.5}, {1, 0, 0.5}};
  EXPECT_EQ(kind_of([&] { enforce_abutment(a, far, 0.01); }), ErrorKind::GapTooLarge);
}

TEST(Report, SplitBodyIsClean) {
  const auto body = split_body();
  const double tol = default_abutment_tolerance(body);
  EXPECT_NEAR(tol, 1e-4 * std::sqrt(400.0 + 16.0 + 16.0), 1e-6);
  const auto rep = abutment_report(body, tol);
  EXPECT_TRUE(rep.passed()) << rep.to_text();
  EXPECT_EQ(rep.mismatched_count(), 0u);
  for (const auto& p : rep.pairs) EXPECT_EQ(p.max_gap, 0.0);
  EXPECT_TRUE(rep.free_edges().empty());
  EXPECT_NE(rep.to_json().find("\"pairs\""), std::string::npos);
}

TEST(Report, FaultOnJunctionAndEnforcement) {
  auto body = split_body();
  const double tol = default_abutment_tolerance(body);
  const double v0 = enclosed_volume(body);
  const Vec3 shift{0.006, 0.0, 0.008};
  for (std::size_t c = 0; c < body[1].n_cols(); ++c) body[1].set(0, c, body[1].at(0, c) + shift);

  const auto bad = abutment_report(body, tol);
  EXPECT_FALSE(bad.passed());
  std::size_t junction = 0;
  for (const auto& p : bad.pairs) {
    const bool is_junction = p.network_a != p.network_b;
    EXPECT_EQ(!p.matched, is_junction) << p.network_a << "/" << p.network_b;
    if (is_junction) {
      ++junction;
      EXPECT_NEAR(p.max_gap, 0.01, 1e-12);
    }
  }
  EXPECT_EQ(junction, 1u);

  enforce_abutment(body[0], GridEdge::LastRow, body[1], GridEdge::FirstRow, tol, SnapMode::Midpoint);
  const auto fixed = abutment_report(body, tol);
  EXPECT_TRUE(fixed.passed()) << fixed.to_text();
  for (const auto& p : fixed.pairs) EXPECT_EQ(p.max_gap, 0.0);

  auto again = body;
  enforce_abutment(again[0], GridEdge::LastRow, again[1], GridEdge::FirstRow, tol, SnapMode::Midpoint);
  for (int n = 0; n < 2; ++n)
    EXPECT_TRUE(std::equal(again[n].points().begin(), again[n].points().end(), body[n].points().begin()));

  EXPECT_LT(std::abs(enclosed_volume(body) - v0) / v0, 1e-3);
}

TEST(Weld, ClustersMoveToMeanAndIdenticalPointsStay) {
  auto body = split_body();
  EXPECT_EQ(weld_edges(body, 1e-3), 0u);
  for (std::size_t c = 0; c < body[1].n_cols(); ++c) body[1].set(0, c, body[1].at(0, c) + Vec3{0, 0, 1e-4});
  const std::size_t moved = weld_edges(body, 1e-3);
  EXPECT_GT(moved, 0u);
  const auto rep = abutment_report(body, default_abutment_tolerance(body));
  for (const auto& p : rep.pairs) EXPECT_EQ(p.max_gap, 0.0);
  EXPECT_NEAR(body[0].at(10, 0).z, 0.5e-4 + 2.0, 1e-12);
}

TEST(Report, OpenBodyEdgeFails) {
  auto body = split_body();
  body.pop_back();
  const auto rep = abutment_report(body, default_abutment_tolerance(body));
  EXPECT_FALSE(rep.passed());
  bool open = false;
  for (const auto& e : rep.edges) open |= e.cls == EdgeClass::Open && e.edge == GridEdge::LastRow;
  EXPECT_TRUE(open);
}
