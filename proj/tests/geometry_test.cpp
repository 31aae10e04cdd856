#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "reference.hpp"
#include "topoinfer/errors.hpp"
#include "topoinfer/geometry.hpp"

namespace topoinfer {
namespace {

constexpr double kPi = std::numbers::pi;

// Frozen from reference::polyline_length with 2e5 segments (see SmallCircleArcOracle).
constexpr double kSmallCircleHalfLength = 0.4694737391409537;

Point pt(std::vector<double> c) { return Point{std::move(c), {}}; }

Point random_ambient_point(const AmbientSpace& amb, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> c(amb.coord_dim());
  switch (amb.kind) {
    case AmbientKind::Euclidean:
      for (auto& v : c) v = 2.0 * g(rng);
      break;
    case AmbientKind::RoundSphere: {
      double norm = 0.0;
      for (auto& v : c) {
        v = g(rng);
        norm += v * v;
      }
      for (auto& v : c) v /= std::sqrt(norm);
      break;
    }
    case AmbientKind::Hyperbolic: {
      double s = 0.0;
      for (std::size_t i = 1; i < c.size(); ++i) {
        c[i] = g(rng);
        s += c[i] * c[i];
      }
      c[0] = std::sqrt(1.0 + s);
      break;
    }
  }
  return pt(c);
}

std::vector<ManifoldModel> catalog() {
  return {ManifoldModel::circle_r2(), ManifoldModel::sphere2_r3(), ManifoldModel::torus_r4(),
          ManifoldModel::small_circle_s2(0.15), ManifoldModel::small_circle_s2(2.0),
          ManifoldModel::circle_h2(0.5)};
}

Point random_on(const ManifoldModel& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0.0, 2.0 * kPi);
  if (m.dim() == 1) return m.embed(std::array{a(rng)});
  if (m.kind() == ModelKind::TorusR4) return m.embed(std::array{a(rng), a(rng)});
  std::uniform_real_distribution<double> z(-1.0, 1.0);
  return m.embed(std::array{std::acos(z(rng)), a(rng)});
}

// A point of N at distance < frac * tau from M.
Point random_near(const ManifoldModel& m, double frac, std::mt19937_64& rng) {
  const double tau = geometric_params(m).tau;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    Point p = random_on(m, rng);
    Point q = p;
    for (auto& c : q.coords) c += u(rng) * tau * frac;
    // Pull back onto the ambient constraint surface.
    if (m.ambient().kind == AmbientKind::RoundSphere) {
      double n = 0.0;
      for (double c : q.coords) n += c * c;
      for (auto& c : q.coords) c /= std::sqrt(n);
    } else if (m.ambient().kind == AmbientKind::Hyperbolic) {
      q.coords[0] = std::sqrt(1.0 + q.coords[1] * q.coords[1] + q.coords[2] * q.coords[2]);
    }
    q.chart.clear();
    if (distance_to_manifold(q, m) < frac * tau) return q;
  }
}

TEST(AmbientSpace, CurvatureAndConvexityFixedByKind) {
  EXPECT_EQ(AmbientSpace::euclidean(3).curvature(), 0.0);
  EXPECT_EQ(AmbientSpace::round_sphere(2).curvature(), 1.0);
  EXPECT_EQ(AmbientSpace::hyperbolic(2).curvature(), -1.0);
  EXPECT_TRUE(std::isinf(AmbientSpace::euclidean(2).convexity_radius()));
  EXPECT_TRUE(std::isinf(AmbientSpace::hyperbolic(2).convexity_radius()));
  EXPECT_DOUBLE_EQ(AmbientSpace::round_sphere(2).convexity_radius(), kPi / 2);
  EXPECT_THROW(AmbientSpace::euclidean(0), std::invalid_argument);
}

TEST(AmbientDistance, Examples) {
  const auto r2 = AmbientSpace::euclidean(2);
  EXPECT_DOUBLE_EQ(ambient_distance(pt({0, 0}), pt({3, 4}), r2), 5.0);
  const auto s2 = AmbientSpace::round_sphere(2);
  EXPECT_NEAR(ambient_distance(pt({1, 0, 0}), pt({0, 1, 0}), s2), kPi / 2, 1e-15);
  const auto h2 = AmbientSpace::hyperbolic(2);
  const Point x = pt({std::cosh(0.7), std::sinh(0.7), 0.0});
  EXPECT_EQ(ambient_distance(x, x, h2), 0.0);
  EXPECT_EQ(ambient_distance(pt({0.6, 0.8, 0}), pt({0.6, 0.8, 0}), s2), 0.0);
}

TEST(AmbientDistance, MatchesTextbookFormulas) {
  std::mt19937_64 rng(5);
  const auto s2 = AmbientSpace::round_sphere(2);
  const auto h2 = AmbientSpace::hyperbolic(2);
  for (int i = 0; i < 200; ++i) {
    const Point a = random_ambient_point(s2, rng), b = random_ambient_point(s2, rng);
    const double dot = a.coords[0] * b.coords[0] + a.coords[1] * b.coords[1] +
                       a.coords[2] * b.coords[2];
    EXPECT_NEAR(ambient_distance(a, b, s2), std::acos(std::clamp(dot, -1.0, 1.0)), 1e-7);
    const Point x = random_ambient_point(h2, rng), y = random_ambient_point(h2, rng);
    const double mink = -x.coords[0] * y.coords[0] + x.coords[1] * y.coords[1] +
                        x.coords[2] * y.coords[2];
    EXPECT_NEAR(ambient_distance(x, y, h2), std::acosh(std::max(1.0, -mink)), 1e-6);
  }
}

TEST(AmbientDistance, RejectsBadPoints) {
  EXPECT_THROW(ambient_distance(pt({0, 0}), pt({0, 0, 0}), AmbientSpace::euclidean(2)),
               GeometryError);
  EXPECT_THROW(ambient_distance(pt({1, 0, 0}), pt({0, 1.001, 0}), AmbientSpace::round_sphere(2)),
               GeometryError);
  EXPECT_THROW(ambient_distance(pt({1.1, 0, 0}), pt({1, 0, 0}), AmbientSpace::hyperbolic(2)),
               GeometryError);
  EXPECT_THROW(ambient_distance(pt({-1, 0, 0}), pt({-1, 0, 0}), AmbientSpace::hyperbolic(2)),
               GeometryError);
}

TEST(AmbientDistance, TriangleInequalityOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (const auto& amb : {AmbientSpace::euclidean(3), AmbientSpace::round_sphere(2),
                          AmbientSpace::hyperbolic(2)}) {
    for (int i = 0; i < 1000; ++i) {
      const Point a = random_ambient_point(amb, rng);
      const Point b = random_ambient_point(amb, rng);
      const Point c = random_ambient_point(amb, rng);
      const double ab = ambient_distance(a, b, amb);
      EXPECT_LE(ab, ambient_distance(a, c, amb) + ambient_distance(c, b, amb) + 1e-9)
          << amb.name();
      EXPECT_GE(ab, 0.0);
      EXPECT_DOUBLE_EQ(ab, ambient_distance(b, a, amb));
    }
  }
}

TEST(IntrinsicDistance, Examples) {
  const auto circle = ManifoldModel::circle_r2();
  EXPECT_NEAR(intrinsic_distance(circle.embed(std::array{0.0}), circle.embed(std::array{kPi}),
                                 circle),
              kPi, 1e-15);
  const auto torus = ManifoldModel::torus_r4();
  EXPECT_NEAR(intrinsic_distance(torus.embed(std::array{0.0, 0.0}),
                                 torus.embed(std::array{kPi, 0.0}), torus),
              kPi, 1e-15);
  const auto small = ManifoldModel::small_circle_s2(0.15);
  EXPECT_NEAR(intrinsic_distance(small.embed(std::array{0.0}), small.embed(std::array{kPi}),
                                 small),
              kSmallCircleHalfLength, 1e-9);
}

TEST(IntrinsicDistance, SmallCircleArcOracle) {
  // Arc length of the embedded curve from angle 0 to pi, measured as a polyline in R^3.
  const double rho = 0.15;
  const double len = reference::polyline_length(
      [&](double t) {
        return reference::Vec{std::sin(rho) * std::cos(t), std::sin(rho) * std::sin(t),
                              std::cos(rho)};
      },
      0.0, kPi, 200000);
  EXPECT_NEAR(len, kSmallCircleHalfLength, 1e-10);
}

TEST(IntrinsicDistance, RejectsOffManifoldPoints) {
  EXPECT_THROW(intrinsic_distance(pt({1.0, 0.0}), pt({1.0 + 1e-6, 0.0}),
                                  ManifoldModel::circle_r2()),
               GeometryError);
}

TEST(IntrinsicDistance, DominatesAmbientDistance) {
  std::mt19937_64 rng(17);
  for (const auto& m : catalog()) {
    for (int i = 0; i < 500; ++i) {
      const Point a = random_on(m, rng), b = random_on(m, rng);
      EXPECT_GE(intrinsic_distance(a, b, m) + 1e-12, ambient_distance(a, b, m.ambient()))
          << m.id();
    }
  }
}

TEST(Projection, Examples) {
  const auto circle = ManifoldModel::circle_r2();
  const Point p = project_to_manifold(pt({1.5, 0}), circle);
  EXPECT_NEAR(p.coords[0], 1.0, 1e-15);
  EXPECT_NEAR(p.coords[1], 0.0, 1e-15);
  EXPECT_THROW(project_to_manifold(pt({0, 0}), circle), AmbiguousProjection);
  EXPECT_THROW(project_to_manifold(pt({2, 0}), circle), AmbiguousProjection);
  EXPECT_THROW(project_to_manifold(pt({0, 0.5e-9}), circle), AmbiguousProjection);
  const Point q = project_to_manifold(pt({0, 0, 0.5}), ManifoldModel::sphere2_r3());
  EXPECT_NEAR(q.coords[2], 1.0, 1e-15);
  // The north pole is the medial axis of a small circle about it.
  EXPECT_THROW(project_to_manifold(pt({0, 0, 1}), ManifoldModel::small_circle_s2(0.15)),
               AmbiguousProjection);
}

TEST(Projection, IdempotentAndNearest) {
  std::mt19937_64 rng(23);
  for (const auto& m : catalog()) {
    for (int i = 0; i < 20; ++i) {
      const Point y = random_near(m, 0.9, rng);
      const Point p = project_to_manifold(y, m);
      const Point pp = project_to_manifold(p, m);
      for (std::size_t k = 0; k < p.coords.size(); ++k) {
        EXPECT_NEAR(p.coords[k], pp.coords[k], 1e-9) << m.id();
      }
      const double dp = ambient_distance(y, p, m.ambient());
      EXPECT_NEAR(dp, distance_to_manifold(y, m), 1e-9) << m.id();
      for (int j = 0; j < 1000; ++j) {
        const Point q = random_on(m, rng);
        EXPECT_LE(dp, ambient_distance(y, q, m.ambient()) + 1e-12) << m.id();
      }
    }
  }
}

TEST(Models, ParseAndIdRoundTrip) {
  for (const char* id : {"circle-r2", "sphere2-r3", "torus-r4", "smallcircle-s2:rho=0.15",
                         "circle-h2:rho=0.5"}) {
    const ManifoldModel m = ManifoldModel::parse(id);
    EXPECT_EQ(m.id(), id);
    EXPECT_EQ(ManifoldModel::parse(m.id()), m);
  }
  EXPECT_NEAR(ManifoldModel::parse("greatcircle-s2").rho(), kPi / 2, 1e-15);
  EXPECT_THROW(ManifoldModel::parse("klein-bottle"), UnsupportedModel);
  EXPECT_THROW(ManifoldModel::parse("circle-r2:rho=1"), UnsupportedModel);
  EXPECT_THROW(ManifoldModel::parse("smallcircle-s2"), UnsupportedModel);
  EXPECT_THROW(ManifoldModel::parse("smallcircle-s2:rho=4"), UnsupportedModel);
  EXPECT_THROW(ManifoldModel::parse("smallcircle-s2:radius=0.1"), UnsupportedModel);
}

TEST(Models, Invariants) {
  for (const auto& m : catalog()) {
    EXPECT_LT(m.dim(), m.ambient().n) << m.id();
    ASSERT_FALSE(m.betti_reference().empty());
    EXPECT_EQ(m.betti_reference()[0], 1);
    EXPECT_EQ(static_cast<int>(m.betti_reference().size()), m.dim() + 1);
    const GeometricParams g = geometric_params(m);
    EXPECT_GT(g.tau, 0.0);
    EXPECT_GT(g.vol_M, 0.0);
    if (m.ambient().kind == AmbientKind::RoundSphere) EXPECT_EQ(g.kappa_N_max, 1.0);
    else EXPECT_LE(g.kappa_N_max, 0.0);
  }
}

TEST(GeometricParams, RequiredValues) {
  const auto circle = geometric_params(ManifoldModel::circle_r2(), 0.5);
  EXPECT_EQ(circle.tau, 1.0);
  EXPECT_TRUE(std::isinf(circle.eta));
  EXPECT_EQ(circle.s, 0.0);
  EXPECT_DOUBLE_EQ(circle.vol_M, 2 * kPi);
  ASSERT_TRUE(circle.vol_tube);
  EXPECT_DOUBLE_EQ(*circle.vol_tube, 2 * kPi);

  const auto sphere = geometric_params(ManifoldModel::sphere2_r3());
  EXPECT_EQ(sphere.tau, 1.0);
  EXPECT_EQ(sphere.s, 2.0);
  EXPECT_DOUBLE_EQ(sphere.vol_M, 4 * kPi);

  const auto small = geometric_params(ManifoldModel::small_circle_s2(0.15));
  EXPECT_DOUBLE_EQ(small.tau, 0.15);
  EXPECT_DOUBLE_EQ(small.eta, kPi / 2);
  EXPECT_EQ(small.kappa_N_max, 1.0);
  EXPECT_DOUBLE_EQ(small.vol_M, 2 * kPi * std::sin(0.15));
  EXPECT_DOUBLE_EQ(geometric_params(ManifoldModel::small_circle_s2(2.9)).tau, kPi - 2.9);

  const auto torus = geometric_params(ManifoldModel::torus_r4());
  EXPECT_EQ(torus.tau, 1.0);
  EXPECT_EQ(torus.s, 0.0);
  EXPECT_DOUBLE_EQ(torus.vol_M, 4 * kPi * kPi);

  EXPECT_THROW(geometric_params(ManifoldModel::circle_r2(), 1.0), std::invalid_argument);
  EXPECT_THROW(geometric_params(ManifoldModel::circle_r2(), 0.0), std::invalid_argument);
}

TEST(GeometricParams, TubeVolumesAgreeWithMonteCarlo) {
  // Annulus 0.5 < |x| < 1.5 inside the box [-1.5, 1.5]^2.
  const double area = reference::monte_carlo_area(
      [](double x, double y) {
        const double r = std::hypot(x, y);
        return r > 0.5 && r < 1.5;
      },
      -1.5, 1.5, 2'000'000, 3);
  // Binomial standard error of the area estimate is about 0.006.
  EXPECT_NEAR(area, *geometric_params(ManifoldModel::circle_r2(), 0.5).vol_tube, 0.03);
}

TEST(GeometricParams, SmallCircleReachMatchesBruteForce) {
  const ManifoldModel m = ManifoldModel::small_circle_s2(0.15);
  const double est = reach_estimate_bruteforce(m, 400);
  EXPECT_NEAR(est, geometric_params(m).tau, 0.05 * 0.15);
}

TEST(ReachOracle, CircleAndSphere) {
  EXPECT_NEAR(reach_estimate_bruteforce(ManifoldModel::circle_r2(), 400), 1.0, 0.05);
  EXPECT_NEAR(reach_estimate_bruteforce(ManifoldModel::sphere2_r3(), 100), 1.0, 0.05);
  EXPECT_THROW(reach_estimate_bruteforce(ManifoldModel::circle_r2(), 49), std::invalid_argument);
}

TEST(BallVolumes, ClosedForms) {
  EXPECT_DOUBLE_EQ(unit_ball_volume(1), 2.0);
  EXPECT_DOUBLE_EQ(unit_ball_volume(2), kPi);
  EXPECT_DOUBLE_EQ(unit_ball_volume(3), 4.0 * kPi / 3.0);
  EXPECT_DOUBLE_EQ(intrinsic_ball_volume(ManifoldModel::sphere2_r3(), 0.3),
                   reference::sphere_cap(0.3));
  EXPECT_DOUBLE_EQ(intrinsic_ball_volume(ManifoldModel::torus_r4(), 0.3),
                   reference::flat_disk(0.3));
  EXPECT_DOUBLE_EQ(ambient_ball_volume(AmbientSpace::round_sphere(2), 0.3),
                   reference::sphere_cap(0.3));
}

}  // namespace
}  // namespace topoinfer
