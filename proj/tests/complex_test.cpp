#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dense_homology.hpp"
#include "topoinfer/complex.hpp"
#include "topoinfer/errors.hpp"

namespace topoinfer {
namespace {

constexpr double kPi = std::numbers::pi;

SampleSet planar(std::vector<std::vector<double>> pts) {
  SampleSet s;
  s.model = ManifoldModel::circle_r2();
  s.source = SampleSource::Tube;
  for (auto& c : pts) s.points.push_back(Point{std::move(c), {}});
  return s;
}

SampleSet regular_polygon(int k) {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < k; ++i) pts.push_back({std::cos(2 * kPi * i / k), std::sin(2 * kPi * i / k)});
  return planar(pts);
}

std::vector<oracle::Simplex> all_simplices(const SimplicialComplex& k) {
  std::vector<oracle::Simplex> out;
  for (int d = 0; d <= k.max_dim(); ++d)
    for (std::size_t i = 0; i < k.count(d); ++i) {
      const auto s = k.simplex(d, i);
      out.emplace_back(s.begin(), s.end());
    }
  return out;
}

std::vector<std::vector<Vertex>> as_input(const std::vector<oracle::Simplex>& s) {
  return {s.begin(), s.end()};
}

TEST(SimplicialComplex, ClosureAndQueries) {
  const auto k = SimplicialComplex::from_simplices({{2, 0, 1}}, 2);
  EXPECT_EQ(k.count(0), 3u);
  EXPECT_EQ(k.count(1), 3u);
  EXPECT_EQ(k.count(2), 1u);
  EXPECT_EQ(k.size(), 7u);
  const std::vector<Vertex> edge{0, 2};
  EXPECT_TRUE(k.contains(edge));
  EXPECT_EQ(k.find(std::vector<Vertex>{1, 3}), SimplicialComplex::npos);
  EXPECT_EQ(k.euler_characteristic(), 1);
  EXPECT_THROW(SimplicialComplex::from_simplices({{0, 1, 2}}, 1), std::invalid_argument);
  EXPECT_THROW(SimplicialComplex::from_simplices({{0, 0}}, 1), std::invalid_argument);
}

TEST(Homology, TriangleExamples) {
  const auto filled = SimplicialComplex::from_simplices({{0, 1, 2}}, 2);
  EXPECT_EQ(betti_numbers(filled), (BettiVector{1, 0, 0}));
  EXPECT_EQ(boundary_rank(filled, 1), 2u);
  EXPECT_EQ(boundary_rank(filled, 2), 1u);
  const auto hollow = SimplicialComplex::from_simplices({{0, 1}, {1, 2}, {0, 2}}, 2);
  EXPECT_EQ(betti_numbers(hollow), (BettiVector{1, 1, 0}));
  EXPECT_EQ(boundary_rank(hollow, 2), 0u);
  EXPECT_THROW(boundary_rank(hollow, 0), std::invalid_argument);
}

TEST(Homology, OctahedronIsASphere) {
  std::vector<std::vector<Vertex>> faces;
  for (Vertex pole : {4u, 5u})
    for (Vertex i = 0; i < 4; ++i) faces.push_back({i, static_cast<Vertex>((i + 1) % 4), pole});
  const auto k = SimplicialComplex::from_simplices(faces, 2);
  EXPECT_EQ(betti_numbers(k), (BettiVector{1, 0, 1}));
  EXPECT_EQ(k.euler_characteristic(), 2);
}

TEST(Homology, TwoHollowTriangles) {
  const auto k = SimplicialComplex::from_simplices(
      {{0, 1}, {1, 2}, {0, 2}, {10, 11}, {11, 12}, {10, 12}}, 1);
  EXPECT_EQ(betti_numbers(k), (BettiVector{2, 2}));
}

TEST(Homology, MinimalTorus) {
  // Seven-vertex triangulation of the torus.
  std::vector<std::vector<Vertex>> faces;
  for (Vertex i = 0; i < 7; ++i) {
    faces.push_back({i, (i + 1) % 7, (i + 3) % 7});
    faces.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  EXPECT_EQ(betti_numbers(SimplicialComplex::from_simplices(faces, 2)), (BettiVector{1, 2, 1}));
}

TEST(Homology, ReferenceValues) {
  EXPECT_EQ(betti_reference(ManifoldModel::circle_r2()), (BettiVector{1, 1}));
  EXPECT_EQ(betti_reference(ManifoldModel::sphere2_r3()), (BettiVector{1, 0, 1}));
  EXPECT_EQ(betti_reference(ManifoldModel::torus_r4()), (BettiVector{1, 2, 1}));
  EXPECT_EQ(betti_reference(ManifoldModel::small_circle_s2(0.15)), (BettiVector{1, 1}));
  EXPECT_EQ(betti_reference(ManifoldModel::circle_h2(0.5)), (BettiVector{1, 1}));
}

TEST(Homology, AgreesWithDenseOracleOnRandomComplexes) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto simplices = oracle::random_simplices(3 + trial % 10, 3, rng);
    const auto k = SimplicialComplex::from_simplices(as_input(simplices), 3);
    const BettiVector betti = betti_numbers(k);
    BettiVector dense = oracle::dense_betti(simplices, 3);
    EXPECT_EQ(betti, dense) << "trial " << trial;
    long long chi = 0;
    for (std::size_t d = 0; d < betti.size(); ++d) chi += (d % 2 ? -1 : 1) * betti[d];
    EXPECT_EQ(chi, k.euler_characteristic());
    for (int d = 1; d <= k.max_dim(); ++d) {
      EXPECT_LE(boundary_rank(k, d), std::min(k.count(d), k.count(d - 1)));
    }
  }
}

TEST(Homology, InvariantUnderRelabelling) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto simplices = oracle::random_simplices(10, 3, rng);
    std::vector<Vertex> perm(10);
    for (Vertex i = 0; i < 10; ++i) perm[i] = 3 * i + 5;
    std::shuffle(perm.begin(), perm.end(), rng);
    auto relabelled = as_input(simplices);
    for (auto& s : relabelled)
      for (auto& v : s) v = perm[v];
    EXPECT_EQ(betti_numbers(SimplicialComplex::from_simplices(as_input(simplices), 3)),
              betti_numbers(SimplicialComplex::from_simplices(relabelled, 3)));
  }
}

TEST(Rips, EqualTriangle) {
  const SampleSet s = planar({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}});
  EXPECT_EQ(build_rips(s, 1.0, 2, RipsMetric::Ambient).count(2), 1u);
  EXPECT_EQ(build_rips(s, 0.999, 2, RipsMetric::Ambient).count(1), 0u);
  EXPECT_EQ(build_rips(s, 1.0, 0, RipsMetric::Ambient).size(), 3u);
  EXPECT_THROW(build_rips(s, 1.0, 4, RipsMetric::Ambient), std::invalid_argument);
}

TEST(Rips, OctagonIsACircle) {
  const SampleSet s = regular_polygon(8);
  const auto k = build_rips(s, 2 * std::sin(kPi / 8) + 0.01, 2, RipsMetric::Ambient);
  EXPECT_EQ(k.count(1), 8u);
  EXPECT_EQ(k.count(2), 0u);
  EXPECT_EQ(betti_numbers(k), (BettiVector{1, 1, 0}));
  // Every pair is joined once the scale passes the diameter; the 2-skeleton of the full
  // simplex has no 1-cycles.
  const BettiVector full = betti_numbers(build_rips(s, 2.1, 2, RipsMetric::Ambient));
  EXPECT_EQ(full[0], 1);
  EXPECT_EQ(full[1], 0);
}

TEST(Rips, IntrinsicMetricOnTheCircle) {
  const auto m = ManifoldModel::circle_r2();
  SampleSet s;
  s.model = m;
  for (int i = 0; i < 8; ++i) s.points.push_back(m.embed(std::array{2 * kPi * i / 8}));
  // Arc between neighbours is pi/4 ~ 0.785, above the chord 0.765.
  EXPECT_EQ(build_rips(s, 0.77, 1, RipsMetric::Intrinsic).count(1), 0u);
  EXPECT_EQ(build_rips(s, 0.79, 1, RipsMetric::Intrinsic).count(1), 8u);
  EXPECT_THROW(build_rips(planar({{1.1, 0}}), 1.0, 1, RipsMetric::Intrinsic),
               std::invalid_argument);
}

TEST(Rips, BudgetIsEnforced) {
  const SampleSet s = sample_uniform(ManifoldModel::sphere2_r3(), 200, 1);
  EXPECT_THROW(build_rips(s, 1.0, 3, RipsMetric::Ambient, {.budget = 1000}),
               SimplexBudgetExceeded);
}

TEST(Rips, NestedInScale) {
  const SampleSet s = sample_uniform(ManifoldModel::torus_r4(), 80, 3);
  const auto small = build_rips(s, 0.6, 3, RipsMetric::Ambient);
  const auto large = build_rips(s, 0.9, 3, RipsMetric::Ambient);
  EXPECT_TRUE(small.subset_of(large));
  EXPECT_FALSE(large.subset_of(small));
}

TEST(Rips, CollapsePreservesHomology) {
  const std::vector<std::pair<ManifoldModel, double>> cases = {
      {ManifoldModel::circle_r2(), 0.4},
      {ManifoldModel::sphere2_r3(), 0.6},
      {ManifoldModel::torus_r4(), 1.0},
      {ManifoldModel::small_circle_s2(0.15), 0.05},
      {ManifoldModel::circle_h2(0.5), 0.4}};
  for (const auto& [m, scale] : cases) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const SampleSet s = sample_uniform(m, m.dim() == 1 ? 60 : 120, seed);
      const auto full = build_rips(s, scale, m.dim() + 1, RipsMetric::Ambient);
      const auto reduced =
          build_rips(s, scale, m.dim() + 1, RipsMetric::Ambient, {.collapse = true});
      EXPECT_LE(reduced.size(), full.size());
      // Only dimensions below the top one see every coboundary.
      BettiVector a = betti_numbers(reduced), b = betti_numbers(full);
      a.resize(m.dim() + 1);
      b.resize(m.dim() + 1);
      EXPECT_EQ(a, b) << m.id() << " seed " << seed;
    }
  }
}

TEST(Cech, BoundaryAndShapes) {
  const SampleSet pair = planar({{0, 0}, {2, 0}});
  EXPECT_EQ(build_cech_euclidean(pair, 1.0, 1).count(1), 1u);
  EXPECT_EQ(build_cech_euclidean(pair, 0.999, 1).count(1), 0u);

  const SampleSet tri = planar({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}});
  const double circum = 1.0 / std::sqrt(3.0);
  EXPECT_EQ(build_cech_euclidean(tri, circum * 1.0001, 2).count(2), 1u);
  EXPECT_EQ(build_cech_euclidean(tri, circum * 0.9999, 2).count(2), 0u);
  EXPECT_EQ(build_cech_euclidean(tri, circum * 0.9999, 2).count(1), 3u);

  const std::vector<std::vector<double>> line{{0, 0}, {1, 0}, {2, 0}};
  EXPECT_DOUBLE_EQ(min_enclosing_radius(line), 1.0);
  const auto collinear = build_cech_euclidean(planar(line), 1.0, 2);
  EXPECT_EQ(collinear.count(1), 3u);
  EXPECT_EQ(collinear.count(2), 1u);
  const std::vector<std::vector<double>> obtuse{{-1, 0}, {1, 0}, {0, 0.2}};
  EXPECT_DOUBLE_EQ(min_enclosing_radius(obtuse), 1.0);
  const std::vector<std::vector<double>> tetra{
      {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  EXPECT_NEAR(min_enclosing_radius(tetra), std::sqrt(3.0), 1e-12);

  const SampleSet oct = regular_polygon(8);
  EXPECT_EQ(betti_numbers(build_cech_euclidean(oct, 0.5, 2)), (BettiVector{1, 1, 0}));
  EXPECT_THROW(build_cech_euclidean(sample_uniform(ManifoldModel::small_circle_s2(0.15), 5, 1),
                                    0.1, 1),
               UnsupportedModel);
}

TEST(Cech, RipsSandwich) {
  // Cech(r) is inside Rips(2r), which is inside Cech(2r).
  std::mt19937_64 rng(31);
  for (int i = 0; i < 30; ++i) {
    const auto m = i % 2 ? ManifoldModel::torus_r4() : ManifoldModel::sphere2_r3();
    const SampleSet s = sample_tube(m, 40, 0.3, rng());
    const double r = 0.3 + 0.02 * (i % 5);
    const auto cech = build_cech_euclidean(s, r, 3);
    const auto rips = build_rips(s, 2 * r, 3, RipsMetric::Ambient);
    const auto cech2 = build_cech_euclidean(s, 2 * r, 3);
    EXPECT_TRUE(cech.subset_of(rips)) << i;
    EXPECT_TRUE(rips.subset_of(cech2)) << i;
    EXPECT_EQ(cech.count(1), rips.count(1)) << i;
  }
}

TEST(ComplexIo, RoundTrip) {
  std::mt19937_64 rng(8);
  const auto k = SimplicialComplex::from_simplices(as_input(oracle::random_simplices(9, 3, rng)), 3);
  std::stringstream buf;
  write_complex(buf, k);
  const auto back = read_complex(buf);
  EXPECT_EQ(all_simplices(back), all_simplices(k));
  std::stringstream bad("# dim 1\n0 x\n");
  try {
    read_complex(bad);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

}  // namespace
}  // namespace topoinfer
