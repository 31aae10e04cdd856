#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "topoinfer/geometry.hpp"

namespace topoinfer {

enum class SampleSource { OnManifold, Tube };

struct SampleSet {
  std::vector<Point> points;
  SampleSource source = SampleSource::OnManifold;
  double tube_r = 0.0;  // meaningful for Tube only
  ManifoldModel model = ManifoldModel::circle_r2();
  std::uint64_t seed = 0;
  // Rejection statistics; 1 and l for on-manifold draws.
  double acceptance_rate = 1.0;
  std::uint64_t proposals = 0;

  std::size_t size() const noexcept { return points.size(); }
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of trial `trial_index` in a run seeded with `seed`: mix64(seed ^ mix64(trial_index)).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial_index) noexcept;

/// l independent draws from the normalised Riemannian volume of M. Points are drawn
/// sequentially from one stream, so the l-point sample is a prefix of the (l+1)-point one.
SampleSet sample_uniform(const ManifoldModel& model, std::size_t l, std::uint64_t seed);

/// l independent draws from the normalised volume of the tube T_r(M), 0 < r < tau, by
/// rejection from a closed-form superset (bounding box in R^n, polar band in S^2/H^2).
/// Throws SamplingError when the acceptance rate is below 1e-4 after 1e6 proposals.
SampleSet sample_tube(const ManifoldModel& model, std::size_t l, double r, std::uint64_t seed);

/// Deterministic grid on M whose covering radius is at most `spacing`.
struct DensityGrid {
  std::vector<Point> points;
  double spacing = 0.0;
};

/// `resolution` points per circle factor for curves and the torus; `resolution` latitude
/// rings for S^2.
DensityGrid density_grid(const ManifoldModel& model, int resolution);

/// Smallest resolution whose grid spacing is at most eps / 10.
int density_resolution(const ManifoldModel& model, double eps);

/// Every point of M has a sample within intrinsic distance eps. Checked on a grid of
/// spacing h <= eps/10 against eps - h, so a true answer is never a false certificate.
bool is_eps_dense_in_M(const SampleSet& sample, const ManifoldModel& model, double eps,
                       int resolution);

/// As above with ambient distance; samples may lie off M.
bool is_eps_dense_wrt_M(const SampleSet& sample, const ManifoldModel& model, double eps,
                        int resolution);

struct CoverageMode {
  enum class Kind { InM, WrtMTube };
  Kind kind = Kind::InM;
  double tube_r = 0.0;

  static CoverageMode in_M() { return {Kind::InM, 0.0}; }
  static CoverageMode wrt_M_tube(double r) { return {Kind::WrtMTube, r}; }
};

/// Fraction of `trials` independent samples of size l that pass the density check of `mode`.
/// Trial i uses trial_seed(seed, i). `workers` = 0 picks the hardware concurrency; the
/// result does not depend on it.
double empirical_coverage_probability(const ManifoldModel& model, std::size_t l, double eps,
                                      std::size_t trials, CoverageMode mode, std::uint64_t seed,
                                      unsigned workers = 0);

/// CSV with a `#`-comment header (model, source, seed) followed by one point per row.
void write_sample_csv(std::ostream& out, const SampleSet& sample);
SampleSet read_sample_csv(std::istream& in);

}  // namespace topoinfer
