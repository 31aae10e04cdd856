// Brute-force medial-axis search. Deliberately shares nothing with the closed-form reach:
// it only sees points of M and ambient distances.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "topoinfer/geometry.hpp"

namespace topoinfer {
namespace {

constexpr double kPi = std::numbers::pi;

struct Discretisation {
  std::vector<Point> points;
  std::vector<std::uint8_t> far;  // far[i * size + j]: intrinsic separation above the floor
};

double wrap(double d) {
  d = std::fmod(std::abs(d), 2.0 * kPi);
  return d > kPi ? 2.0 * kPi - d : d;
}

Discretisation discretise(const ManifoldModel& model, int resolution) {
  Discretisation out;
  const double floor = model.intrinsic_diameter() / 2.0;
  std::vector<std::array<double, 3>> param;  // per-point data used for separations

  if (model.dim() == 1) {
    const double scale = model.intrinsic_diameter() / kPi;
    for (int i = 0; i < resolution; ++i) {
      const double a = 2.0 * kPi * i / resolution;
      out.points.push_back(model.embed(std::array{a}));
      param.push_back({a, scale, 0.0});
    }
    const std::size_t g = out.points.size();
    out.far.resize(g * g);
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = 0; j < g; ++j)
        out.far[i * g + j] = param[i][1] * wrap(param[i][0] - param[j][0]) > floor;
    return out;
  }

  const int side = std::max(8, resolution / 2);
  if (model.kind() == ModelKind::SphereR3) {
    // Fibonacci lattice; separations from the unit vectors directly.
    const int count = side * side;
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double theta = std::acos(z);
      const double phi = std::fmod(golden * i, 2.0 * kPi);
      out.points.push_back(model.embed(std::array{theta, phi}));
    }
    const std::size_t g = out.points.size();
    out.far.resize(g * g);
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = 0; j < g; ++j) {
        const auto& a = out.points[i].coords;
        const auto& b = out.points[j].coords;
        const double dot = std::clamp(a[0] * b[0] + a[1] * b[1] + a[2] * b[2], -1.0, 1.0);
        out.far[i * g + j] = std::acos(dot) > floor;
      }
    }
    return out;
  }

  if (model.kind() == ModelKind::TorusR4) {
    for (int i = 0; i < side; ++i) {
      for (int j = 0; j < side; ++j) {
        const double a = 2.0 * kPi * i / side;
        const double b = 2.0 * kPi * j / side;
        out.points.push_back(model.embed(std::array{a, b}));
        param.push_back({a, b, 0.0});
      }
    }
    const std::size_t g = out.points.size();
    out.far.resize(g * g);
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = 0; j < g; ++j)
        out.far[i * g + j] =
            std::hypot(wrap(param[i][0] - param[j][0]), wrap(param[i][1] - param[j][1])) > floor;
    return out;
  }
  throw std::invalid_argument("reach oracle: unsupported model " + model.id());
}

// Ambient grid over a neighbourhood of the discretised manifold, plus its spacing and the
// factor by which one chart step can stretch in N.
struct AmbientGrid {
  std::vector<double> coords;  // row-major, coord_dim per point
  double spacing = 0.0;
  double stretch = 1.0;
};

AmbientGrid ambient_grid(const ManifoldModel& model, const std::vector<Point>& samples,
                         int resolution) {
  const AmbientSpace& amb = model.ambient();
  AmbientGrid grid;

  // Box in chart coordinates: the coordinates themselves in R^n, geodesic normal
  // coordinates about the pole / origin for S^2 and H^2.
  const int k = amb.n;
  std::vector<std::vector<double>> chart(samples.size(), std::vector<double>(k));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& c = samples[i].coords;
    if (amb.kind == AmbientKind::Euclidean) {
      chart[i] = c;
    } else if (amb.kind == AmbientKind::RoundSphere) {
      const double t = std::atan2(std::hypot(c[0], c[1]), c[2]);
      const double ph = std::atan2(c[1], c[0]);
      chart[i] = {t * std::cos(ph), t * std::sin(ph)};
    } else {
      const double t = std::asinh(std::hypot(c[1], c[2]));
      const double ph = std::atan2(c[2], c[1]);
      chart[i] = {t * std::cos(ph), t * std::sin(ph)};
    }
  }
  std::vector<double> lo(k, kInf), hi(k, -kInf);
  for (const auto& c : chart) {
    for (int a = 0; a < k; ++a) {
      lo[a] = std::min(lo[a], c[a]);
      hi[a] = std::max(hi[a], c[a]);
    }
  }
  double half_extent = 0.0;
  for (int a = 0; a < k; ++a) half_extent = std::max(half_extent, (hi[a] - lo[a]) / 2.0);
  const double margin = 0.05 * half_extent;
  for (int a = 0; a < k; ++a) {
    lo[a] -= margin;
    hi[a] += margin;
    grid.spacing = std::max(grid.spacing, (hi[a] - lo[a]) / resolution);
  }

  double max_radius = 0.0;
  std::size_t total = 1;
  for (int a = 0; a < k; ++a) total *= static_cast<std::size_t>(resolution + 1);
  const int cd = amb.coord_dim();
  grid.coords.reserve(total * cd);
  std::vector<double> v(k);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (int a = 0; a < k; ++a) {
      const int i = static_cast<int>(rem % (resolution + 1));
      rem /= (resolution + 1);
      v[a] = lo[a] + (hi[a] - lo[a]) * i / resolution;
    }
    if (amb.kind == AmbientKind::Euclidean) {
      grid.coords.insert(grid.coords.end(), v.begin(), v.end());
      continue;
    }
    const double t = std::hypot(v[0], v[1]);
    max_radius = std::max(max_radius, t);
    const double ux = t > 0 ? v[0] / t : 0.0;
    const double uy = t > 0 ? v[1] / t : 0.0;
    if (amb.kind == AmbientKind::RoundSphere) {
      grid.coords.insert(grid.coords.end(), {std::sin(t) * ux, std::sin(t) * uy, std::cos(t)});
    } else {
      grid.coords.insert(grid.coords.end(), {std::cosh(t), std::sinh(t) * ux, std::sinh(t) * uy});
    }
  }
  // The exponential map contracts on S^2 and expands on H^2 by at most sinh(R)/R.
  if (amb.kind == AmbientKind::Hyperbolic && max_radius > 0) {
    grid.stretch = std::sinh(max_radius) / max_radius;
  }
  return grid;
}

}  // namespace

double reach_estimate_bruteforce(const ManifoldModel& model, int resolution) {
  if (resolution < 50) throw std::invalid_argument("reach oracle needs resolution >= 50");
  const AmbientSpace& amb = model.ambient();
  if (amb.kind != AmbientKind::Euclidean && amb.n != 2) {
    throw std::invalid_argument("reach oracle: curved ambients supported in dimension 2 only");
  }
  const Discretisation disc = discretise(model, resolution);
  const AmbientGrid grid = ambient_grid(model, disc.points, resolution);
  const double tol = grid.spacing * grid.stretch;

  const int cd = amb.coord_dim();
  const std::size_t g = disc.points.size();
  // Structure-of-arrays copy of M's discretisation; the Lorentzian sign is folded into the
  // time-like coordinate's weight.
  std::vector<double> mcoords(g * cd);
  for (std::size_t j = 0; j < g; ++j)
    for (int a = 0; a < cd; ++a) mcoords[a * g + j] = disc.points[j].coords[a];
  std::vector<double> weight(cd, 1.0);
  if (amb.kind == AmbientKind::Hyperbolic) weight[0] = -1.0;

  // Each proxy is monotone in geodesic distance.
  auto to_distance = [&](double q) {
    q = std::max(q, 0.0);
    switch (amb.kind) {
      case AmbientKind::Euclidean: return std::sqrt(q);
      case AmbientKind::RoundSphere: return 2.0 * std::asin(std::min(1.0, std::sqrt(q) / 2.0));
      case AmbientKind::Hyperbolic: return 2.0 * std::asinh(std::sqrt(q) / 2.0);
    }
    return kInf;
  };

  std::vector<double> proxy(g);
  double best = kInf;
  const std::size_t npts = grid.coords.size() / cd;
  for (std::size_t p = 0; p < npts; ++p) {
    const double* x = &grid.coords[p * cd];
    std::fill(proxy.begin(), proxy.end(), 0.0);
    for (int a = 0; a < cd; ++a) {
      const double xa = x[a];
      const double w = weight[a];
      const double* col = &mcoords[a * g];
      for (std::size_t j = 0; j < g; ++j) {
        const double d = xa - col[j];
        proxy[j] += w * d * d;
      }
    }
    const auto it = std::min_element(proxy.begin(), proxy.end());
    const double d1 = to_distance(*it);
    if (d1 >= best) continue;
    const std::size_t j1 = static_cast<std::size_t>(it - proxy.begin());
    const std::uint8_t* far = &disc.far[j1 * g];
    double q2 = kInf;
    for (std::size_t j = 0; j < g; ++j)
      if (far[j] && proxy[j] < q2) q2 = proxy[j];
    if (q2 == kInf) continue;
    if (to_distance(q2) - d1 <= tol) best = d1;
  }
  return best;
}

}  // namespace topoinfer
