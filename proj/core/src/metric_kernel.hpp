#pragma once

// Flat, allocation-free distance evaluation for the hot loops (density checks, neighbourhood
// graphs). Points are packed into a feature array once; comparisons use a proxy that is
// monotone in the true distance, so thresholds are converted instead of distances.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "topoinfer/errors.hpp"
#include "topoinfer/geometry.hpp"

namespace topoinfer::detail {

class MetricKernel {
 public:
  enum class Kind {
    ScaledAngle,   // circles, intrinsic: scale * wrapped angle difference
    TorusAngles,   // flat torus, intrinsic: squared wrapped angle differences
    Chord,         // sphere (intrinsic S^2 or ambient S^n): squared chord
    Euclidean,     // squared Euclidean
    Lorentz,       // hyperboloid: <x-y, x-y>_L = 4 sinh^2(d/2)
  };

  static MetricKernel intrinsic(const ManifoldModel& model) {
    switch (model.kind()) {
      case ModelKind::CircleR2: return {Kind::ScaledAngle, 1, 1.0};
      case ModelKind::SmallCircleS2: return {Kind::ScaledAngle, 1, std::sin(model.rho())};
      case ModelKind::CircleH2: return {Kind::ScaledAngle, 1, std::sinh(model.rho())};
      case ModelKind::TorusR4: return {Kind::TorusAngles, 2, 1.0};
      case ModelKind::SphereR3: return {Kind::Chord, 3, 1.0};
    }
    throw UnsupportedModel("no intrinsic kernel");
  }

  static MetricKernel ambient(const AmbientSpace& amb) {
    switch (amb.kind) {
      case AmbientKind::Euclidean: return {Kind::Euclidean, amb.coord_dim(), 1.0};
      case AmbientKind::RoundSphere: return {Kind::Chord, amb.coord_dim(), 1.0};
      case AmbientKind::Hyperbolic: return {Kind::Lorentz, amb.coord_dim(), 1.0};
    }
    throw UnsupportedModel("no ambient kernel");
  }

  int stride() const noexcept { return stride_; }

  // Packs features for the intrinsic kernel of `model` or the ambient kernel.
  std::vector<double> pack(std::span<const Point> pts, const ManifoldModel* model) const {
    std::vector<double> out;
    out.reserve(pts.size() * stride_);
    for (const Point& p : pts) {
      if (kind_ == Kind::ScaledAngle || kind_ == Kind::TorusAngles) {
        if (static_cast<int>(p.chart.size()) == stride_) {
          out.insert(out.end(), p.chart.begin(), p.chart.end());
        } else {
          const auto a = model->angles_of(p);
          out.insert(out.end(), a.begin(), a.end());
        }
      } else {
        out.insert(out.end(), p.coords.begin(), p.coords.end());
      }
    }
    return out;
  }

  double proxy(const double* a, const double* b) const noexcept {
    switch (kind_) {
      case Kind::ScaledAngle:
        return scale_ * wrap(a[0] - b[0]);
      case Kind::TorusAngles: {
        const double u = wrap(a[0] - b[0]);
        const double v = wrap(a[1] - b[1]);
        return u * u + v * v;
      }
      case Kind::Chord:
      case Kind::Euclidean: {
        double acc = 0.0;
        for (int i = 0; i < stride_; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
        return acc;
      }
      case Kind::Lorentz: {
        double acc = -(a[0] - b[0]) * (a[0] - b[0]);
        for (int i = 1; i < stride_; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
        return acc;
      }
    }
    return 0.0;
  }

  double to_proxy(double d) const noexcept {
    switch (kind_) {
      case Kind::ScaledAngle: return d;
      case Kind::TorusAngles:
      case Kind::Euclidean: return d * d;
      case Kind::Chord: {
        if (d >= std::numbers::pi) return 4.0;
        const double c = 2.0 * std::sin(d / 2.0);
        return c * c;
      }
      case Kind::Lorentz: {
        const double c = 2.0 * std::sinh(d / 2.0);
        return c * c;
      }
    }
    return 0.0;
  }

  double to_distance(double q) const noexcept {
    q = std::max(q, 0.0);
    switch (kind_) {
      case Kind::ScaledAngle: return q;
      case Kind::TorusAngles:
      case Kind::Euclidean: return std::sqrt(q);
      case Kind::Chord: return 2.0 * std::asin(std::min(1.0, std::sqrt(q) / 2.0));
      case Kind::Lorentz: return 2.0 * std::asinh(std::sqrt(q) / 2.0);
    }
    return 0.0;
  }

 private:
  MetricKernel(Kind k, int stride, double scale) : kind_(k), stride_(stride), scale_(scale) {}

  // Angles in [-pi, pi] (atan2 output or uniform draws in [0, 2pi)).
  static double wrap(double d) noexcept {
    d = std::abs(d);
    if (d > 2.0 * std::numbers::pi) d = std::fmod(d, 2.0 * std::numbers::pi);
    return d > std::numbers::pi ? 2.0 * std::numbers::pi - d : d;
  }

  Kind kind_;
  int stride_;
  double scale_;
};

}  // namespace topoinfer::detail
