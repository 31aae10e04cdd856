#include "topoinfer/geometry.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

#include "topoinfer/errors.hpp"

namespace topoinfer {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double squared_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double c : v) acc += c * c;
  return acc;
}

// Unsigned angle between the planar vectors (ax, ay) and (bx, by).
double planar_angle(double ax, double ay, double bx, double by) {
  return std::abs(std::atan2(ax * by - ay * bx, ax * bx + ay * by));
}

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

double closed_form_reach(const ManifoldModel& model) {
  switch (model.kind()) {
    case ModelKind::CircleR2:
    case ModelKind::SphereR3:
    case ModelKind::TorusR4:
      return 1.0;
    case ModelKind::SmallCircleS2:
      return std::min(model.rho(), kPi - model.rho());
    case ModelKind::CircleH2:
      return model.rho();
  }
  throw UnsupportedModel("unknown model kind");
}

}  // namespace

AmbientSpace AmbientSpace::euclidean(int n) {
  if (n < 1) throw std::invalid_argument("ambient dimension must be >= 1");
  return {AmbientKind::Euclidean, n};
}

AmbientSpace AmbientSpace::round_sphere(int n) {
  if (n < 1) throw std::invalid_argument("ambient dimension must be >= 1");
  return {AmbientKind::RoundSphere, n};
}

AmbientSpace AmbientSpace::hyperbolic(int n) {
  if (n < 1) throw std::invalid_argument("ambient dimension must be >= 1");
  return {AmbientKind::Hyperbolic, n};
}

double AmbientSpace::curvature() const noexcept {
  switch (kind) {
    case AmbientKind::Euclidean: return 0.0;
    case AmbientKind::RoundSphere: return 1.0;
    case AmbientKind::Hyperbolic: return -1.0;
  }
  return 0.0;
}

double AmbientSpace::convexity_radius() const noexcept {
  return kind == AmbientKind::RoundSphere ? kPi / 2.0 : kInf;
}

double AmbientSpace::scalar_curvature() const noexcept {
  return static_cast<double>(n) * (n - 1) * curvature();
}

std::string AmbientSpace::name() const {
  switch (kind) {
    case AmbientKind::Euclidean: return "R" + std::to_string(n);
    case AmbientKind::RoundSphere: return "S" + std::to_string(n);
    case AmbientKind::Hyperbolic: return "H" + std::to_string(n);
  }
  return "?";
}

void validate_point(const Point& x, const AmbientSpace& ambient) {
  const auto& c = x.coords;
  if (static_cast<int>(c.size()) != ambient.coord_dim()) {
    throw GeometryError("point has " + std::to_string(c.size()) + " coordinates, " +
                        ambient.name() + " expects " + std::to_string(ambient.coord_dim()));
  }
  for (double v : c) {
    if (!std::isfinite(v)) throw GeometryError("point has a non-finite coordinate");
  }
  switch (ambient.kind) {
    case AmbientKind::Euclidean:
      break;
    case AmbientKind::RoundSphere:
      if (std::abs(std::sqrt(squared_norm(c)) - 1.0) > kConstraintTol) {
        throw GeometryError("point is not on the unit sphere");
      }
      break;
    case AmbientKind::Hyperbolic: {
      const double space = squared_norm(std::span(c).subspan(1));
      const double lorentz = space - c[0] * c[0];
      // Rounding in the coordinates scales with x0^2.
      if (c[0] <= 0.0 || std::abs(lorentz + 1.0) > kConstraintTol * std::max(1.0, c[0] * c[0])) {
        throw GeometryError("point is not on the upper sheet of the hyperboloid");
      }
      break;
    }
  }
}

double ambient_distance(const Point& x, const Point& y, const AmbientSpace& ambient) {
  validate_point(x, ambient);
  validate_point(y, ambient);
  const auto& a = x.coords;
  const auto& b = y.coords;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  switch (ambient.kind) {
    case AmbientKind::Euclidean:
      return std::sqrt(acc);
    case AmbientKind::RoundSphere:
      // arccos(<x,y>) rewritten through the chord; accurate for nearby points.
      return 2.0 * std::asin(std::min(1.0, std::sqrt(acc) / 2.0));
    case AmbientKind::Hyperbolic: {
      // arcosh(-<x,y>_L) rewritten through <x-y,x-y>_L = 4 sinh^2(d/2).
      const double dt = a[0] - b[0];
      const double q = std::max(0.0, acc - 2.0 * dt * dt);
      return 2.0 * std::asinh(std::sqrt(q) / 2.0);
    }
  }
  return 0.0;
}

ManifoldModel ManifoldModel::circle_r2() {
  return {ModelKind::CircleR2, AmbientSpace::euclidean(2), 1, 0.0, {1, 1}};
}

ManifoldModel ManifoldModel::sphere2_r3() {
  return {ModelKind::SphereR3, AmbientSpace::euclidean(3), 2, 0.0, {1, 0, 1}};
}

ManifoldModel ManifoldModel::torus_r4() {
  return {ModelKind::TorusR4, AmbientSpace::euclidean(4), 2, 0.0, {1, 2, 1}};
}

ManifoldModel ManifoldModel::small_circle_s2(double rho) {
  if (!(rho > 0.0 && rho < kPi)) throw UnsupportedModel("smallcircle-s2 needs 0 < rho < pi");
  return {ModelKind::SmallCircleS2, AmbientSpace::round_sphere(2), 1, rho, {1, 1}};
}

ManifoldModel ManifoldModel::circle_h2(double rho) {
  if (!(rho > 0.0 && std::isfinite(rho))) throw UnsupportedModel("circle-h2 needs rho > 0");
  return {ModelKind::CircleH2, AmbientSpace::hyperbolic(2), 1, rho, {1, 1}};
}

ManifoldModel ManifoldModel::parse(std::string_view id) {
  const auto colon = id.find(':');
  const std::string_view base = id.substr(0, colon);
  std::optional<double> rho;
  if (colon != std::string_view::npos) {
    std::string_view rest = id.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw UnsupportedModel("malformed model parameter '" + std::string(item) + "'");
      }
      const std::string_view key = item.substr(0, eq);
      const std::string_view val = item.substr(eq + 1);
      if (key != "rho") throw UnsupportedModel("unknown model parameter '" + std::string(key) + "'");
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
      if (ec != std::errc{} || ptr != val.data() + val.size()) {
        throw UnsupportedModel("bad value for rho: '" + std::string(val) + "'");
      }
      rho = v;
    }
  }
  auto no_params = [&](const char* name) {
    if (rho) throw UnsupportedModel(std::string(name) + " takes no parameters");
  };
  if (base == "circle-r2") { no_params("circle-r2"); return circle_r2(); }
  if (base == "sphere2-r3") { no_params("sphere2-r3"); return sphere2_r3(); }
  if (base == "torus-r4") { no_params("torus-r4"); return torus_r4(); }
  if (base == "greatcircle-s2") { no_params("greatcircle-s2"); return small_circle_s2(kPi / 2.0); }
  if (base == "smallcircle-s2" || base == "circle-h2") {
    if (!rho) throw UnsupportedModel(std::string(base) + " requires rho=<radius>");
    return base == "circle-h2" ? circle_h2(*rho) : small_circle_s2(*rho);
  }
  throw UnsupportedModel("unsupported model '" + std::string(id) + "'");
}

std::string ManifoldModel::name() const {
  switch (kind_) {
    case ModelKind::CircleR2: return "circle-r2";
    case ModelKind::SphereR3: return "sphere2-r3";
    case ModelKind::TorusR4: return "torus-r4";
    case ModelKind::SmallCircleS2: return "smallcircle-s2";
    case ModelKind::CircleH2: return "circle-h2";
  }
  return "?";
}

std::string ManifoldModel::id() const {
  if (kind_ == ModelKind::SmallCircleS2 || kind_ == ModelKind::CircleH2) {
    return name() + ":rho=" + format_real(rho_);
  }
  return name();
}

Point ManifoldModel::embed(std::span<const double> angles) const {
  if (static_cast<int>(angles.size()) != m_) {
    throw GeometryError(id() + " expects " + std::to_string(m_) + " chart coordinates");
  }
  Point p;
  p.chart.assign(angles.begin(), angles.end());
  switch (kind_) {
    case ModelKind::CircleR2:
      p.coords = {std::cos(angles[0]), std::sin(angles[0])};
      break;
    case ModelKind::SphereR3: {
      const double th = angles[0], ph = angles[1];
      p.coords = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
      break;
    }
    case ModelKind::TorusR4:
      p.coords = {std::cos(angles[0]), std::sin(angles[0]), std::cos(angles[1]),
                  std::sin(angles[1])};
      break;
    case ModelKind::SmallCircleS2: {
      const double r = std::sin(rho_);
      p.coords = {r * std::cos(angles[0]), r * std::sin(angles[0]), std::cos(rho_)};
      break;
    }
    case ModelKind::CircleH2: {
      const double r = std::sinh(rho_);
      p.coords = {std::cosh(rho_), r * std::cos(angles[0]), r * std::sin(angles[0])};
      break;
    }
  }
  return p;
}

std::vector<double> ManifoldModel::angles_of(const Point& p) const {
  validate_point(p, ambient_);
  const auto& c = p.coords;
  switch (kind_) {
    case ModelKind::CircleR2: return {std::atan2(c[1], c[0])};
    case ModelKind::SphereR3: return {std::atan2(std::hypot(c[0], c[1]), c[2]), std::atan2(c[1], c[0])};
    case ModelKind::TorusR4: return {std::atan2(c[1], c[0]), std::atan2(c[3], c[2])};
    case ModelKind::SmallCircleS2: return {std::atan2(c[1], c[0])};
    case ModelKind::CircleH2: return {std::atan2(c[2], c[1])};
  }
  return {};
}

double ManifoldModel::intrinsic_diameter() const noexcept {
  switch (kind_) {
    case ModelKind::CircleR2:
    case ModelKind::SphereR3: return kPi;
    case ModelKind::TorusR4: return kPi * std::numbers::sqrt2;
    case ModelKind::SmallCircleS2: return kPi * std::sin(rho_);
    case ModelKind::CircleH2: return kPi * std::sinh(rho_);
  }
  return 0.0;
}

double ManifoldModel::volume() const noexcept {
  switch (kind_) {
    case ModelKind::CircleR2: return kTwoPi;
    case ModelKind::SphereR3: return 4.0 * kPi;
    case ModelKind::TorusR4: return 4.0 * kPi * kPi;
    case ModelKind::SmallCircleS2: return kTwoPi * std::sin(rho_);
    case ModelKind::CircleH2: return kTwoPi * std::sinh(rho_);
  }
  return 0.0;
}

double distance_to_manifold(const Point& y, const ManifoldModel& model) {
  validate_point(y, model.ambient());
  const auto& c = y.coords;
  switch (model.kind()) {
    case ModelKind::CircleR2:
    case ModelKind::SphereR3:
      return std::abs(std::sqrt(squared_norm(c)) - 1.0);
    case ModelKind::TorusR4:
      return std::hypot(std::hypot(c[0], c[1]) - 1.0, std::hypot(c[2], c[3]) - 1.0);
    case ModelKind::SmallCircleS2:
      return std::abs(std::atan2(std::hypot(c[0], c[1]), c[2]) - model.rho());
    case ModelKind::CircleH2:
      return std::abs(std::asinh(std::hypot(c[1], c[2])) - model.rho());
  }
  return kInf;
}

bool on_manifold(const Point& y, const ManifoldModel& model, double tol) {
  return distance_to_manifold(y, model) <= tol;
}

double intrinsic_distance(const Point& p, const Point& q, const ManifoldModel& model) {
  if (!on_manifold(p, model) || !on_manifold(q, model)) {
    throw GeometryError("point is not on " + model.id() + " within tolerance");
  }
  const auto& a = p.coords;
  const auto& b = q.coords;
  switch (model.kind()) {
    case ModelKind::CircleR2:
      return planar_angle(a[0], a[1], b[0], b[1]);
    case ModelKind::SphereR3: {
      const double cross = std::hypot(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                                      a[0] * b[1] - a[1] * b[0]);
      return std::atan2(cross, a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
    }
    case ModelKind::TorusR4:
      return std::hypot(planar_angle(a[0], a[1], b[0], b[1]), planar_angle(a[2], a[3], b[2], b[3]));
    case ModelKind::SmallCircleS2:
      return std::sin(model.rho()) * planar_angle(a[0], a[1], b[0], b[1]);
    case ModelKind::CircleH2:
      return std::sinh(model.rho()) * planar_angle(a[1], a[2], b[1], b[2]);
  }
  return kInf;
}

Point project_to_manifold(const Point& y, const ManifoldModel& model) {
  const double d = distance_to_manifold(y, model);
  const double tau = closed_form_reach(model);
  if (d >= tau - kGeomTol) {
    throw AmbiguousProjection("no unique nearest point: d(y, M) = " + format_real(d) +
                              " is not below the reach " + format_real(tau));
  }
  const auto& c = y.coords;
  switch (model.kind()) {
    case ModelKind::CircleR2:
    case ModelKind::SmallCircleS2:
      return model.embed(std::array{std::atan2(c[1], c[0])});
    case ModelKind::SphereR3:
      return model.embed(std::array{std::atan2(std::hypot(c[0], c[1]), c[2]), std::atan2(c[1], c[0])});
    case ModelKind::TorusR4:
      return model.embed(std::array{std::atan2(c[1], c[0]), std::atan2(c[3], c[2])});
    case ModelKind::CircleH2:
      return model.embed(std::array{std::atan2(c[2], c[1])});
  }
  throw UnsupportedModel("unknown model kind");
}

GeometricParams geometric_params(const ManifoldModel& model, std::optional<double> tube_r) {
  GeometricParams g;
  g.m = model.dim();
  g.n = model.ambient().n;
  g.tau = closed_form_reach(model);
  g.eta = model.ambient().convexity_radius();
  g.kappa_N_max = model.ambient().curvature();
  g.s_ambient = model.ambient().scalar_curvature();
  // Scalar curvature of M: zero for curves and the flat torus, 2 for the unit S^2.
  g.s = model.kind() == ModelKind::SphereR3 ? 2.0 : 0.0;
  g.vol_M = model.volume();
  if (tube_r) {
    const double r = *tube_r;
    if (!(r > 0.0 && r < g.tau)) {
      throw std::invalid_argument("tube radius " + format_real(r) + " outside (0, tau = " +
                                  format_real(g.tau) + ")");
    }
    g.tube_r = r;
    switch (model.kind()) {
      case ModelKind::CircleR2:
        g.vol_tube = 4.0 * kPi * r;  // pi((1+r)^2 - (1-r)^2)
        break;
      case ModelKind::SphereR3:
        g.vol_tube = 4.0 * kPi / 3.0 * (std::pow(1.0 + r, 3) - std::pow(1.0 - r, 3));
        break;
      case ModelKind::TorusR4:
        // Integral of (2 pi a)(2 pi b) over the disc of radius r about (a, b) = (1, 1).
        g.vol_tube = 4.0 * kPi * kPi * kPi * r * r;
        break;
      case ModelKind::SmallCircleS2:
        g.vol_tube = 4.0 * kPi * std::sin(model.rho()) * std::sin(r);
        break;
      case ModelKind::CircleH2:
        g.vol_tube = 4.0 * kPi * std::sinh(model.rho()) * std::sinh(r);
        break;
    }
  }
  return g;
}

double unit_ball_volume(int m) {
  if (m < 0) throw std::invalid_argument("negative dimension");
  return std::pow(kPi, m / 2.0) / std::tgamma(m / 2.0 + 1.0);
}

double intrinsic_ball_volume(const ManifoldModel& model, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("negative radius");
  switch (model.kind()) {
    case ModelKind::CircleR2:
    case ModelKind::SmallCircleS2:
    case ModelKind::CircleH2:
      return std::min(2.0 * r, model.volume());
    case ModelKind::SphereR3:
      return r >= kPi ? 4.0 * kPi : kTwoPi * (1.0 - std::cos(r));
    case ModelKind::TorusR4:
      if (r > kPi) throw std::domain_error("torus ball volume has no closed form beyond radius pi");
      return kPi * r * r;
  }
  throw UnsupportedModel("unknown model kind");
}

double ambient_ball_volume(const AmbientSpace& ambient, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("negative radius");
  switch (ambient.kind) {
    case AmbientKind::Euclidean:
      return unit_ball_volume(ambient.n) * std::pow(r, ambient.n);
    case AmbientKind::RoundSphere:
      if (ambient.n != 2) throw UnsupportedModel("sphere ball volume implemented for S^2 only");
      return r >= kPi ? 4.0 * kPi : kTwoPi * (1.0 - std::cos(r));
    case AmbientKind::Hyperbolic:
      if (ambient.n != 2) throw UnsupportedModel("hyperbolic ball volume implemented for H^2 only");
      return kTwoPi * (std::cosh(r) - 1.0);
  }
  throw UnsupportedModel("unknown ambient kind");
}

}  // namespace topoinfer
