#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace topoinfer {

// Tolerance policy: representation error on constraint surfaces, computation error on
// geometric comparisons. Discretisation error (oracles) is handled by the callers.
inline constexpr double kConstraintTol = 1e-12;
inline constexpr double kGeomTol = 1e-9;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class AmbientKind { Euclidean, RoundSphere, Hyperbolic };

/// A complete constant-curvature manifold N of dimension n.
///
/// The unit sphere S^n and hyperbolic space H^n are represented extrinsically in R^{n+1}:
/// unit vectors, and the upper sheet of <x,x>_L = -1 (Lorentzian product, time-like
/// coordinate first) respectively. Euclidean points carry n coordinates.
struct AmbientSpace {
  AmbientKind kind = AmbientKind::Euclidean;
  int n = 2;

  static AmbientSpace euclidean(int n);
  static AmbientSpace round_sphere(int n);
  static AmbientSpace hyperbolic(int n);

  /// Sectional curvature: 0, +1 or -1, fixed by the kind.
  double curvature() const noexcept;
  /// Convexity radius: pi/2 on the unit sphere, unbounded otherwise.
  double convexity_radius() const noexcept;
  /// Scalar curvature n(n-1)K.
  double scalar_curvature() const noexcept;
  int coord_dim() const noexcept { return kind == AmbientKind::Euclidean ? n : n + 1; }
  std::string name() const;

  bool operator==(const AmbientSpace&) const = default;
};

struct Point {
  std::vector<double> coords;
  // Intrinsic parameters (angles) when the point was generated on M; empty otherwise.
  std::vector<double> chart;
};

/// Throws GeometryError on a coordinate-count mismatch or a constraint violation
/// beyond kConstraintTol.
void validate_point(const Point& x, const AmbientSpace& ambient);

/// Geodesic distance in N.
double ambient_distance(const Point& x, const Point& y, const AmbientSpace& ambient);

enum class ModelKind { CircleR2, SphereR3, TorusR4, SmallCircleS2, CircleH2 };

/// Closed-form submanifold M of a model ambient space N.
///
///   circle-r2          unit circle in R^2
///   sphere2-r3         unit sphere S^2 in R^3
///   torus-r4           flat torus S^1 x S^1 in R^4 (unit factor circles)
///   smallcircle-s2     circle at geodesic radius rho about the north pole of S^2
///   greatcircle-s2     alias for smallcircle-s2:rho=pi/2
///   circle-h2          circle at geodesic radius rho about the origin of H^2
class ManifoldModel {
 public:
  static ManifoldModel circle_r2();
  static ManifoldModel sphere2_r3();
  static ManifoldModel torus_r4();
  static ManifoldModel small_circle_s2(double rho);
  static ManifoldModel circle_h2(double rho);

  /// Parses `name[:key=value,...]`. Throws UnsupportedModel.
  static ManifoldModel parse(std::string_view id);

  ModelKind kind() const noexcept { return kind_; }
  const AmbientSpace& ambient() const noexcept { return ambient_; }
  int dim() const noexcept { return m_; }
  double rho() const noexcept { return rho_; }
  const std::vector<int>& betti_reference() const noexcept { return betti_; }

  /// Base identifier without parameters, e.g. "smallcircle-s2".
  std::string name() const;
  /// Round-trippable identifier, e.g. "smallcircle-s2:rho=0.15".
  std::string id() const;

  /// Maps intrinsic angles (dim() of them) to ambient coordinates.
  Point embed(std::span<const double> angles) const;
  /// Recovers intrinsic angles from the coordinates of a point on (or near) M.
  std::vector<double> angles_of(const Point& p) const;

  double intrinsic_diameter() const noexcept;
  double volume() const noexcept;

  bool operator==(const ManifoldModel&) const = default;

 private:
  ManifoldModel(ModelKind kind, AmbientSpace ambient, int m, double rho, std::vector<int> betti)
      : kind_(kind), ambient_(ambient), m_(m), rho_(rho), betti_(std::move(betti)) {}

  ModelKind kind_;
  AmbientSpace ambient_;
  int m_;
  double rho_;
  std::vector<int> betti_;
};

/// Geodesic distance inside M. Both points must lie on M within kGeomTol.
double intrinsic_distance(const Point& p, const Point& q, const ManifoldModel& model);

/// d(y, M) in N, closed form; defined everywhere including past the reach.
double distance_to_manifold(const Point& y, const ManifoldModel& model);

bool on_manifold(const Point& y, const ManifoldModel& model, double tol = kGeomTol);

/// The unique nearest point of M. Throws AmbiguousProjection when d(y, M) >= tau - kGeomTol,
/// which includes every point within kGeomTol of the medial axis.
Point project_to_manifold(const Point& y, const ManifoldModel& model);

/// The quantities entering the sampling and contractibility statements.
struct GeometricParams {
  int m = 0;                  // dim M
  int n = 0;                  // dim N
  double tau = 0;             // reach of M in N
  double eta = kInf;          // convexity radius of N
  double s = 0;               // scalar curvature bound of M
  double s_ambient = 0;       // scalar curvature bound of N
  double kappa_N_max = 0;     // sectional curvature bound of N
  double vol_M = 0;
  std::optional<double> tube_r;
  std::optional<double> vol_tube;  // vol(T_r(M)) for r = tube_r
};

/// Throws UnsupportedModel, or std::invalid_argument when tube_r is outside (0, tau).
GeometricParams geometric_params(const ManifoldModel& model,
                                 std::optional<double> tube_r = std::nullopt);

/// Volume of the unit ball in R^m.
double unit_ball_volume(int m);

/// Exact volume of the intrinsic ball B^M_r(y) (homogeneous models, so independent of y).
double intrinsic_ball_volume(const ManifoldModel& model, double r);

/// Exact volume of the geodesic ball B_r(x) in N.
double ambient_ball_volume(const AmbientSpace& ambient, double r);

/// Brute-force reach estimate, independent of the closed-form value in geometric_params.
///
/// Grids a neighbourhood of M in N (`resolution` cells per axis), discretises M, and marks
/// grid points whose nearest discretised point p and nearest point p' at intrinsic
/// separation above half the diameter of M are equidistant within one grid spacing.
/// Returns the minimum distance from a marked point to M, or +inf when nothing is marked.
double reach_estimate_bruteforce(const ManifoldModel& model, int resolution);

}  // namespace topoinfer
