#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "topoinfer/geometry.hpp"

namespace topoinfer {

/// Sampling regime: points on M, or points in the tube T_r(M).
struct RegimeSpec {
  enum class Kind { Clean, Noisy };
  Kind kind = Kind::Clean;
  double tube_r = 0.0;

  static RegimeSpec clean() { return {Kind::Clean, 0.0}; }
  static RegimeSpec noisy(double r) { return {Kind::Noisy, r}; }
  bool is_noisy() const noexcept { return kind == Kind::Noisy; }
  std::string name() const;
};

/// Source of the small-ball volume: the curvature expansion, or the model's closed form.
enum class VolumeModel { Expansion, Exact };

struct CoverageBound {
  double p_min = 0;    // lower bound on the probability that one draw hits a fixed ball
  double k_bound = 0;  // covering-number upper bound, unrounded
  double g_raw = 0;    // 1 - k (1 - p_min)^l, may be negative
  std::size_t l = 0;

  double g() const noexcept;  // g_raw clamped to [0, 1]
};

/// v_m r^m (1 - s r^2 / (6(m+2))). Throws VacuousBound when the curvature factor is not
/// positive, std::invalid_argument when r <= 0 or m < 1.
double ball_volume_lower_bound(int m, double r, double s);

/// (m+1) vol(M) / ball_volume_lower_bound(m, eps/3, s).
double covering_number_upper_bound(const GeometricParams& params, double eps);

/// In the noisy regime m, s, v_m and vol(M) are replaced by n, the ambient scalar curvature,
/// v_n and vol(T_r(M)); params.vol_tube must be present for r = regime.tube_r, and the balls
/// of radius eps/3 about points of M must fit in the tube (eps/3 <= r).
CoverageBound coverage_probability_lower_bound(const GeometricParams& params, double eps,
                                               std::size_t l, const RegimeSpec& regime);

/// Same bound with the exact ball volume of `model` in place of the expansion.
CoverageBound coverage_probability_lower_bound_exact(const ManifoldModel& model, double eps,
                                                     std::size_t l, const RegimeSpec& regime);

/// Smallest l >= 1 with g(l) >= p. Throws std::invalid_argument unless 0 < p < 1.
std::size_t sample_size(const GeometricParams& params, double eps, double p,
                        const RegimeSpec& regime);
std::size_t sample_size_exact(const ManifoldModel& model, double eps, double p,
                              const RegimeSpec& regime);

struct Comparison {
  std::string name;
  double value = 0;
  std::string relation;  // "<", "<=" or ">"
  double threshold = 0;
  bool ok = false;
};

struct SecondVariationCertificate {
  double lambda = 0;
  double kappa_max = 0;
  double margin = 0;      // 1 - lambda^2 kappa_max / 3
  double lambda_cap = 0;  // 5 tau / 4
  bool lambda_ok = false; // lambda <= lambda_cap
  bool certified() const noexcept { return margin > 0 && lambda_ok; }
};

struct AdmissibilityReport {
  std::optional<bool> clean_ok;
  std::optional<bool> noisy_ok;
  std::vector<Comparison> checks;
  std::optional<SecondVariationCertificate> certificate;

  bool ok() const noexcept { return clean_ok.value_or(true) && noisy_ok.value_or(true); }
  std::string describe() const;
};

/// eps < tau and eps < eta.
AdmissibilityReport check_clean_admissibility(const GeometricParams& params, double eps);

/// eps < tau/2, tube_r <= tau/2 and kappa_N <= 1/(25 tau^2). Density of the sample at eps/2
/// is a property of the sample and is checked by the caller. The report carries the
/// second-variation certificate at the worst admissible length 5 tau / 4.
AdmissibilityReport check_noisy_admissibility(const GeometricParams& params, double eps,
                                              double tube_r);

/// margin = 1 - lambda^2 kappa_max / 3, the integral of (1-t)^2 over [0,1] being 1/3.
SecondVariationCertificate second_variation_certificate(double lambda, double tau,
                                                        double kappa_max);

}  // namespace topoinfer
