#include "topoinfer/bounds.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "topoinfer/errors.hpp"

namespace topoinfer {
namespace {

// The two numbers every bound is built from.
struct BallTerms {
  double p_min;
  double k;
};

BallTerms terms_from(double ball, double volume, int dim) {
  if (!(ball > 0.0) || !(volume > 0.0)) throw VacuousBound("non-positive ball or total volume");
  const double p_min = ball / volume;
  if (!(p_min < 1.0)) {
    throw VacuousBound("ball volume is not smaller than the sampled volume; eps too large");
  }
  return {p_min, std::max(1.0, (dim + 1) * volume / ball)};
}

void require_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be positive");
}

double tube_volume(const GeometricParams& params, const RegimeSpec& regime) {
  if (!params.vol_tube || !params.tube_r) {
    throw std::invalid_argument("noisy regime needs vol(T_r(M)) in the parameters");
  }
  if (std::abs(*params.tube_r - regime.tube_r) > kGeomTol) {
    throw std::invalid_argument("parameters carry the tube volume for a different radius");
  }
  return *params.vol_tube;
}

void require_balls_in_tube(double eps, const RegimeSpec& regime) {
  if (eps / 3.0 > regime.tube_r) {
    throw std::invalid_argument("noisy bound needs eps/3 <= tube_r");
  }
}

BallTerms expansion_terms(const GeometricParams& params, double eps, const RegimeSpec& regime) {
  require_eps(eps);
  if (!regime.is_noisy()) {
    return terms_from(ball_volume_lower_bound(params.m, eps / 3.0, params.s), params.vol_M,
                      params.m);
  }
  require_balls_in_tube(eps, regime);
  const double vol = tube_volume(params, regime);
  return terms_from(ball_volume_lower_bound(params.n, eps / 3.0, params.s_ambient), vol,
                    params.n);
}

BallTerms exact_terms(const ManifoldModel& model, double eps, const RegimeSpec& regime) {
  require_eps(eps);
  if (!regime.is_noisy()) {
    return terms_from(intrinsic_ball_volume(model, eps / 3.0), model.volume(), model.dim());
  }
  require_balls_in_tube(eps, regime);
  const GeometricParams params = geometric_params(model, regime.tube_r);
  return terms_from(ambient_ball_volume(model.ambient(), eps / 3.0), *params.vol_tube,
                    model.ambient().n);
}

double g_of(const BallTerms& t, std::size_t l) {
  return 1.0 - t.k * std::exp(static_cast<double>(l) * std::log1p(-t.p_min));
}

CoverageBound bound_of(const BallTerms& t, std::size_t l) {
  if (l < 1) throw std::invalid_argument("l must be >= 1");
  return {t.p_min, t.k, g_of(t, l), l};
}

std::size_t phi_of(const BallTerms& t, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  const double estimate = std::log(t.k / (1.0 - p)) / -std::log1p(-t.p_min);
  if (!(estimate < 1e15)) throw VacuousBound("sample size overflows");
  std::size_t phi = static_cast<std::size_t>(std::max(1.0, std::ceil(estimate)));
  // Settle rounding in the closed form against the bound itself.
  while (g_of(t, phi) < p) ++phi;
  while (phi > 1 && g_of(t, phi - 1) >= p) --phi;
  return phi;
}

Comparison compare(std::string name, double value, std::string relation, double threshold) {
  bool ok = false;
  if (relation == "<") ok = value < threshold;
  else if (relation == "<=") ok = value <= threshold;
  else ok = value > threshold;
  return {std::move(name), value, std::move(relation), threshold, ok};
}

}  // namespace

std::string RegimeSpec::name() const {
  if (!is_noisy()) return "clean";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, tube_r);
  return "noisy(tube_r=" + std::string(buf, res.ptr) + ")";
}

double CoverageBound::g() const noexcept { return std::clamp(g_raw, 0.0, 1.0); }

double ball_volume_lower_bound(int m, double r, double s) {
  if (m < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  const double factor = 1.0 - s * r * r / (6.0 * (m + 2));
  if (!(factor > 0.0)) {
    throw VacuousBound("curvature factor 1 - s r^2/(6(m+2)) is not positive");
  }
  return unit_ball_volume(m) * std::pow(r, m) * factor;
}

double covering_number_upper_bound(const GeometricParams& params, double eps) {
  require_eps(eps);
  return (params.m + 1) * params.vol_M / ball_volume_lower_bound(params.m, eps / 3.0, params.s);
}

CoverageBound coverage_probability_lower_bound(const GeometricParams& params, double eps,
                                               std::size_t l, const RegimeSpec& regime) {
  return bound_of(expansion_terms(params, eps, regime), l);
}

CoverageBound coverage_probability_lower_bound_exact(const ManifoldModel& model, double eps,
                                                     std::size_t l, const RegimeSpec& regime) {
  return bound_of(exact_terms(model, eps, regime), l);
}

std::size_t sample_size(const GeometricParams& params, double eps, double p,
                        const RegimeSpec& regime) {
  return phi_of(expansion_terms(params, eps, regime), p);
}

std::size_t sample_size_exact(const ManifoldModel& model, double eps, double p,
                              const RegimeSpec& regime) {
  return phi_of(exact_terms(model, eps, regime), p);
}

std::string AdmissibilityReport::describe() const {
  std::ostringstream out;
  out.precision(6);
  for (const Comparison& c : checks) {
    out << (c.ok ? "  ok    " : "  FAIL  ") << c.name << ": " << c.value << ' ' << c.relation
        << ' ' << c.threshold << '\n';
  }
  if (certificate) {
    out << "  second-variation margin " << certificate->margin << " at lambda "
        << certificate->lambda << '\n';
  }
  return out.str();
}

AdmissibilityReport check_clean_admissibility(const GeometricParams& params, double eps) {
  AdmissibilityReport report;
  report.checks.push_back(compare("eps < tau", eps, "<", params.tau));
  report.checks.push_back(compare("eps < eta", eps, "<", params.eta));
  report.checks.push_back(compare("eps > 0", eps, ">", 0.0));
  report.clean_ok = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const Comparison& c) { return c.ok; });
  return report;
}

AdmissibilityReport check_noisy_admissibility(const GeometricParams& params, double eps,
                                              double tube_r) {
  AdmissibilityReport report;
  const double tau = params.tau;
  report.checks.push_back(compare("eps < tau/2", eps, "<", tau / 2.0));
  report.checks.push_back(compare("eps > 0", eps, ">", 0.0));
  report.checks.push_back(compare("tube_r <= tau/2", tube_r, "<=", tau / 2.0));
  report.checks.push_back(compare("tube_r > 0", tube_r, ">", 0.0));
  report.checks.push_back(
      compare("kappa_N <= 1/(25 tau^2)", params.kappa_N_max, "<=", 1.0 / (25.0 * tau * tau)));
  report.noisy_ok = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const Comparison& c) { return c.ok; });
  report.certificate = second_variation_certificate(1.25 * tau, tau,
                                                    params.kappa_N_max);
  return report;
}

SecondVariationCertificate second_variation_certificate(double lambda, double tau,
                                                        double kappa_max) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  SecondVariationCertificate c;
  c.lambda = lambda;
  c.kappa_max = kappa_max;
  c.margin = 1.0 - lambda * lambda * kappa_max / 3.0;
  c.lambda_cap = 1.25 * tau;
  c.lambda_ok = lambda <= c.lambda_cap;
  return c;
}

}  // namespace topoinfer
