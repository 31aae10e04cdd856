#include "topoinfer/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "metric_kernel.hpp"
#include "parallel.hpp"
#include "topoinfer/errors.hpp"

namespace topoinfer {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kProposalCheck = 1'000'000;
constexpr double kMinAcceptance = 1e-4;

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

double parse_real(std::string_view s) {
  double v = 0.0;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

bool dense_on_grid(const SampleSet& sample, const ManifoldModel& model, double eps,
                   int resolution, bool intrinsic) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (sample.points.empty()) return false;
  const DensityGrid grid = density_grid(model, resolution);
  if (grid.spacing > eps / 10.0 * (1.0 + 1e-12)) {
    throw std::invalid_argument("density grid spacing " + format_real(grid.spacing) +
                                " exceeds eps/10; use resolution >= " +
                                std::to_string(density_resolution(model, eps)));
  }
  const auto kernel = intrinsic ? detail::MetricKernel::intrinsic(model)
                                : detail::MetricKernel::ambient(model.ambient());
  if (intrinsic) {
    for (const Point& p : sample.points) {
      if (!on_manifold(p, model)) throw GeometryError("sample point not on " + model.id());
    }
  } else {
    for (const Point& p : sample.points) validate_point(p, model.ambient());
  }
  const std::vector<double> feats = kernel.pack(sample.points, &model);
  const std::vector<double> gfeats = kernel.pack(grid.points, &model);
  const double threshold = kernel.to_proxy(eps - grid.spacing);
  const int st = kernel.stride();
  const std::size_t n = sample.points.size();

  // Consecutive grid points are close, so the last witness is usually still a witness.
  std::size_t last = 0;
  for (std::size_t g = 0; g < grid.points.size(); ++g) {
    const double* gp = &gfeats[g * st];
    bool found = false;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t j = (last + t) % n;
      if (kernel.proxy(gp, &feats[j * st]) <= threshold) {
        last = j;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial_index) noexcept {
  return mix64(seed ^ mix64(trial_index));
}

SampleSet sample_uniform(const ManifoldModel& model, std::size_t l, std::uint64_t seed) {
  SampleSet out;
  out.model = model;
  out.seed = seed;
  out.source = SampleSource::OnManifold;
  out.points.reserve(l);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < l; ++i) {
    switch (model.kind()) {
      case ModelKind::CircleR2:
      case ModelKind::SmallCircleS2:
      case ModelKind::CircleH2:
        out.points.push_back(model.embed(std::array{angle(rng)}));
        break;
      case ModelKind::TorusR4: {
        const double a = angle(rng);
        const double b = angle(rng);
        out.points.push_back(model.embed(std::array{a, b}));
        break;
      }
      case ModelKind::SphereR3: {
        double x, y, z, norm;
        do {
          x = gauss(rng);
          y = gauss(rng);
          z = gauss(rng);
          norm = std::sqrt(x * x + y * y + z * z);
        } while (norm < 1e-12);
        Point p;
        p.coords = {x / norm, y / norm, z / norm};
        p.chart = {std::atan2(std::hypot(p.coords[0], p.coords[1]), p.coords[2]),
                   std::atan2(p.coords[1], p.coords[0])};
        out.points.push_back(std::move(p));
        break;
      }
    }
  }
  out.proposals = l;
  out.acceptance_rate = 1.0;
  return out;
}

SampleSet sample_tube(const ManifoldModel& model, std::size_t l, double r, std::uint64_t seed) {
  const double tau = geometric_params(model).tau;
  if (!(r > 0.0 && r < tau)) {
    throw std::invalid_argument("tube radius must lie in (0, tau = " + format_real(tau) + ")");
  }
  SampleSet out;
  out.model = model;
  out.seed = seed;
  out.source = SampleSource::Tube;
  out.tube_r = r;
  out.points.reserve(l);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);

  const int cd = model.ambient().coord_dim();
  std::uint64_t proposals = 0;
  auto propose = [&]() -> Point {
    Point p;
    switch (model.kind()) {
      case ModelKind::CircleR2:
      case ModelKind::SphereR3:
      case ModelKind::TorusR4: {
        // Every coordinate of M lies in [-1, 1].
        const double half = 1.0 + r;
        p.coords.resize(cd);
        for (auto& c : p.coords) c = (2.0 * unit(rng) - 1.0) * half;
        break;
      }
      case ModelKind::SmallCircleS2: {
        const double lo = std::max(0.0, model.rho() - r);
        const double hi = std::min(kPi, model.rho() + r);
        // Area on S^2 is uniform in z.
        const double z = std::cos(hi) + unit(rng) * (std::cos(lo) - std::cos(hi));
        const double ph = angle(rng);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        p.coords = {s * std::cos(ph), s * std::sin(ph), z};
        break;
      }
      case ModelKind::CircleH2: {
        const double lo = std::max(0.0, model.rho() - r);
        const double hi = model.rho() + r;
        // Area on H^2 is uniform in cosh t.
        const double u = std::cosh(lo) + unit(rng) * (std::cosh(hi) - std::cosh(lo));
        const double ph = angle(rng);
        const double s = std::sqrt(std::max(0.0, u * u - 1.0));
        p.coords = {u, s * std::cos(ph), s * std::sin(ph)};
        break;
      }
    }
    ++proposals;
    return p;
  };

  while (out.points.size() < l) {
    Point p = propose();
    if (distance_to_manifold(p, model) < r) out.points.push_back(std::move(p));
    if (proposals % kProposalCheck == 0 &&
        static_cast<double>(out.points.size()) < kMinAcceptance * static_cast<double>(proposals)) {
      throw SamplingError("tube sampling acceptance rate below 1e-4 after " +
                          std::to_string(proposals) + " proposals; superset too loose");
    }
  }
  out.proposals = proposals;
  out.acceptance_rate =
      proposals == 0 ? 1.0 : static_cast<double>(out.points.size()) / static_cast<double>(proposals);
  return out;
}

DensityGrid density_grid(const ManifoldModel& model, int resolution) {
  if (resolution < 1) throw std::invalid_argument("resolution must be positive");
  DensityGrid grid;
  switch (model.kind()) {
    case ModelKind::CircleR2:
    case ModelKind::SmallCircleS2:
    case ModelKind::CircleH2:
      for (int i = 0; i < resolution; ++i) {
        grid.points.push_back(model.embed(std::array{kTwoPi * i / resolution}));
      }
      grid.spacing = model.volume() / resolution;
      break;
    case ModelKind::TorusR4:
      for (int i = 0; i < resolution; ++i)
        for (int j = 0; j < resolution; ++j)
          grid.points.push_back(
              model.embed(std::array{kTwoPi * i / resolution, kTwoPi * j / resolution}));
      grid.spacing = kTwoPi / resolution;
      break;
    case ModelKind::SphereR3: {
      // Rings at the centres of `resolution` latitude bands of width h. Along each ring the
      // arc step is at most h at every latitude of the band, so any point is within h/2 of a
      // ring and then h/2 along it.
      const double h = kPi / resolution;
      for (int i = 0; i < resolution; ++i) {
        const double th = (i + 0.5) * h;
        const double lo = th - h / 2.0, hi = th + h / 2.0;
        const double widest = (lo <= kPi / 2 && hi >= kPi / 2)
                                  ? 1.0
                                  : std::max(std::sin(lo), std::sin(hi));
        const int count = std::max(1, static_cast<int>(std::ceil(kTwoPi * widest / h)));
        for (int j = 0; j < count; ++j) {
          grid.points.push_back(model.embed(std::array{th, kTwoPi * j / count}));
        }
      }
      grid.spacing = h;
      break;
    }
  }
  return grid;
}

int density_resolution(const ManifoldModel& model, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  double span = 0.0;
  switch (model.kind()) {
    case ModelKind::CircleR2:
    case ModelKind::SmallCircleS2:
    case ModelKind::CircleH2: span = model.volume(); break;
    case ModelKind::TorusR4: span = kTwoPi; break;
    case ModelKind::SphereR3: span = kPi; break;
  }
  int res = std::max(1, static_cast<int>(std::ceil(span * 10.0 / eps)));
  while (span / res > eps / 10.0) ++res;
  return res;
}

bool is_eps_dense_in_M(const SampleSet& sample, const ManifoldModel& model, double eps,
                       int resolution) {
  if (sample.source != SampleSource::OnManifold) {
    throw std::invalid_argument("density in M is defined for on-manifold samples only");
  }
  if (sample.points.empty()) return false;
  // One intrinsic ball of radius >= diam(M) is all of M.
  if (eps >= model.intrinsic_diameter()) return true;
  return dense_on_grid(sample, model, eps, resolution, /*intrinsic=*/true);
}

bool is_eps_dense_wrt_M(const SampleSet& sample, const ManifoldModel& model, double eps,
                        int resolution) {
  return dense_on_grid(sample, model, eps, resolution, /*intrinsic=*/false);
}

double empirical_coverage_probability(const ManifoldModel& model, std::size_t l, double eps,
                                      std::size_t trials, CoverageMode mode, std::uint64_t seed,
                                      unsigned workers) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (l == 0) return 0.0;
  const int resolution = density_resolution(model, eps);
  std::vector<char> dense(trials, 0);
  detail::parallel_for(trials, workers, [&](std::size_t i) {
    const std::uint64_t s = trial_seed(seed, i);
    if (mode.kind == CoverageMode::Kind::InM) {
      dense[i] = is_eps_dense_in_M(sample_uniform(model, l, s), model, eps, resolution);
    } else {
      dense[i] = is_eps_dense_wrt_M(sample_tube(model, l, mode.tube_r, s), model, eps, resolution);
    }
  });
  const auto hits = std::count(dense.begin(), dense.end(), 1);
  return static_cast<double>(hits) / static_cast<double>(trials);
}

void write_sample_csv(std::ostream& out, const SampleSet& sample) {
  out << "# model=" << sample.model.id() << '\n';
  out << "# source="
      << (sample.source == SampleSource::OnManifold ? std::string("on_manifold")
                                                    : "tube:r=" + format_real(sample.tube_r))
      << '\n';
  out << "# seed=" << sample.seed << '\n';
  const int cd = sample.model.ambient().coord_dim();
  for (int a = 0; a < cd; ++a) out << (a ? "," : "") << 'x' << a;
  out << '\n';
  for (const Point& p : sample.points) {
    for (std::size_t a = 0; a < p.coords.size(); ++a) out << (a ? "," : "") << format_real(p.coords[a]);
    out << '\n';
  }
}

SampleSet read_sample_csv(std::istream& in) {
  SampleSet out;
  bool have_model = false;
  bool have_columns = false;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw ConfigError("sample csv", lineno, what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string_view body(line);
      body.remove_prefix(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string_view key = body.substr(0, eq);
      const std::string_view val = body.substr(eq + 1);
      try {
        if (key == "model") {
          out.model = ManifoldModel::parse(val);
          have_model = true;
        } else if (key == "source") {
          if (val == "on_manifold") {
            out.source = SampleSource::OnManifold;
          } else if (val.starts_with("tube:r=")) {
            out.source = SampleSource::Tube;
            out.tube_r = parse_real(val.substr(7));
          } else {
            fail("unknown source '" + std::string(val) + "'");
          }
        } else if (key == "seed") {
          out.seed = std::stoull(std::string(val));
        }
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        fail(e.what());
      }
      continue;
    }
    if (!have_columns) {
      have_columns = true;
      if (line[0] == 'x') continue;
    }
    if (!have_model) fail("missing '# model=' header before data");
    Point p;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      try {
        p.coords.push_back(parse_real(rest.substr(0, comma)));
      } catch (const std::exception& e) {
        fail(e.what());
      }
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    try {
      validate_point(p, out.model.ambient());
    } catch (const GeometryError& e) {
      fail(e.what());
    }
    out.points.push_back(std::move(p));
  }
  if (!have_model) throw ConfigError("sample csv", 0, "missing '# model=' header");
  out.proposals = out.points.size();
  return out;
}

}  // namespace topoinfer
