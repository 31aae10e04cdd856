#include "topoinfer/complex.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "flag_graph.hpp"
#include "metric_kernel.hpp"
#include "topoinfer/errors.hpp"

namespace topoinfer {
namespace {

constexpr double kInclusionSlack = 1e-12;

void check_max_dim(int max_dim) {
  if (max_dim < 0 || max_dim > kMaxComplexDim) {
    throw std::invalid_argument("max_dim must lie in [0, 3]");
  }
}

bool lex_less(const Vertex* a, const Vertex* b, int width) {
  return std::lexicographical_compare(a, a + width, b, b + width);
}

// Sorts the d-simplices of a flat array and removes duplicates.
void canonicalise(std::vector<Vertex>& flat, int width) {
  const std::size_t count = flat.size() / width;
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return lex_less(&flat[x * width], &flat[y * width], width);
  });
  std::vector<Vertex> out;
  out.reserve(flat.size());
  for (std::size_t k = 0; k < count; ++k) {
    const Vertex* s = &flat[order[k] * width];
    if (!out.empty() && std::equal(s, s + width, out.end() - width)) continue;
    out.insert(out.end(), s, s + width);
  }
  flat = std::move(out);
}

// (Squared) Euclidean distance helpers for the enclosing-ball computation.
double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Circumcentre of the points in the affine hull they span; false if degenerate.
bool circumcentre(std::span<const std::vector<double>> pts, std::vector<double>& centre) {
  const std::size_t s = pts.size();
  const std::size_t k = pts[0].size();
  centre = pts[0];
  if (s == 1) return true;
  const std::size_t q = s - 1;
  std::vector<std::vector<double>> v(q, std::vector<double>(k));
  double scale = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t a = 0; a < k; ++a) v[i][a] = pts[i + 1][a] - pts[0][a];
    scale = std::max(scale, dot(v[i], v[i]));
  }
  if (scale == 0.0) return false;
  // Gram system G lambda = b with b_i = |v_i|^2 / 2, Gaussian elimination with pivoting.
  std::vector<std::vector<double>> g(q, std::vector<double>(q + 1));
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) g[i][j] = dot(v[i], v[j]);
    g[i][q] = dot(v[i], v[i]) / 2.0;
  }
  for (std::size_t c = 0; c < q; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < q; ++r)
      if (std::abs(g[r][c]) > std::abs(g[piv][c])) piv = r;
    if (std::abs(g[piv][c]) <= 1e-12 * scale) return false;
    std::swap(g[c], g[piv]);
    for (std::size_t r = 0; r < q; ++r) {
      if (r == c) continue;
      const double f = g[r][c] / g[c][c];
      for (std::size_t j = c; j <= q; ++j) g[r][j] -= f * g[c][j];
    }
  }
  for (std::size_t i = 0; i < q; ++i) {
    const double lambda = g[i][q] / g[i][i];
    for (std::size_t a = 0; a < k; ++a) centre[a] += lambda * v[i][a];
  }
  return true;
}

}  // namespace

SimplicialComplex SimplicialComplex::from_simplices(
    const std::vector<std::vector<Vertex>>& simplices, int max_dim) {
  check_max_dim(max_dim);
  std::vector<std::vector<Vertex>> flat(max_dim + 1);
  std::vector<Vertex> s, face;
  for (const auto& raw : simplices) {
    s = raw;
    std::sort(s.begin(), s.end());
    if (s.empty()) continue;
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw std::invalid_argument("simplex with a repeated vertex");
    }
    const int d = static_cast<int>(s.size()) - 1;
    if (d > max_dim) throw std::invalid_argument("simplex above max_dim");
    // Every nonempty subset is a face.
    const unsigned full = 1u << s.size();
    for (unsigned mask = 1; mask < full; ++mask) {
      face.clear();
      for (std::size_t i = 0; i < s.size(); ++i)
        if (mask & (1u << i)) face.push_back(s[i]);
      auto& out = flat[face.size() - 1];
      out.insert(out.end(), face.begin(), face.end());
    }
  }
  for (int d = 0; d <= max_dim; ++d) canonicalise(flat[d], d + 1);
  SimplicialComplex out;
  out.flat_ = std::move(flat);
  return out;
}

SimplicialComplex SimplicialComplex::from_sorted(std::vector<std::vector<Vertex>> flat) {
  if (flat.empty() || static_cast<int>(flat.size()) > kMaxComplexDim + 1) {
    throw std::invalid_argument("complex dimension out of range");
  }
  SimplicialComplex out;
  out.flat_ = std::move(flat);
  return out;
}

std::size_t SimplicialComplex::count(int d) const noexcept {
  if (d < 0 || d > max_dim()) return 0;
  return flat_[d].size() / (d + 1);
}

std::size_t SimplicialComplex::size() const noexcept {
  std::size_t total = 0;
  for (int d = 0; d <= max_dim(); ++d) total += count(d);
  return total;
}

std::size_t SimplicialComplex::find(std::span<const Vertex> s) const noexcept {
  const int d = static_cast<int>(s.size()) - 1;
  if (d < 0 || d > max_dim()) return npos;
  const int w = d + 1;
  std::size_t lo = 0, hi = count(d);
  const Vertex* base = flat_[d].data();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (lex_less(base + mid * w, s.data(), w)) lo = mid + 1;
    else hi = mid;
  }
  if (lo < count(d) && std::equal(s.begin(), s.end(), base + lo * w)) return lo;
  return npos;
}

bool SimplicialComplex::subset_of(const SimplicialComplex& other) const noexcept {
  for (int d = 0; d <= max_dim(); ++d)
    for (std::size_t i = 0; i < count(d); ++i)
      if (!other.contains(simplex(d, i))) return false;
  return true;
}

long long SimplicialComplex::euler_characteristic() const noexcept {
  long long chi = 0;
  for (int d = 0; d <= max_dim(); ++d) {
    chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(count(d));
  }
  return chi;
}

SimplicialComplex build_rips(const SampleSet& sample, double scale, int max_dim,
                             RipsMetric metric, const RipsOptions& options) {
  check_max_dim(max_dim);
  if (!(scale >= 0.0)) throw std::invalid_argument("scale must be nonnegative");
  const ManifoldModel& model = sample.model;
  if (metric == RipsMetric::Intrinsic) {
    if (sample.source != SampleSource::OnManifold) {
      throw std::invalid_argument("intrinsic metric needs an on-manifold sample");
    }
    for (const Point& p : sample.points)
      if (!on_manifold(p, model)) throw GeometryError("sample point not on " + model.id());
  } else {
    for (const Point& p : sample.points) validate_point(p, model.ambient());
  }
  const auto kernel = metric == RipsMetric::Intrinsic
                          ? detail::MetricKernel::intrinsic(model)
                          : detail::MetricKernel::ambient(model.ambient());
  const std::vector<double> feats = kernel.pack(sample.points, &model);
  const int st = kernel.stride();
  const std::size_t n = sample.points.size();
  const double threshold = kernel.to_proxy(scale * (1.0 + kInclusionSlack));

  detail::FlagGraph graph(n);
  if (max_dim >= 1) {
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = a + 1; b < n; ++b)
        if (kernel.proxy(&feats[a * st], &feats[b * st]) <= threshold) graph.add_edge(a, b);
  }
  if (options.collapse) {
    graph.strong_collapse(
        [&](Vertex a, Vertex b) { return kernel.proxy(&feats[a * st], &feats[b * st]); });
  }
  return graph.clique_complex(max_dim, options.budget);
}

double min_enclosing_radius(std::span<const std::vector<double>> pts) {
  if (pts.empty() || pts.size() > 4) {
    throw std::invalid_argument("enclosing ball needs 1 to 4 points");
  }
  const std::size_t s = pts.size();
  // The smallest ball is the circumball of some support subset; any circumball that
  // contains every point is at least as large.
  double best = kInf;
  std::vector<std::vector<double>> subset;
  std::vector<double> centre;
  for (unsigned mask = 1; mask < (1u << s); ++mask) {
    subset.clear();
    for (std::size_t i = 0; i < s; ++i)
      if (mask & (1u << i)) subset.push_back(pts[i]);
    if (!circumcentre(subset, centre)) continue;
    double r2 = 0.0;
    for (std::size_t a = 0; a < centre.size(); ++a) {
      r2 += (centre[a] - subset[0][a]) * (centre[a] - subset[0][a]);
    }
    if (std::sqrt(r2) >= best) continue;
    bool encloses = true;
    for (std::size_t i = 0; i < s && encloses; ++i) {
      double d2 = 0.0;
      for (std::size_t a = 0; a < centre.size(); ++a)
        d2 += (centre[a] - pts[i][a]) * (centre[a] - pts[i][a]);
      encloses = d2 <= r2 * (1.0 + 1e-12) + 1e-300;
    }
    if (encloses) best = std::sqrt(r2);
  }
  return best;
}

SimplicialComplex build_cech_euclidean(const SampleSet& sample, double eps, int max_dim,
                                       std::size_t budget) {
  check_max_dim(max_dim);
  const ManifoldModel& model = sample.model;
  if (model.ambient().kind != AmbientKind::Euclidean) {
    throw UnsupportedModel("Cech complex is implemented for Euclidean ambients only");
  }
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
  for (const Point& p : sample.points) validate_point(p, model.ambient());
  const std::size_t n = sample.points.size();
  const double limit = eps * (1.0 + kInclusionSlack);

  detail::FlagGraph graph(n);
  if (max_dim >= 1) {
    const auto kernel = detail::MetricKernel::ambient(model.ambient());
    const std::vector<double> feats = kernel.pack(sample.points, &model);
    const int st = kernel.stride();
    const double threshold = kernel.to_proxy(2.0 * limit);
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = a + 1; b < n; ++b)
        if (kernel.proxy(&feats[a * st], &feats[b * st]) <= threshold) graph.add_edge(a, b);
  }
  std::vector<std::vector<double>> pts;
  auto accept = [&](std::span<const Vertex> s) {
    pts.clear();
    for (Vertex v : s) pts.push_back(sample.points[v].coords);
    return min_enclosing_radius(pts) <= limit;
  };
  return graph.clique_complex(max_dim, budget, accept);
}

BettiVector betti_reference(const ManifoldModel& model) {
  const auto& ref = model.betti_reference();
  return BettiVector(ref.begin(), ref.end());
}

void write_complex(std::ostream& out, const SimplicialComplex& complex) {
  for (int d = 0; d <= complex.max_dim(); ++d) {
    out << "# dim " << d << '\n';
    for (std::size_t i = 0; i < complex.count(d); ++i) {
      const auto s = complex.simplex(d, i);
      for (std::size_t k = 0; k < s.size(); ++k) out << (k ? " " : "") << s[k];
      out << '\n';
    }
  }
}

SimplicialComplex read_complex(std::istream& in) {
  std::vector<std::vector<Vertex>> simplices;
  int max_dim = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      int d = 0;
      const auto pos = line.find("dim");
      if (pos != std::string::npos) {
        const char* first = line.data() + pos + 3;
        while (*first == ' ') ++first;
        auto [ptr, ec] = std::from_chars(first, line.data() + line.size(), d);
        if (ec != std::errc{} || d < 0 || d > kMaxComplexDim) {
          throw ConfigError("complex", lineno, "bad dimension header");
        }
        max_dim = std::max(max_dim, d);
      }
      continue;
    }
    std::vector<Vertex> s;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      Vertex v = 0;
      auto [ptr, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{}) throw ConfigError("complex", lineno, "bad vertex index");
      s.push_back(v);
      p = ptr;
    }
    if (static_cast<int>(s.size()) - 1 > kMaxComplexDim) {
      throw ConfigError("complex", lineno, "simplex above dimension 3");
    }
    max_dim = std::max(max_dim, static_cast<int>(s.size()) - 1);
    simplices.push_back(std::move(s));
  }
  return SimplicialComplex::from_simplices(simplices, max_dim);
}

}  // namespace topoinfer
