#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "topoinfer/geometry.hpp"
#include "topoinfer/sampling.hpp"

namespace topoinfer {

using Vertex = std::uint32_t;

/// Finite simplicial complex on a subset of the sample indices.
///
/// Simplices of dimension d are stored flat, d+1 strictly increasing vertex labels each, in
/// lexicographic order. The complex is downward closed; vertices are the 0-simplices, so
/// labels need not be contiguous (collapsing removes vertices).
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Closure of `simplices` (any order, any vertex order within a simplex, duplicates
  /// allowed). Dimensions above `max_dim` are rejected; the complex records `max_dim`
  /// even when its top dimensions are empty.
  static SimplicialComplex from_simplices(const std::vector<std::vector<Vertex>>& simplices,
                                          int max_dim);

  /// Takes per-dimension flat arrays that are already sorted and downward closed.
  static SimplicialComplex from_sorted(std::vector<std::vector<Vertex>> flat);

  int max_dim() const noexcept { return static_cast<int>(flat_.size()) - 1; }
  std::size_t vertex_count() const noexcept { return count(0); }
  std::size_t count(int d) const noexcept;
  std::size_t size() const noexcept;  // all simplices

  std::span<const Vertex> simplex(int d, std::size_t i) const noexcept {
    return {flat_[d].data() + i * (d + 1), static_cast<std::size_t>(d + 1)};
  }
  const std::vector<Vertex>& flat(int d) const noexcept { return flat_[d]; }

  /// Index of `s` (sorted) among the d-simplices, or npos.
  std::size_t find(std::span<const Vertex> s) const noexcept;
  bool contains(std::span<const Vertex> s) const noexcept { return find(s) != npos; }
  /// Every simplex of *this is a simplex of `other`.
  bool subset_of(const SimplicialComplex& other) const noexcept;

  long long euler_characteristic() const noexcept;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::vector<Vertex>> flat_;
};

enum class RipsMetric { Ambient, Intrinsic };

inline constexpr std::size_t kDefaultSimplexBudget = 5'000'000;
inline constexpr int kMaxComplexDim = 3;

struct RipsOptions {
  std::size_t budget = kDefaultSimplexBudget;
  /// Reduce the neighbourhood graph by edge and vertex strong collapses before clique
  /// expansion. Preserves the homotopy type of the flag complex, not the simplex set.
  bool collapse = false;
};

/// Vietoris-Rips complex: a simplex for every vertex set with all pairwise distances
/// <= scale (closed, relative slack 1e-12), up to dimension max_dim <= 3.
/// Throws SimplexBudgetExceeded rather than truncating.
SimplicialComplex build_rips(const SampleSet& sample, double scale, int max_dim,
                             RipsMetric metric, const RipsOptions& options = {});

/// Cech complex of the closed eps-balls in Euclidean space: a simplex for every vertex set
/// whose minimal enclosing ball has radius <= eps. Throws UnsupportedModel for curved
/// ambients.
SimplicialComplex build_cech_euclidean(const SampleSet& sample, double eps, int max_dim,
                                       std::size_t budget = kDefaultSimplexBudget);

/// Radius of the smallest ball containing 1 to 4 points of R^k.
double min_enclosing_radius(std::span<const std::vector<double>> pts);

/// Rank over GF(2) of the boundary map from dim-simplices to (dim-1)-simplices.
std::size_t boundary_rank(const SimplicialComplex& complex, int dim);

using BettiVector = std::vector<long long>;

/// beta_0 .. beta_{max_dim} over GF(2). Checks the Euler-Poincare identity and throws
/// std::logic_error if it fails.
BettiVector betti_numbers(const SimplicialComplex& complex);

BettiVector betti_reference(const ManifoldModel& model);

/// One simplex per line, grouped under `# dim d` headers.
void write_complex(std::ostream& out, const SimplicialComplex& complex);
SimplicialComplex read_complex(std::istream& in);

}  // namespace topoinfer
