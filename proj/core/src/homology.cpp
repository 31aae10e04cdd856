// GF(2) ranks by sparse column reduction.

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "topoinfer/complex.hpp"

namespace topoinfer {
namespace {

using Column = std::vector<std::uint32_t>;  // sorted row indices

void add_into(Column& target, const Column& source, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

// Row indices of the facets of d-simplex i, sorted.
Column boundary_column(const SimplicialComplex& k, int d, std::size_t i) {
  Column col;
  const auto s = k.simplex(d, i);
  std::vector<Vertex> face(d);
  for (int skip = 0; skip <= d; ++skip) {
    face.clear();
    for (int j = 0; j <= d; ++j)
      if (j != skip) face.push_back(s[j]);
    const std::size_t idx = k.find(face);
    if (idx == SimplicialComplex::npos) throw std::logic_error("complex is not closed");
    col.push_back(static_cast<std::uint32_t>(idx));
  }
  std::sort(col.begin(), col.end());
  return col;
}

// For each d-simplex, the sorted indices of its (d+1)-dimensional cofaces.
std::vector<Column> coboundary_columns(const SimplicialComplex& k, int d) {
  std::vector<Column> cols(k.count(d));
  for (std::size_t j = 0; j < k.count(d + 1); ++j) {
    for (std::uint32_t row : boundary_column(k, d + 1, j)) {
      cols[row].push_back(static_cast<std::uint32_t>(j));  // j ascending keeps cols sorted
    }
  }
  return cols;
}

}  // namespace

std::size_t boundary_rank(const SimplicialComplex& complex, int dim) {
  if (dim < 1 || dim > complex.max_dim()) {
    throw std::invalid_argument("boundary_rank: dim must lie in [1, max_dim]");
  }
  // Left to right, pivot = largest row index.
  std::vector<std::int64_t> owner(complex.count(dim - 1), -1);
  std::vector<Column> reduced(complex.count(dim));
  Column scratch;
  std::size_t rank = 0;
  for (std::size_t j = 0; j < complex.count(dim); ++j) {
    Column col = boundary_column(complex, dim, j);
    while (!col.empty() && owner[col.back()] >= 0) {
      add_into(col, reduced[owner[col.back()]], scratch);
    }
    if (!col.empty()) {
      owner[col.back()] = static_cast<std::int64_t>(j);
      reduced[j] = std::move(col);
      ++rank;
    }
  }
  return rank;
}

BettiVector betti_numbers(const SimplicialComplex& complex) {
  const int top = complex.max_dim();
  // rank_delta[d] = rank of the coboundary C^d -> C^{d+1} = rank of the boundary
  // C_{d+1} -> C_d.
  std::vector<std::size_t> rank_delta(top + 1, 0);
  std::vector<char> cleared;  // d-simplices known to reduce to zero
  Column scratch;
  for (int d = 0; d < top; ++d) {
    std::vector<Column> cols = coboundary_columns(complex, d);
    std::vector<std::int64_t> owner(complex.count(d + 1), -1);
    std::vector<char> pivot_rows(complex.count(d + 1), 0);
    std::size_t rank = 0;
    // Right to left, pivot = smallest row index. A pivot row of the previous dimension
    // marks a column that is a combination of later ones, so it is skipped.
    for (std::size_t jj = cols.size(); jj-- > 0;) {
      if (!cleared.empty() && cleared[jj]) continue;
      Column& col = cols[jj];
      while (!col.empty() && owner[col.front()] >= 0) {
        add_into(col, cols[owner[col.front()]], scratch);
      }
      if (!col.empty()) {
        owner[col.front()] = static_cast<std::int64_t>(jj);
        pivot_rows[col.front()] = 1;
        ++rank;
      }
    }
    rank_delta[d] = rank;
    cleared = std::move(pivot_rows);
  }

  BettiVector betti(top + 1);
  long long chi_betti = 0;
  for (int d = 0; d <= top; ++d) {
    const long long below = d > 0 ? static_cast<long long>(rank_delta[d - 1]) : 0;
    const long long above = d < top ? static_cast<long long>(rank_delta[d]) : 0;
    betti[d] = static_cast<long long>(complex.count(d)) - below - above;
    chi_betti += (d % 2 == 0 ? 1 : -1) * betti[d];
  }
  if (chi_betti != complex.euler_characteristic()) {
    throw std::logic_error("Euler-Poincare check failed: " + std::to_string(chi_betti) +
                           " != " + std::to_string(complex.euler_characteristic()));
  }
  return betti;
}

}  // namespace topoinfer
