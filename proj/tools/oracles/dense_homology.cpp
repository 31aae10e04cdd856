#include "dense_homology.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace topoinfer::oracle {

std::size_t gf2_rank(std::vector<std::vector<std::uint8_t>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && !rows[pivot][c]) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && rows[r][c]) {
        for (std::size_t k = c; k < cols; ++k) rows[r][k] ^= rows[rank][k];
      }
    }
    ++rank;
  }
  return rank;
}

std::vector<long long> dense_betti(const std::vector<Simplex>& simplices, int top_dim) {
  std::vector<std::set<Simplex>> by_dim;
  for (Simplex s : simplices) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty()) continue;
    if (s.size() > 16) throw std::invalid_argument("simplex too large for the dense oracle");
    for (unsigned mask = 1; mask < (1u << s.size()); ++mask) {
      Simplex face;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (mask & (1u << i)) face.push_back(s[i]);
      if (by_dim.size() < face.size()) by_dim.resize(face.size());
      by_dim[face.size() - 1].insert(face);
    }
  }
  const int top = std::max(top_dim, static_cast<int>(by_dim.size()) - 1);
  by_dim.resize(top + 1);

  std::vector<std::map<Simplex, std::size_t>> index(top + 1);
  for (int d = 0; d <= top; ++d) {
    std::size_t i = 0;
    for (const auto& s : by_dim[d]) index[d][s] = i++;
  }
  // rank[d] = rank of the boundary from d-simplices to (d-1)-simplices.
  std::vector<std::size_t> rank(top + 2, 0);
  for (int d = 1; d <= top; ++d) {
    std::vector<std::vector<std::uint8_t>> m(by_dim[d - 1].size(),
                                             std::vector<std::uint8_t>(by_dim[d].size(), 0));
    std::size_t col = 0;
    for (const auto& s : by_dim[d]) {
      for (std::size_t skip = 0; skip < s.size(); ++skip) {
        Simplex face;
        for (std::size_t j = 0; j < s.size(); ++j)
          if (j != skip) face.push_back(s[j]);
        m[index[d - 1].at(face)][col] = 1;
      }
      ++col;
    }
    rank[d] = gf2_rank(std::move(m));
  }
  std::vector<long long> betti(top + 1);
  for (int d = 0; d <= top; ++d) {
    betti[d] = static_cast<long long>(by_dim[d].size()) - static_cast<long long>(rank[d]) -
               static_cast<long long>(rank[d + 1]);
  }
  return betti;
}

std::vector<Simplex> random_simplices(std::uint32_t vertices, int max_dim, std::mt19937_64& rng) {
  if (vertices < 1 || vertices > 12) throw std::invalid_argument("1 to 12 vertices");
  std::uniform_int_distribution<int> count(1, 3 * static_cast<int>(vertices));
  std::uniform_int_distribution<int> dim(0, max_dim);
  std::vector<std::uint32_t> pool(vertices);
  for (std::uint32_t v = 0; v < vertices; ++v) pool[v] = v;
  std::vector<Simplex> out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const std::size_t size = std::min<std::size_t>(dim(rng) + 1, vertices);
    std::shuffle(pool.begin(), pool.end(), rng);
    out.emplace_back(pool.begin(), pool.begin() + size);
  }
  // Keep every vertex so beta_0 counts isolated points too.
  for (std::uint32_t v = 0; v < vertices; ++v) out.push_back({v});
  return out;
}

}  // namespace topoinfer::oracle
