#include "flag_graph.hpp"

#include <algorithm>
#include <tuple>

#include "topoinfer/errors.hpp"

namespace topoinfer::detail {

FlagGraph::FlagGraph(std::size_t n)
    : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0), adj_(n), alive_(n, 1) {}

void FlagGraph::add_edge(Vertex a, Vertex b) {
  if (a == b || adjacent(a, b)) return;
  bits_[a * words_ + (b >> 6)] |= std::uint64_t{1} << (b & 63);
  bits_[b * words_ + (a >> 6)] |= std::uint64_t{1} << (a & 63);
  adj_[a].push_back(b);
  adj_[b].push_back(a);
  ++edges_;
}

void FlagGraph::remove_edge(Vertex a, Vertex b) {
  if (!adjacent(a, b)) return;
  bits_[a * words_ + (b >> 6)] &= ~(std::uint64_t{1} << (b & 63));
  bits_[b * words_ + (a >> 6)] &= ~(std::uint64_t{1} << (a & 63));
  --edges_;
}

void FlagGraph::remove_vertex(Vertex v) {
  for (Vertex u : adj_[v]) remove_edge(v, u);
  adj_[v].clear();
  alive_[v] = 0;
}

std::vector<Vertex> FlagGraph::neighbours(Vertex v) const {
  std::vector<Vertex> out;
  out.reserve(adj_[v].size());
  for (Vertex u : adj_[v])
    if (adjacent(v, u)) out.push_back(u);
  std::sort(out.begin(), out.end());
  return out;
}

void FlagGraph::strong_collapse(const std::function<double(Vertex, Vertex)>& length) {
  bool changed = true;
  std::vector<Vertex> common;
  std::vector<std::pair<double, Vertex>> candidates;
  while (changed) {
    changed = false;
    for (Vertex v = 0; v < n_; ++v) adj_[v] = neighbours(v);

    // Edge pass: (a, b) is dominated by w if N[a] and N[b] meet inside N[w].
    std::vector<std::tuple<double, Vertex, Vertex>> edges;
    edges.reserve(edges_);
    for (Vertex a = 0; a < n_; ++a)
      for (Vertex b : adj_[a])
        if (a < b) edges.emplace_back(length(a, b), a, b);
    std::sort(edges.begin(), edges.end(),
              [](const auto& x, const auto& y) { return std::get<0>(x) > std::get<0>(y); });

    for (const auto& [len, a, b] : edges) {
      if (!adjacent(a, b)) continue;
      common.clear();
      const Vertex small = adj_[a].size() <= adj_[b].size() ? a : b;
      const Vertex other = small == a ? b : a;
      for (Vertex c : adj_[small])
        if (c != other && adjacent(small, c) && adjacent(other, c)) common.push_back(c);
      if (common.empty()) continue;
      for (Vertex w : common) {
        const bool dominates = std::all_of(common.begin(), common.end(), [&](Vertex c) {
          return c == w || adjacent(w, c);
        });
        if (dominates) {
          remove_edge(a, b);
          changed = true;
          break;
        }
      }
    }

    // Vertex pass: v is dominated by a neighbour w if N[v] is inside N[w].
    for (Vertex v = 0; v < n_; ++v) {
      if (!alive_[v]) continue;
      const std::vector<Vertex> nb = neighbours(v);
      if (nb.empty()) continue;
      candidates.clear();
      for (Vertex w : nb) candidates.emplace_back(length(v, w), w);
      std::sort(candidates.begin(), candidates.end());
      for (const auto& [unused, w] : candidates) {
        const bool dominates =
            std::all_of(nb.begin(), nb.end(), [&](Vertex u) { return u == w || adjacent(w, u); });
        if (dominates) {
          remove_vertex(v);
          changed = true;
          break;
        }
      }
    }
  }
  for (Vertex v = 0; v < n_; ++v) adj_[v] = neighbours(v);
}

SimplicialComplex FlagGraph::clique_complex(
    int max_dim, std::size_t budget,
    const std::function<bool(std::span<const Vertex>)>& accept) const {
  std::vector<std::vector<Vertex>> flat(max_dim + 1);
  std::size_t total = 0;
  auto emit = [&](std::span<const Vertex> s) {
    if (++total > budget) throw SimplexBudgetExceeded(budget);
    auto& out = flat[s.size() - 1];
    out.insert(out.end(), s.begin(), s.end());
  };

  std::vector<std::vector<Vertex>> nbrs(n_);
  for (Vertex v = 0; v < n_; ++v)
    if (alive_[v]) nbrs[v] = neighbours(v);

  std::vector<Vertex> simplex;
  // Depth-first over increasing vertex tuples; each dimension comes out in lex order.
  std::function<void(const std::vector<Vertex>&)> extend = [&](const std::vector<Vertex>& cand) {
    for (std::size_t i = 0; i < cand.size(); ++i) {
      simplex.push_back(cand[i]);
      if (simplex.size() >= 3 && accept && !accept(simplex)) {
        simplex.pop_back();
        continue;
      }
      emit(simplex);
      if (static_cast<int>(simplex.size()) <= max_dim) {
        std::vector<Vertex> next;
        const std::vector<Vertex>& nb = nbrs[cand[i]];
        std::set_intersection(cand.begin() + i + 1, cand.end(), nb.begin(), nb.end(),
                              std::back_inserter(next));
        if (!next.empty()) extend(next);
      }
      simplex.pop_back();
    }
  };

  for (Vertex v = 0; v < n_; ++v) {
    if (!alive_[v]) continue;
    simplex.assign(1, v);
    emit(simplex);
    if (max_dim >= 1) {
      std::vector<Vertex> higher;
      for (Vertex u : nbrs[v])
        if (u > v) higher.push_back(u);
      if (!higher.empty()) extend(higher);
    }
  }
  return SimplicialComplex::from_sorted(std::move(flat));
}

}  // namespace topoinfer::detail
