#pragma once

// Neighbourhood graphs, their strong collapse, and clique expansion.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "topoinfer/complex.hpp"

namespace topoinfer::detail {

class FlagGraph {
 public:
  explicit FlagGraph(std::size_t n);

  std::size_t order() const noexcept { return n_; }
  void add_edge(Vertex a, Vertex b);
  void remove_edge(Vertex a, Vertex b);
  void remove_vertex(Vertex v);
  bool adjacent(Vertex a, Vertex b) const noexcept {
    return (bits_[a * words_ + (b >> 6)] >> (b & 63)) & 1u;
  }
  bool alive(Vertex v) const noexcept { return alive_[v]; }
  std::size_t edge_count() const noexcept { return edges_; }

  /// Sorted neighbours of v in the current graph.
  std::vector<Vertex> neighbours(Vertex v) const;

  /// Repeats edge and vertex domination passes until neither removes anything. `length`
  /// orders edges longest first and a vertex's candidate dominators nearest first.
  void strong_collapse(const std::function<double(Vertex, Vertex)>& length);

  /// Cliques up to `max_dim`, lexicographic per dimension. `accept`, when set, filters
  /// simplices of dimension >= 2 and must be monotone (faces of accepted are accepted).
  SimplicialComplex clique_complex(
      int max_dim, std::size_t budget,
      const std::function<bool(std::span<const Vertex>)>& accept = {}) const;

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::vector<Vertex>> adj_;  // superset of the current neighbours
  std::vector<char> alive_;
  std::size_t edges_ = 0;
};

}  // namespace topoinfer::detail
