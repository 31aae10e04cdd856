#pragma once

// Reference homology for small complexes. Builds full boundary matrices from a list of
// simplices and ranks them by dense Gaussian elimination; shares no code with the sparse
// reduction in the core library.

#include <cstdint>
#include <random>
#include <vector>

namespace topoinfer::oracle {

using Simplex = std::vector<std::uint32_t>;

/// Rank over GF(2) of a dense 0/1 matrix (rows of equal length).
std::size_t gf2_rank(std::vector<std::vector<std::uint8_t>> rows);

/// Betti numbers beta_0..beta_top of the closure of `simplices`, where top is the largest
/// simplex dimension present (or `top_dim` if larger).
std::vector<long long> dense_betti(const std::vector<Simplex>& simplices, int top_dim = 0);

/// Random maximal simplices on `vertices` vertices (<= 12), dimensions up to `max_dim`.
std::vector<Simplex> random_simplices(std::uint32_t vertices, int max_dim, std::mt19937_64& rng);

}  // namespace topoinfer::oracle
