#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "lrfim/entropy.hpp"
#include "lrfim/lattice.hpp"

namespace lrfim {

/// Each site of the box [0, side)^d kept with probability q; never empty.
Region random_percolation(int d, int side, double q, std::mt19937_64& rng);
/// Connected polyomino of `size` sites grown from the origin by adding uniform external-boundary sites.
Region random_eden(int d, std::size_t size, std::mt19937_64& rng);
/// Union of `count` axis-aligned cubes with sides in [1, max_side] and corners in [0, span)^d.
Region random_cube_union(int d, int count, int max_side, int span, std::mt19937_64& rng);
/// Random spanning tree on n vertices plus each remaining pair with probability q.
Graph random_connected_graph(std::size_t n, double q, std::mt19937_64& rng);

/// Mixes the three region generators by index; `max_size` bounds the result.
Region random_region(int d, std::size_t max_size, std::uint64_t seed);

}  // namespace lrfim
