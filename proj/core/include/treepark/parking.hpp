#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "treepark/tree.hpp"

namespace treepark {

/// Outcome of the parking process on a decorated tree.
/// visits[x] = X_x, the number of cars that visit x;
/// parked[x] <=> X_x >= 1; edge_flux[x] = (X_x - 1)_+ is the flux from x to
/// its parent, with edge_flux[root] counting the cars exiting the tree.
struct ParkingResult {
  std::vector<std::int64_t> visits;
  std::vector<std::uint8_t> parked;
  std::vector<std::int64_t> edge_flux;
  std::int64_t root_flux = 0;
};

/// Single post-order pass of X_x = L_x + sum_children (X_c - 1)_+.
ParkingResult park(const PlaneTree& tree, std::span<const std::int32_t> arrivals);

/// Drives each car token toward the root to the first free spot, in the
/// given order over all sum(L_x) cars; token t is the t-th car in
/// vertex-major enumeration. Agrees with park() by the Abelian property.
ParkingResult park_sequential(const PlaneTree& tree, std::span<const std::int32_t> arrivals,
                              std::span<const std::uint32_t> order);

/// Root flux only, computed on a raw degree sequence without building a
/// PlaneTree; `stack` is reusable scratch.
std::int64_t park_flux(std::span<const std::int32_t> degrees,
                       std::span<const std::int32_t> arrivals,
                       std::vector<std::int64_t>& stack);

struct ClusterStats {
  std::vector<std::int64_t> sizes;  // descending
  std::int64_t c_max = 0;
  std::int64_t c_2 = 0;
};

/// Connected components of the parked-vertex-induced subgraph.
ClusterStats clusters(const PlaneTree& tree, std::span<const std::uint8_t> parked);

}  // namespace treepark
