#include "treepark/parking.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "treepark/errors.hpp"

namespace treepark {

ParkingResult park(const PlaneTree& tree, std::span<const std::int32_t> arrivals) {
  const std::size_t n = tree.size();
  if (arrivals.size() != n)
    throw Error(Errc::LengthMismatch, "arrivals length " + std::to_string(arrivals.size()) +
                                          " vs " + std::to_string(n) + " vertices");
  ParkingResult r;
  r.visits.resize(n);
  r.parked.resize(n);
  r.edge_flux.resize(n);
  // Reverse depth-first order is a post-order: when vertex i is reached, the
  // top degree(i) stack entries are exactly its children's edge fluxes.
  std::vector<std::int64_t> stack;
  for (std::size_t i = n; i-- > 0;) {
    std::int64_t x = arrivals[i];
    for (std::int32_t c = 0; c < tree.degree(i); ++c) {
      x += stack.back();
      stack.pop_back();
    }
    r.visits[i] = x;
    r.parked[i] = x >= 1;
    r.edge_flux[i] = x > 1 ? x - 1 : 0;
    stack.push_back(r.edge_flux[i]);
  }
  r.root_flux = r.edge_flux[0];
#ifndef NDEBUG
  // conservation of cars: arrivals = root flux + parked spots
  std::int64_t total = std::accumulate(arrivals.begin(), arrivals.end(), std::int64_t{0});
  std::int64_t parked_count = std::accumulate(r.parked.begin(), r.parked.end(), std::int64_t{0});
  assert(total == r.root_flux + parked_count);
#endif
  return r;
}

std::int64_t park_flux(std::span<const std::int32_t> degrees,
                       std::span<const std::int32_t> arrivals,
                       std::vector<std::int64_t>& stack) {
  stack.clear();
  for (std::size_t i = degrees.size(); i-- > 0;) {
    std::int64_t x = arrivals[i];
    for (std::int32_t c = 0; c < degrees[i]; ++c) {
      x += stack.back();
      stack.pop_back();
    }
    stack.push_back(x > 1 ? x - 1 : 0);
  }
  return stack.back();
}

ParkingResult park_sequential(const PlaneTree& tree, std::span<const std::int32_t> arrivals,
                              std::span<const std::uint32_t> order) {
  const std::size_t n = tree.size();
  if (arrivals.size() != n)
    throw Error(Errc::LengthMismatch, "arrivals length mismatch");
  const std::int64_t total =
      std::accumulate(arrivals.begin(), arrivals.end(), std::int64_t{0});
  if (static_cast<std::int64_t>(order.size()) != total)
    throw Error(Errc::LengthMismatch, "order enumerates " + std::to_string(order.size()) +
                                          " cars, expected " + std::to_string(total));
  // token -> arrival vertex, vertex-major
  std::vector<std::uint32_t> car_vertex(order.size());
  {
    std::size_t t = 0;
    for (std::size_t v = 0; v < n; ++v)
      for (std::int32_t c = 0; c < arrivals[v]; ++c) car_vertex[t++] = static_cast<std::uint32_t>(v);
  }
  ParkingResult r;
  r.visits.assign(n, 0);
  r.parked.assign(n, 0);
  r.edge_flux.assign(n, 0);
  std::vector<std::uint8_t> seen(order.size(), 0);
  for (std::uint32_t token : order) {
    if (token >= order.size() || seen[token])
      throw Error(Errc::LengthMismatch, "order is not a permutation of car tokens");
    seen[token] = 1;
    std::int64_t v = car_vertex[token];
    for (;;) {
      ++r.visits[v];
      if (!r.parked[v]) {
        r.parked[v] = 1;
        break;
      }
      ++r.edge_flux[v];
      v = tree.parent(static_cast<std::size_t>(v));
      if (v < 0) {  // drove through the root: the car exits
        ++r.root_flux;
        break;
      }
    }
  }
  r.edge_flux[0] = r.root_flux;
  return r;
}

ClusterStats clusters(const PlaneTree& tree, std::span<const std::uint8_t> parked) {
  const std::size_t n = tree.size();
  ClusterStats cs;
  if (parked.size() != n)
    throw Error(Errc::LengthMismatch, "parked length mismatch");
  // parents precede children in depth-first order, so one forward pass labels
  // components
  std::vector<std::int32_t> comp(n, -1);
  std::vector<std::int64_t> sizes;
  for (std::size_t i = 0; i < n; ++i) {
    if (!parked[i]) continue;
    const std::int32_t p = tree.parent(i);
    if (p >= 0 && parked[p]) {
      comp[i] = comp[p];
      ++sizes[comp[i]];
    } else {
      comp[i] = static_cast<std::int32_t>(sizes.size());
      sizes.push_back(1);
    }
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  cs.c_max = sizes.empty() ? 0 : sizes[0];
  cs.c_2 = sizes.size() > 1 ? sizes[1] : 0;
  cs.sizes = std::move(sizes);
  return cs;
}

}  // namespace treepark
