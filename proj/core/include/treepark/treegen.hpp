#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "treepark/model.hpp"
#include "treepark/pmf.hpp"
#include "treepark/rng.hpp"
#include "treepark/tree.hpp"

namespace treepark {

/// Per-model sampling tables, built once and shared across replicates.
class ModelSamplers {
 public:
  explicit ModelSamplers(const Model& m);

  std::uint32_t sample_offspring(Rng& rng) const { return nu_.sample(rng); }
  /// Size-biased law nubar(k) = k nu_k (well-defined by criticality).
  std::uint32_t sample_sb_offspring(Rng& rng) const { return nubar_.sample(rng); }
  std::uint32_t sample_arrival(std::uint32_t degree, Rng& rng) const {
    return (degree < mu_.size() ? mu_[degree] : mu_default_).sample(rng);
  }

 private:
  CdfSampler nu_;
  CdfSampler nubar_;
  std::vector<CdfSampler> mu_;
  CdfSampler mu_default_;
};

/// T(h): spine S_0..S_h plus grafted Galton-Watson trees. spine[i] indexes
/// the flat arrays of tree.
struct SpineTree {
  PlaneTree tree;
  std::vector<std::int32_t> spine;
};

/// Unconditioned Galton-Watson tree via the Lukasiewicz walk; nullopt when
/// the walk has not hit -1 within size_cap vertices (routine at criticality;
/// callers decide between retrying and recording the censoring).
std::optional<PlaneTree> sample_gw(const Model& m, Rng& rng, std::size_t size_cap);
std::optional<PlaneTree> sample_gw(const ModelSamplers& s, Rng& rng, std::size_t size_cap);

/// Buffer-reusing variant: fills `degrees`, returns false when censored.
bool sample_gw_degrees(const ModelSamplers& s, Rng& rng, std::size_t size_cap,
                       std::vector<std::int32_t>& degrees);

/// Exact conditioned sample of T_n: degree sequence drawn by rejection on
/// the total, then rotated by the cycle lemma to the unique valid excursion.
/// Throws UnreachableSize when no degree multiset over supp(nu) fits.
PlaneTree sample_gw_conditioned(const Model& m, std::size_t n, Rng& rng);
PlaneTree sample_gw_conditioned(const ModelSamplers& s, const Model& m, std::size_t n, Rng& rng);
bool conditioned_size_reachable(const Model& m, std::size_t n);

std::optional<SpineTree> sample_spine_tree(const Model& m, std::size_t h, Rng& rng,
                                           std::size_t size_cap);
std::optional<SpineTree> sample_spine_tree(const ModelSamplers& s, std::size_t h, Rng& rng,
                                           std::size_t size_cap);

/// Independent counts, counts[x] ~ mu_(degree x).
std::vector<std::int32_t> sample_arrivals(const PlaneTree& tree, const Model& m, Rng& rng);
void sample_arrivals_into(std::span<const std::int32_t> degrees, const ModelSamplers& s,
                          Rng& rng, std::vector<std::int32_t>& out);

/// Rotation index of the cycle lemma: for steps (degrees_i - 1) summing to
/// -1, the unique cyclic shift starting after the first minimum of the
/// partial-sum walk is a valid excursion.
std::size_t cycle_lemma_rotation(std::span<const std::int32_t> degrees);

inline constexpr std::size_t kDefaultSizeCap = 10'000'000;

}  // namespace treepark
