#ifndef LOLREC_SLOPE_ONE_HPP
#define LOLREC_SLOPE_ONE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "lolrec/ratings.hpp"

namespace lolrec {

// Pairwise item deviation table with co-rating counts:
//   dev(i, j) = mean over users rating both of (r_ui - r_uj)
// Antisymmetric; defined only where the co-rating count is >= 1. The table
// is dense over the item set, which is fine for catalogs of a few hundred
// champions. Immutable after training.
struct SlopeOneModel {
    IndexMap<std::int32_t> items;
    std::vector<double> dev;             // n x n row-major
    std::vector<std::uint32_t> counts;   // n x n co-rating counts

    std::size_t n_items() const noexcept { return items.size(); }
    double deviation(std::uint32_t i, std::uint32_t j) const { return dev[i * n_items() + j]; }
    std::uint32_t count(std::uint32_t i, std::uint32_t j) const { return counts[i * n_items() + j]; }
};

SlopeOneModel train_slope_one(const Dataset& dataset);

// Weighted Slope One estimate for one item given a profile:
//   (sum over co-rated j of c(item, j) * (r_j + dev(item, j))) / sum of c(item, j)
// clamped to [1, 100]. With weighted = false the co-rating counts drop out
// and co-rated neighbors contribute equally. Falls back to the profile
// mean when no profile item co-rates with the target. Throws ModelError
// for an item the model has never seen, DataError for an empty profile.
double predict_slope_one(const SlopeOneModel& model, std::span<const ProfileEntry> profile,
                         std::int32_t champion_id, bool weighted = true);

}  // namespace lolrec

#endif  // LOLREC_SLOPE_ONE_HPP
