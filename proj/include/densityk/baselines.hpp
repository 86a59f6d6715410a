#pragma once

#include "densityk/corpus.hpp"
#include "densityk/densityk.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace densityk {

enum class OmdMeasure {
    kAvgPairwise, ///< mean haversine distance over all chosen pairs
    kHullArea,    ///< planar hull area, equirectangular projection about the centroid (approximate)
};

inline constexpr std::uint64_t kDefaultCombinationCap = 1'000'000;

/// Measure of one combination of locations under `measure`, in m or m^2.
double combination_measure(std::span<const GeoPoint> points, OmdMeasure measure);

/// Overall minimum distance: tries every one-candidate-per-mention
/// combination and keeps the one with the smallest measure (first in
/// enumeration order on ties; the last mention varies fastest). A single
/// mention resolves to its first candidate. Throws CombinationExplosion when
/// the number of combinations exceeds `cap`.
DisambiguationResult omd(const DocumentInput& doc, OmdMeasure measure,
                         std::uint64_t cap = kDefaultCombinationCap);

/// Centroid heuristic: drop candidates farther than mean + 2 sigma from the
/// centroid of all candidates, recompute the centroid on the rest, then pick
/// each mention's candidate nearest to it (within 1 mm, smaller entry_id wins).
DisambiguationResult centroid_heuristic(const DocumentInput& doc);

/// Distance to unambiguous referents: mentions with a single candidate are
/// anchors; every other mention takes the candidate with the smallest mean
/// distance to the anchors. Throws NoAnchors when no mention is unambiguous.
DisambiguationResult dtur(const DocumentInput& doc);

/// DBSCAN over haversine distance. A point is core when at least `min_pts`
/// points (itself included) lie within `epsilon`. Border points join the
/// cluster of their lowest-index core neighbour; noise points are left out.
/// Clusters come back ordered by smallest member.
std::vector<Cluster> dbscan(const PointCloud& cloud, double epsilon, std::size_t min_pts);

/// mean + 2 sigma of the k-th nearest neighbour distances. Needs more than
/// k points (InsufficientPoints otherwise).
double kdist_epsilon(const PointCloud& cloud, std::size_t k);

DisambiguationResult dbscan_disambiguate(const DocumentInput& doc, double epsilon, std::size_t min_pts);
DisambiguationResult kdist_disambiguate(const DocumentInput& doc, std::size_t k, std::size_t min_pts);

} // namespace densityk
