#pragma once

#include "densityk/densityk.hpp"

#include <string>

#include <json.hpp>

namespace densityk {

/// `d_meters,k_density` rows followed by `# cluster_distance_meters=<value>`
/// (the trailing line is omitted while the cluster distance is unset).
std::string k_function_csv(const KFunction& kf);

/// FeatureCollection with one Point feature per cloud point carrying
/// `entry_id`, `mention` and `cluster_rank` (null for noise points).
nlohmann::json clusters_geojson(const DisambiguationResult& result);

/// Outcomes, ranked clusters (as entry ids) and the cluster distance.
nlohmann::json result_to_json(const DisambiguationResult& result);

} // namespace densityk
