#include "densityk/export.hpp"

#include <fmt/format.h>

namespace densityk {

using nlohmann::json;

std::string k_function_csv(const KFunction& kf) {
    std::string out = "d_meters,k_density\n";
    for (const auto& s : kf.samples) {
        out += fmt::format("{},{}\n", s.d, s.k);
    }
    if (kf.cluster_distance) {
        out += fmt::format("# cluster_distance_meters={}\n", *kf.cluster_distance);
    }
    return out;
}

json clusters_geojson(const DisambiguationResult& result) {
    std::vector<json> rank_of(result.cloud.size(), json(nullptr));
    for (const auto& c : result.ranked_clusters) {
        for (std::size_t idx : c.members) {
            rank_of.at(idx) = c.rank;
        }
    }
    json features = json::array();
    for (std::size_t i = 0; i < result.cloud.size(); ++i) {
        const auto& p = result.cloud.points[i];
        features.push_back({
            {"type", "Feature"},
            {"geometry", {{"type", "Point"}, {"coordinates", {p.location.lon(), p.location.lat()}}}},
            {"properties", {{"entry_id", p.entry_id}, {"mention", p.mention}, {"cluster_rank", rank_of[i]}}},
        });
    }
    return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

json result_to_json(const DisambiguationResult& result) {
    json outcomes = json::array();
    for (const auto& o : result.outcomes) {
        json item = {{"mention", o.mention}, {"status", to_string(o.status)}};
        item["entry_id"] = o.entry_id ? json(*o.entry_id) : json(nullptr);
        item["top_cluster_rank"] = o.top_cluster_rank ? json(*o.top_cluster_rank) : json(nullptr);
        outcomes.push_back(std::move(item));
    }
    json clusters = json::array();
    for (const auto& c : result.ranked_clusters) {
        json members = json::array();
        for (std::size_t idx : c.members) {
            members.push_back(result.cloud.points.at(idx).entry_id);
        }
        clusters.push_back({{"rank", c.rank}, {"members", std::move(members)}});
    }
    json j = {{"doc_id", result.doc_id},
              {"algorithm", result.algorithm},
              {"outcomes", std::move(outcomes)},
              {"clusters", std::move(clusters)}};
    j["cluster_distance_meters"] = result.cluster_distance ? json(*result.cluster_distance) : json(nullptr);
    return j;
}

} // namespace densityk
