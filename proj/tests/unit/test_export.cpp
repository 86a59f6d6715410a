#include "oracles.hpp"

#include "densityk/baselines.hpp"
#include "densityk/export.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace densityk;

TEST_CASE("k-function csv") {
    KFunction kf;
    kf.samples = {{100, 0.5}, {5000, 0.00025}};
    CHECK(k_function_csv(kf) == "d_meters,k_density\n100,0.5\n5000,0.00025\n");
    kf.cluster_distance = 5000;
    CHECK(k_function_csv(kf) == "d_meters,k_density\n100,0.5\n5000,0.00025\n# cluster_distance_meters=5000\n");
}

TEST_CASE("k-function csv values parse back exactly") {
    const auto pts = [] { std::mt19937_64 rng(73); return oracle::mixed_scale_cloud(rng, 40); }();
    const KFunction kf = densityk_threshold(oracle::cloud_of(pts));
    std::istringstream in(k_function_csv(kf));
    std::string line;
    std::getline(in, line);
    for (const auto& s : kf.samples) {
        REQUIRE(std::getline(in, line));
        const auto comma = line.find(',');
        CHECK(std::stod(line.substr(0, comma)) == s.d);
        CHECK(std::stod(line.substr(comma + 1)) == s.k);
    }
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("# cluster_distance_meters=", 0) == 0);
}

TEST_CASE("geojson marks noise with a null rank") {
    const GeoPoint o(51.5, -0.12);
    const auto doc = oracle::make_doc({{o, destination(o, 0, 50)}, {destination(o, 1, 60), GeoPoint(0, 0)}});
    const auto result = dbscan_disambiguate(doc, 200, 2);
    const auto gj = clusters_geojson(result);
    CHECK(gj["type"] == "FeatureCollection");
    REQUIRE(gj["features"].size() == 4);
    const auto& f0 = gj["features"][0];
    CHECK(f0["geometry"]["coordinates"][0] == o.lon());
    CHECK(f0["geometry"]["coordinates"][1] == o.lat());
    CHECK(f0["properties"]["entry_id"] == "m0-0");
    CHECK(f0["properties"]["mention"] == "m0");
    CHECK(f0["properties"]["cluster_rank"] == 1);
    CHECK(gj["features"][3]["properties"]["cluster_rank"].is_null());
}

TEST_CASE("result json") {
    const GeoPoint o(51.5, -0.12);
    const auto doc = oracle::make_doc({{o, GeoPoint(0, 0)}, {destination(o, 1, 60)}}, "x");
    const auto j = result_to_json(densityk_pipeline(doc));
    CHECK(j["doc_id"] == "x");
    CHECK(j["algorithm"] == "densityk");
    REQUIRE(j["outcomes"].size() == 2);
    CHECK(j["outcomes"][0]["status"] == "resolved");
    CHECK(j["outcomes"][0]["entry_id"] == "m0-0");
    CHECK(j["outcomes"][0]["top_cluster_rank"] == 1);
    CHECK(j["clusters"][0]["members"] == nlohmann::json::array({"m0-0", "m1-0"}));
    CHECK(j["cluster_distance_meters"].is_number());
}
