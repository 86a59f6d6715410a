#include "oracles.hpp"

#include "densityk/algorithm.hpp"
#include "densityk/baselines.hpp"
#include "densityk/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

using namespace densityk;

namespace {

// First combination (last mention fastest) with the smallest measure.
std::vector<std::size_t> exhaustive_omd(const DocumentInput& doc, OmdMeasure measure, double* best_value) {
    std::vector<std::size_t> digit(doc.mentions.size(), 0), best;
    double best_v = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t)> walk = [&](std::size_t m) {
        if (m == doc.mentions.size()) {
            std::vector<GeoPoint> pts;
            for (std::size_t i = 0; i < m; ++i) {
                pts.push_back(doc.mentions[i].candidates[digit[i]].location);
            }
            const double v = combination_measure(pts, measure);
            if (v < best_v) {
                best_v = v;
                best = digit;
            }
            return;
        }
        for (digit[m] = 0; digit[m] < doc.mentions[m].candidates.size(); ++digit[m]) {
            walk(m + 1);
        }
    };
    walk(0);
    *best_value = best_v;
    return best;
}

} // namespace

TEST_CASE("omd picks the unique nearby pair") {
    const GeoPoint a1(52.52, 13.40);
    const DocumentInput doc = oracle::make_doc({{GeoPoint(10, 10), a1}, {destination(a1, 1, 500), GeoPoint(-20, 40)}});
    const auto r = omd(doc, OmdMeasure::kAvgPairwise);
    CHECK(r.outcomes[0].entry_id == "m0-1");
    CHECK(r.outcomes[1].entry_id == "m1-0");
    // Two points span no area, so the hull measure cannot separate the pairs.
    CHECK(omd(doc, OmdMeasure::kHullArea).outcomes[0].entry_id == "m0-0");
}

TEST_CASE("omd single mention takes its first candidate") {
    const auto r = omd(oracle::make_doc({{GeoPoint(1, 1), GeoPoint(2, 2)}}), OmdMeasure::kAvgPairwise);
    CHECK(r.outcomes[0].entry_id == "m0-0");
}

TEST_CASE("omd matches exhaustive enumeration") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<std::vector<GeoPoint>> groups(2 + rng() % 3);
        for (auto& g : groups) {
            for (std::size_t c = 0; c < 1 + rng() % 4; ++c) {
                g.push_back(destination(GeoPoint(40, -3), oracle::uniform(rng, 0, 6.28), oracle::uniform(rng, 0, 800'000)));
            }
        }
        const DocumentInput doc = oracle::make_doc(groups);
        for (auto m : {OmdMeasure::kAvgPairwise, OmdMeasure::kHullArea}) {
            double best = 0;
            const auto expect = exhaustive_omd(doc, m, &best);
            const auto r = omd(doc, m);
            std::vector<GeoPoint> picked;
            for (std::size_t i = 0; i < groups.size(); ++i) {
                CHECK(*r.outcomes[i].entry_id == doc.mentions[i].candidates[expect[i]].entry_id);
                picked.push_back(doc.find_entry(*r.outcomes[i].entry_id)->location);
            }
            CHECK(combination_measure(picked, m) == best);
        }
    }
}

TEST_CASE("average-pairwise measure equals the plain mean") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pts = oracle::mixed_scale_cloud(rng, 2 + rng() % 6);
        CHECK(combination_measure(pts, OmdMeasure::kAvgPairwise) == doctest::Approx(oracle::mean_pairwise(pts)));
    }
}

TEST_CASE("hull area of a small square") {
    const GeoPoint o(0, 0);
    // 1 km square on the equator, plus an interior point.
    const double deg = 1000.0 / (kEarthRadiusMeters * std::numbers::pi / 180.0);
    const std::vector<GeoPoint> sq{GeoPoint(0, 0), GeoPoint(0, deg), GeoPoint(deg, deg), GeoPoint(deg, 0),
                                   GeoPoint(deg / 2, deg / 3)};
    CHECK(combination_measure(sq, OmdMeasure::kHullArea) == doctest::Approx(1e6).epsilon(1e-4));
    const std::vector<GeoPoint> two{o, GeoPoint(1, 1)};
    CHECK(combination_measure(two, OmdMeasure::kHullArea) == 0.0);
}

TEST_CASE("omd cap") {
    std::vector<std::vector<GeoPoint>> groups(4, std::vector<GeoPoint>(10, GeoPoint(0, 0)));
    const auto doc = oracle::make_doc(groups);
    CHECK_THROWS_AS(omd(doc, OmdMeasure::kAvgPairwise, 9'999), CombinationExplosion);
    CHECK_NOTHROW(omd(doc, OmdMeasure::kAvgPairwise, 10'000));
    std::vector<std::vector<GeoPoint>> huge(40, std::vector<GeoPoint>(10, GeoPoint(0, 0)));
    CHECK_THROWS_AS(omd(oracle::make_doc(huge), OmdMeasure::kAvgPairwise), CombinationExplosion);
}

TEST_CASE("centroid heuristic") {
    const GeoPoint o(-33.86, 151.2);
    SUBCASE("compact candidates all survive") {
        std::vector<std::vector<GeoPoint>> groups;
        for (int i = 0; i < 4; ++i) {
            groups.push_back({destination(o, i, 200.0 * i)});
        }
        const auto r = centroid_heuristic(oracle::make_doc(groups));
        for (int i = 0; i < 4; ++i) {
            CHECK(*r.outcomes[i].entry_id == "m" + std::to_string(i) + "-0");
        }
        CHECK(r.ranked_clusters.at(0).members.size() == 4);
    }
    SUBCASE("far outlier is dropped before the second centroid") {
        std::vector<GeoPoint> pts;
        for (int i = 0; i < 10; ++i) {
            pts.push_back(destination(o, i * 0.6, 300.0 + 50.0 * i));
        }
        pts.push_back(destination(o, 1.0, 10'000'000.0));
        // Hand check: the outlier's distance to the first centroid exceeds mean + 2 sigma.
        const GeoPoint c1 = oracle::centroid_3d(pts);
        std::vector<double> d;
        for (const auto& p : pts) {
            d.push_back(haversine(p, c1));
        }
        REQUIRE(d.back() > oracle::mean_plus_two_sigma(d));

        std::vector<std::vector<GeoPoint>> groups{pts};
        const auto r = centroid_heuristic(oracle::make_doc(groups));
        const auto& kept = r.ranked_clusters.at(0).members;
        CHECK(kept.size() == 10);
        CHECK(std::find(kept.begin(), kept.end(), 10u) == kept.end());
    }
    SUBCASE("equidistant candidates tie on the smaller entry id") {
        // Mention m0 anchors the centroid at o; m1 has two candidates mirrored about it.
        DocumentInput doc = oracle::make_doc({{o}, {destination(o, 0.0, 5'000), destination(o, std::numbers::pi, 5'000)}});
        std::swap(doc.mentions[1].candidates[0].entry_id, doc.mentions[1].candidates[1].entry_id);
        const auto r = centroid_heuristic(doc);
        CHECK(*r.outcomes[1].entry_id == "m1-0");
    }
}

TEST_CASE("distance to unambiguous referents") {
    const GeoPoint a(35.68, 139.69);
    SUBCASE("nearest to the anchor") {
        const auto doc = oracle::make_doc({{a}, {destination(a, 2, 500'000), destination(a, 1, 1'000)}});
        CHECK(*dtur(doc).outcomes[1].entry_id == "m1-1");
    }
    SUBCASE("mean distance to two anchors") {
        const GeoPoint b = destination(a, 0, 10'000);
        // Candidate scores: c0 is 1 km from a and 11 km from b (mean 6 km);
        // c1 is 5 km from both (mean 5 km).
        const GeoPoint c0 = destination(a, std::numbers::pi, 1'000);
        const GeoPoint c1 = destination(a, 0, 5'000);
        CHECK((haversine(c0, a) + haversine(c0, b)) / 2 == doctest::Approx(6'000).epsilon(1e-6));
        CHECK((haversine(c1, a) + haversine(c1, b)) / 2 == doctest::Approx(5'000).epsilon(1e-6));
        const auto doc = oracle::make_doc({{a}, {b}, {c0, c1}});
        CHECK(*dtur(doc).outcomes[2].entry_id == "m2-1");
    }
    SUBCASE("no anchors") {
        CHECK_THROWS_AS(dtur(oracle::make_doc({{a, GeoPoint(0, 0)}, {a, GeoPoint(1, 1)}})), NoAnchors);
    }
}

TEST_CASE("dbscan") {
    const GeoPoint o(60, 25);
    SUBCASE("textbook three plus noise") {
        const std::vector<GeoPoint> pts{o, destination(o, 0, 80), destination(o, 1.5, 80), destination(o, 0, 50'000)};
        const auto c = dbscan(oracle::cloud_of(pts), 100, 3);
        REQUIRE(c.size() == 1);
        CHECK(c[0].members == std::vector<std::size_t>{0, 1, 2});
    }
    SUBCASE("random clouds match the brute-force oracle") {
        std::mt19937_64 rng(61);
        for (int trial = 0; trial < 60; ++trial) {
            const auto pts = oracle::mixed_scale_cloud(rng, 50);
            const double eps = std::exp(oracle::uniform(rng, std::log(100.0), std::log(300'000.0)));
            const std::size_t min_pts = 1 + rng() % 8;
            const auto cloud = oracle::cloud_of(pts);
            CHECK(oracle::to_partition(dbscan(cloud, eps, min_pts)) == oracle::dbscan(pts, eps, min_pts));
            CHECK(oracle::to_partition(dbscan(cloud, eps, 1)) == oracle::to_partition(form_clusters(cloud, eps)));
        }
    }
    SUBCASE("invalid parameters") {
        const auto cloud = oracle::cloud_of({o});
        CHECK_THROWS_AS(dbscan(cloud, 0, 1), ConfigError);
        CHECK_THROWS_AS(dbscan(cloud, 10, 0), ConfigError);
        CHECK_THROWS_AS(dbscan(PointCloud{}, 10, 1), EmptyInput);
    }
    SUBCASE("all noise fails every mention") {
        const auto doc = oracle::make_doc({{o}, {GeoPoint(0, 0)}});
        const auto r = dbscan_disambiguate(doc, 10, 2);
        CHECK(r.outcomes[0].status == OutcomeStatus::kFailedNoCandidateInAnyCluster);
        CHECK(r.outcomes[1].status == OutcomeStatus::kFailedNoCandidateInAnyCluster);
    }
}

TEST_CASE("kdist_epsilon") {
    const GeoPoint o(0, 0);
    SUBCASE("equilateral triangle gives its side") {
        // Unit-vector geometry: three points 500 m from each other.
        const double r = 500.0 / std::sqrt(3.0);
        std::vector<GeoPoint> pts;
        for (int i = 0; i < 3; ++i) {
            pts.push_back(destination(o, i * 2 * std::numbers::pi / 3, r));
        }
        const double side = haversine(pts[0], pts[1]);
        REQUIRE(std::abs(side - 500.0) < 0.01);
        for (std::size_t k : {1, 2}) {
            CHECK(kdist_epsilon(oracle::cloud_of(pts), k) == doctest::Approx(500.0).epsilon(1e-4));
        }
    }
    SUBCASE("matches the full-sort oracle") {
        std::mt19937_64 rng(67);
        for (int trial = 0; trial < 30; ++trial) {
            const auto pts = oracle::mixed_scale_cloud(rng, 20);
            for (std::size_t k : {1, 5, 19}) {
                CHECK(kdist_epsilon(oracle::cloud_of(pts), k) ==
                      doctest::Approx(oracle::mean_plus_two_sigma(oracle::knn_distances(pts, k))).epsilon(1e-12));
            }
        }
    }
    SUBCASE("global decoys push epsilon far above the density threshold") {
        std::mt19937_64 rng(71);
        std::vector<GeoPoint> pts;
        for (int i = 0; i < 5; ++i) {
            pts.push_back(destination(o, oracle::uniform(rng, 0, 6.28), 1000.0 * oracle::uniform(rng, 0, 1)));
        }
        while (pts.size() < 55) {
            const GeoPoint p = oracle::random_on_sphere(rng);
            if (haversine(p, o) > 100'000) {
                pts.push_back(p);
            }
        }
        const auto cloud = oracle::cloud_of(pts);
        const double eps = kdist_epsilon(cloud, 5);
        CHECK(eps > 1e5);
        CHECK(eps < 1e7);
        CHECK(eps > *densityk_threshold(cloud).cluster_distance);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(kdist_epsilon(oracle::cloud_of({o, o}), 2), InsufficientPoints);
        CHECK_THROWS_AS(kdist_epsilon(oracle::cloud_of({o, o}), 0), ConfigError);
    }
}

TEST_CASE("algorithm configs") {
    auto invalid = [](const AlgorithmConfig& c) {
        CHECK_THROWS_AS(c.validate(), ConfigError);
    };
    invalid({.algorithm = Algorithm::kDbscan, .min_pts = 5});
    invalid({.algorithm = Algorithm::kDbscan, .epsilon = 200});
    invalid({.algorithm = Algorithm::kKdist, .min_pts = 5});
    invalid({.algorithm = Algorithm::kOmd});

    const AlgorithmConfig db{.algorithm = Algorithm::kDbscan, .epsilon = 200, .min_pts = 5};
    CHECK_NOTHROW(db.validate());
    CHECK(db.label() == "dbscan(epsilon=200.0;min_pts=5)");
    CHECK(AlgorithmConfig{}.label() == "densityk(delta_d=100.0)");
    CHECK(parse_algorithm("kdist") == Algorithm::kKdist);
    CHECK_THROWS_AS(parse_algorithm("kmeans"), ConfigError);
    CHECK(parse_omd_measure("hull") == OmdMeasure::kHullArea);
    CHECK_THROWS_AS(parse_omd_measure("area"), ConfigError);
}
