#include "oracles.hpp"

#include "densityk/errors.hpp"
#include "densityk/eval.hpp"
#include "densityk/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace densityk;

namespace {

// Four mentions with truth "-0"; the "-1" candidate of mention i sits
// (i + 1) km east of its truth.
DocumentInput scoring_doc() {
    const GeoPoint o(0, 0);
    std::vector<std::vector<GeoPoint>> groups;
    for (int i = 0; i < 4; ++i) {
        const GeoPoint t = destination(o, 0, 10'000.0 * i);
        groups.push_back({t, destination(t, std::numbers::pi / 2, 1'000.0 * (i + 1))});
    }
    DocumentInput doc = oracle::make_doc(groups, "score");
    doc.ground_truth = GroundTruth{{"m0", "m0-0"}, {"m1", "m1-0"}, {"m2", "m2-0"}, {"m3", "m3-0"}};
    return doc;
}

DisambiguationResult answer(const DocumentInput& doc, std::vector<std::optional<int>> pick) {
    DisambiguationResult r;
    r.doc_id = doc.doc_id;
    for (std::size_t i = 0; i < pick.size(); ++i) {
        MentionOutcome o{doc.mentions[i].name, OutcomeStatus::kFailedAmbiguousInTopCluster, {}, 1};
        if (pick[i]) {
            o.status = OutcomeStatus::kResolved;
            o.entry_id = doc.mentions[i].candidates[*pick[i]].entry_id;
        }
        r.outcomes.push_back(o);
    }
    return r;
}

} // namespace

TEST_CASE("score_document fixtures") {
    const DocumentInput doc = scoring_doc();
    SUBCASE("all correct") {
        const auto s = score_document(answer(doc, {0, 0, 0, 0}), doc);
        CHECK(s.precision == 1.0);
        CHECK(s.avg_distance_error_km == 0.0);
        CHECK(s.resolved_count == 4);
    }
    SUBCASE("three of four with one failure") {
        const auto s = score_document(answer(doc, {0, std::nullopt, 0, 0}), doc);
        CHECK(std::abs(s.precision - 0.75) < 1e-9);
        CHECK(s.failed_count == 1);
        CHECK(s.resolved_count + s.failed_count == 4);
        CHECK(s.distance_samples == 3);
    }
    SUBCASE("errors of 1 km and 3 km average to 2 km") {
        DocumentInput two = doc;
        two.mentions.resize(3);
        two.mentions.erase(two.mentions.begin() + 1);
        two.ground_truth = GroundTruth{{"m0", "m0-0"}, {"m2", "m2-0"}};
        const auto s = score_document(answer(two, {1, 1}), two);
        CHECK(s.precision == 0.0);
        CHECK(std::abs(s.avg_distance_error_km - 2.0) < 1e-9);
    }
    SUBCASE("missing truth") {
        DocumentInput bare = doc;
        bare.ground_truth.reset();
        CHECK_THROWS_AS(score_document(answer(doc, {0, 0, 0, 0}), bare), MissingTruth);
    }
}

TEST_CASE("scores do not depend on mention order") {
    std::mt19937_64 rng(79);
    SynthSpec spec;
    spec.n_docs = 10;
    for (auto doc : synth_generate(spec)) {
        const auto base = score_document(densityk_pipeline(doc), doc);
        std::shuffle(doc.mentions.begin(), doc.mentions.end(), rng);
        const auto shuffled = score_document(densityk_pipeline(doc), doc);
        CHECK(shuffled.precision == base.precision);
        CHECK(shuffled.avg_distance_error_km == doctest::Approx(base.avg_distance_error_km).epsilon(1e-12));
    }
}

TEST_CASE("precision is one exactly when every mention hits its truth") {
    const DocumentInput doc = scoring_doc();
    for (int mask = 0; mask < 81; ++mask) {
        std::vector<std::optional<int>> pick;
        bool all = true;
        for (int i = 0, m = mask; i < 4; ++i, m /= 3) {
            const int v = m % 3;
            pick.push_back(v == 2 ? std::optional<int>{} : std::optional<int>{v});
            all = all && v == 0;
        }
        CHECK((score_document(answer(doc, pick), doc).precision == 1.0) == all);
    }
}

TEST_CASE("evaluate_corpus structure") {
    DocumentInput doc = scoring_doc();
    const std::vector<AlgorithmConfig> configs{{.algorithm = Algorithm::kDensityK},
                                               {.algorithm = Algorithm::kDtur}};
    const auto report = evaluate_corpus({doc}, configs);
    REQUIRE(report.cells.size() == 2);
    CHECK(report.cells[0].config.label() == configs[0].label());
    CHECK(report.cells[1].config.label() == configs[1].label());
    CHECK(report.cells[0].scores.size() == 1);
    // dtur has no anchors here: the error is recorded, not thrown.
    CHECK(report.cells[1].scores.empty());
    REQUIRE(report.cells[1].errors.size() == 1);
    CHECK(report.cells[1].errors[0].kind == "NoAnchors");
    CHECK_FALSE(report.cells[1].macro_precision);
    CHECK(report.best.count("densityk") == 1);
    CHECK(report.best.count("dtur") == 0);

    const auto j = report_to_json(report);
    CHECK(j["cells"][1]["macro_precision"].is_null());
    CHECK(j["cells"][1]["errors"][0]["doc_id"] == "score");

    DocumentInput bare = doc;
    bare.ground_truth.reset();
    CHECK_THROWS_AS(evaluate_corpus({bare}, configs), MissingTruth);
    const std::vector<AlgorithmConfig> no_epsilon{{.algorithm = Algorithm::kDbscan}};
    CHECK_THROWS_AS(evaluate_corpus({doc}, no_epsilon), ConfigError);
}

TEST_CASE("best cell: highest precision, then lower distance error") {
    auto cell = [](double p, std::optional<double> e) {
        CellReport c;
        c.config.algorithm = Algorithm::kDbscan;
        c.macro_precision = p;
        c.macro_distance_error_km = e;
        return c;
    };
    CHECK(select_best_cells({cell(0.8, 1.0), cell(0.9, 50.0)}).at("dbscan") == 1);
    CHECK(select_best_cells({cell(0.9, 5.0), cell(0.9, 2.0)}).at("dbscan") == 1);
    CHECK(select_best_cells({cell(0.9, 2.0), cell(0.9, 2.0)}).at("dbscan") == 0);
    CHECK(select_best_cells({cell(0.9, std::nullopt), cell(0.9, 7.0)}).at("dbscan") == 1);
}

TEST_CASE("grid presets") {
    const auto grid = grid_preset("table1");
    std::vector<std::pair<double, std::size_t>> dbscan;
    for (const auto& c : grid) {
        if (c.algorithm == Algorithm::kDbscan) {
            dbscan.emplace_back(*c.epsilon, *c.min_pts);
        }
    }
    std::vector<std::pair<double, std::size_t>> expected;
    for (double e : {200.0, 2000.0, 20000.0}) {
        for (std::size_t m : {1, 5, 10}) {
            expected.emplace_back(e, m);
        }
    }
    CHECK(dbscan == expected);
    CHECK_THROWS_AS(grid_preset("table9"), ConfigError);
}

TEST_CASE("report does not depend on worker count or corpus order") {
    SynthSpec spec;
    spec.n_docs = 12;
    auto corpus = synth_generate(spec);
    const auto grid = grid_preset("table1");
    const auto one = report_to_json(evaluate_corpus(corpus, grid, 1)).dump();
    std::reverse(corpus.begin(), corpus.end());
    const auto many = report_to_json(evaluate_corpus(corpus, grid, 4)).dump();
    CHECK(one == many);
}

TEST_CASE("csv rows") {
    const DocumentInput doc = scoring_doc();
    const auto report = evaluate_corpus({doc}, {AlgorithmConfig{.algorithm = Algorithm::kDtur},
                                                AlgorithmConfig{.algorithm = Algorithm::kCentroid}});
    const std::string csv = report_to_csv(report);
    CHECK(csv.rfind("doc_id,algorithm,params,precision,avg_distance_error_km,resolved,failed\n", 0) == 0);
    CHECK(csv.find("score,dtur,,,,,\n") != std::string::npos);
    CHECK(csv.find("score,centroid,,") != std::string::npos);
}
