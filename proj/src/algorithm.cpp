#include "densityk/algorithm.hpp"

#include "densityk/errors.hpp"

#include <fmt/format.h>

namespace densityk {

const char* to_string(Algorithm algorithm) noexcept {
    switch (algorithm) {
    case Algorithm::kDensityK:
        return "densityk";
    case Algorithm::kOmd:
        return "omd";
    case Algorithm::kCentroid:
        return "centroid";
    case Algorithm::kDtur:
        return "dtur";
    case Algorithm::kDbscan:
        return "dbscan";
    case Algorithm::kKdist:
        return "kdist";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    for (auto a : {Algorithm::kDensityK, Algorithm::kOmd, Algorithm::kCentroid, Algorithm::kDtur,
                   Algorithm::kDbscan, Algorithm::kKdist}) {
        if (name == to_string(a)) {
            return a;
        }
    }
    throw ConfigError(fmt::format("--algorithm: unknown algorithm '{}'", name));
}

const char* to_string(OmdMeasure measure) noexcept {
    return measure == OmdMeasure::kAvgPairwise ? "avg" : "hull";
}

OmdMeasure parse_omd_measure(std::string_view name) {
    if (name == "avg" || name == "avg_pairwise") {
        return OmdMeasure::kAvgPairwise;
    }
    if (name == "hull" || name == "hull_area") {
        return OmdMeasure::kHullArea;
    }
    throw ConfigError(fmt::format("--measure: unknown measure '{}'", name));
}

void AlgorithmConfig::validate() const {
    const char* name = to_string(algorithm);
    switch (algorithm) {
    case Algorithm::kDensityK:
        if (!(densityk.delta_d > 0.0)) {
            throw ConfigError(fmt::format("densityk: --delta-d must be positive, got {}", densityk.delta_d));
        }
        if (densityk.upper_bound && !(*densityk.upper_bound > 0.0)) {
            throw ConfigError(fmt::format("densityk: --upper-bound must be positive, got {}", *densityk.upper_bound));
        }
        break;
    case Algorithm::kOmd:
        if (!measure) {
            throw ConfigError("omd: --measure is required");
        }
        if (combination_cap == 0) {
            throw ConfigError("omd: --cap must be positive");
        }
        break;
    case Algorithm::kCentroid:
    case Algorithm::kDtur:
        break;
    case Algorithm::kDbscan:
        if (!epsilon) {
            throw ConfigError("dbscan: --epsilon is required");
        }
        if (!(*epsilon > 0.0)) {
            throw ConfigError(fmt::format("dbscan: --epsilon must be positive, got {}", *epsilon));
        }
        [[fallthrough]];
    case Algorithm::kKdist:
        if (algorithm == Algorithm::kKdist && !k) {
            throw ConfigError("kdist: --k is required");
        }
        if (k && *k < 1) {
            throw ConfigError(fmt::format("{}: --k must be at least 1", name));
        }
        if (!min_pts) {
            throw ConfigError(fmt::format("{}: --min-pts is required", name));
        }
        if (*min_pts < 1) {
            throw ConfigError(fmt::format("{}: --min-pts must be at least 1", name));
        }
        break;
    }
}

nlohmann::json AlgorithmConfig::params() const {
    nlohmann::json j = nlohmann::json::object();
    switch (algorithm) {
    case Algorithm::kDensityK:
        j["delta_d"] = densityk.delta_d;
        if (densityk.upper_bound) {
            j["upper_bound"] = *densityk.upper_bound;
        }
        if (densityk.crossing == ThresholdCrossing::kFirstAtOrBelowThreshold) {
            j["crossing"] = "first-below";
        }
        if (densityk.region == RegionShape::kCircular) {
            j["region"] = "circular";
        }
        break;
    case Algorithm::kOmd:
        if (measure) {
            j["measure"] = to_string(*measure);
        }
        j["cap"] = combination_cap;
        break;
    case Algorithm::kCentroid:
    case Algorithm::kDtur:
        break;
    case Algorithm::kDbscan:
        if (epsilon) {
            j["epsilon"] = *epsilon;
        }
        if (min_pts) {
            j["min_pts"] = *min_pts;
        }
        break;
    case Algorithm::kKdist:
        if (k) {
            j["k"] = *k;
        }
        if (min_pts) {
            j["min_pts"] = *min_pts;
        }
        break;
    }
    return j;
}

std::string AlgorithmConfig::params_string() const {
    std::string out;
    const nlohmann::json p = params();
    for (const auto& [key, value] : p.items()) {
        if (!out.empty()) {
            out += ';';
        }
        out += key;
        out += '=';
        out += value.is_string() ? value.get<std::string>() : value.dump();
    }
    return out;
}

std::string AlgorithmConfig::label() const {
    return fmt::format("{}({})", to_string(algorithm), params_string());
}

DisambiguationResult run_algorithm(const DocumentInput& doc, const AlgorithmConfig& config) {
    config.validate();
    switch (config.algorithm) {
    case Algorithm::kDensityK:
        return densityk_pipeline(doc, config.densityk);
    case Algorithm::kOmd:
        return omd(doc, *config.measure, config.combination_cap);
    case Algorithm::kCentroid:
        return centroid_heuristic(doc);
    case Algorithm::kDtur:
        return dtur(doc);
    case Algorithm::kDbscan:
        return dbscan_disambiguate(doc, *config.epsilon, *config.min_pts);
    case Algorithm::kKdist:
        return kdist_disambiguate(doc, *config.k, *config.min_pts);
    }
    throw ConfigError("unknown algorithm");
}

} // namespace densityk
