#pragma once

#include "densityk/baselines.hpp"
#include "densityk/corpus.hpp"
#include "densityk/densityk.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace densityk {

enum class Algorithm { kDensityK, kOmd, kCentroid, kDtur, kDbscan, kKdist };

const char* to_string(Algorithm algorithm) noexcept;
/// Throws ConfigError for an unknown name.
Algorithm parse_algorithm(std::string_view name);

const char* to_string(OmdMeasure measure) noexcept;
/// Accepts "avg"/"avg_pairwise" and "hull"/"hull_area".
OmdMeasure parse_omd_measure(std::string_view name);

/// One algorithm together with its parameters.
struct AlgorithmConfig {
    Algorithm algorithm = Algorithm::kDensityK;
    std::optional<double> epsilon;       ///< dbscan
    std::optional<std::size_t> min_pts;  ///< dbscan, kdist
    std::optional<std::size_t> k;        ///< kdist
    std::optional<OmdMeasure> measure;   ///< omd
    std::uint64_t combination_cap = kDefaultCombinationCap;
    DensityKOptions densityk;            ///< densityk

    /// dbscan needs epsilon and min_pts, kdist needs k and min_pts, omd needs
    /// a measure. Throws ConfigError naming the missing or invalid flag.
    void validate() const;

    /// Only the parameters that apply to the algorithm, e.g.
    /// {"epsilon": 200, "min_pts": 5} for dbscan.
    nlohmann::json params() const;
    /// Stable compact form, e.g. "epsilon=200;min_pts=5".
    std::string params_string() const;
    /// e.g. "dbscan(epsilon=200;min_pts=5)"
    std::string label() const;
};

/// Validates `config` and runs the matching algorithm on `doc`.
DisambiguationResult run_algorithm(const DocumentInput& doc, const AlgorithmConfig& config);

} // namespace densityk
