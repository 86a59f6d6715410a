#pragma once

#include "densityk/algorithm.hpp"
#include "densityk/corpus.hpp"
#include "densityk/densityk.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace densityk {

struct DocumentScore {
    std::string doc_id;
    double precision = 0.0;             ///< correct / truth_count
    double avg_distance_error_km = 0.0; ///< over resolved mentions that have truth
    std::size_t resolved_count = 0;
    std::size_t failed_count = 0;
    std::size_t truth_count = 0;
    std::size_t correct_count = 0;
    std::size_t distance_samples = 0;   ///< resolved mentions that have truth
};

/// Scores `result` against the ground truth carried by `doc`. Failed
/// mentions count as incorrect but are left out of the distance error.
/// Throws MissingTruth when `doc` has no ground truth.
DocumentScore score_document(const DisambiguationResult& result, const DocumentInput& doc);

struct DocumentFailure {
    std::string doc_id;
    std::string kind;
    std::string message;
};

struct CellReport {
    AlgorithmConfig config;
    std::vector<DocumentScore> scores;   ///< sorted by doc_id
    std::vector<DocumentFailure> errors; ///< sorted by doc_id
    /// Unweighted mean over scored documents; unset when none scored.
    std::optional<double> macro_precision;
    /// Mean over scored documents with at least one distance sample.
    std::optional<double> macro_distance_error_km;
};

struct CorpusReport {
    nlohmann::json configuration = nlohmann::json::object();
    std::vector<CellReport> cells;
    /// algorithm name -> index into cells of its best cell
    std::map<std::string, std::size_t> best;
};

/// Runs every config over every document. Per-document algorithm errors are
/// recorded in the cell instead of aborting. Invalid configs (ConfigError) and
/// documents without ground truth (MissingTruth) are rejected up front.
/// The report does not depend on `workers` or on corpus order.
CorpusReport evaluate_corpus(const std::vector<DocumentInput>& corpus,
                             const std::vector<AlgorithmConfig>& configs, std::size_t workers = 1);

/// Best cell per algorithm: highest macro precision, then lowest macro
/// distance error, then earliest cell. Cells without scored documents never win.
std::map<std::string, std::size_t> select_best_cells(const std::vector<CellReport>& cells);

/// Named grid preset. "table1": densityk, omd (avg and hull), centroid, dtur,
/// dbscan over epsilon {200, 2000, 20000} x min_pts {1, 5, 10} and kdist over
/// k {5, 10, 25} x min_pts {1, 5, 10}. Throws ConfigError for unknown names.
std::vector<AlgorithmConfig> grid_preset(std::string_view name);

nlohmann::json score_to_json(const DocumentScore& score);
nlohmann::json report_to_json(const CorpusReport& report);
/// One row per config x document:
/// doc_id,algorithm,params,precision,avg_distance_error_km,resolved,failed
std::string report_to_csv(const CorpusReport& report);

} // namespace densityk
