#pragma once

#include "densityk/geo.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace densityk {

/// One gazetteer entry that a place name could refer to.
struct CandidateEntry {
    std::string entry_id;
    std::string name;
    GeoPoint location;
    std::string source;

    friend bool operator==(const CandidateEntry&, const CandidateEntry&) = default;
};

/// A place name from a description together with its ambiguous candidates.
struct PlaceMention {
    std::string name;
    std::vector<CandidateEntry> candidates;

    friend bool operator==(const PlaceMention&, const PlaceMention&) = default;
};

using GroundTruth = std::map<std::string, std::string>;

struct DocumentInput {
    std::string doc_id;
    std::vector<PlaceMention> mentions;
    /// mention name -> entry_id of the true referent
    std::optional<GroundTruth> ground_truth;

    std::size_t total_candidates() const noexcept;
    /// Candidate with the given id, or nullptr.
    const CandidateEntry* find_entry(std::string_view entry_id) const noexcept;

    friend bool operator==(const DocumentInput&, const DocumentInput&) = default;
};

struct CloudPoint {
    GeoPoint location;
    std::string entry_id;
    std::size_t mention_index = 0;
    std::string mention;
};

/// All candidate locations of one document, in mention order then candidate order.
struct PointCloud {
    std::vector<CloudPoint> points;

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }
    std::vector<GeoPoint> locations() const;
};

/// Parses one document. Throws ParseError for malformed JSON or missing or
/// mistyped fields, SchemaError for invariant violations. `origin` is used
/// only to label error messages.
DocumentInput load_document(std::string_view json_text, std::string_view origin = "<input>");
DocumentInput document_from_json(const nlohmann::json& j, std::string_view origin = "<input>");

nlohmann::json document_to_json(const DocumentInput& doc);
std::string serialize_document(const DocumentInput& doc);

/// Reads a corpus from a directory of *.json files (sorted by file name),
/// a JSON-lines file (*.jsonl), or a single document file.
std::vector<DocumentInput> load_corpus(const std::filesystem::path& path);

/// Writes one <doc_id>.json per document into `dir`, or a JSON-lines stream
/// when `path` ends in .jsonl.
void write_corpus(const std::vector<DocumentInput>& corpus, const std::filesystem::path& path);

inline constexpr double kDefaultDedupeRadiusMeters = 50.0;

/// Greedy first-survivor deduplication: a candidate is dropped when it lies
/// within `radius_m` of an earlier surviving candidate.
PlaceMention dedupe_candidates(const PlaceMention& mention,
                               double radius_m = kDefaultDedupeRadiusMeters);

PointCloud to_point_cloud(const DocumentInput& doc);

} // namespace densityk
