#pragma once

#include "densityk/corpus.hpp"
#include "densityk/geo.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace densityk {

inline constexpr double kDefaultDeltaD = 100.0;

/// Counting region used for the density at distance d.
///
/// kAnnular counts pairs in the ring (d - delta_d, d] and divides by the ring
/// area. kCircular counts every pair within d and divides by the disk area;
/// it is kept for comparison only.
enum class RegionShape { kAnnular, kCircular };

/// How the discrete density curve is cut at the mean + 2 sigma level.
///
/// Both rules scan forward from the density peak d0 to the first sample
/// whose density is at or below the threshold:
///  - kLastAboveThreshold returns the sample just before that one, i.e. the
///    outer edge of the dense run that starts at the peak (default);
///  - kFirstAtOrBelowThreshold returns that sample itself.
/// With no such sample both fall back to d0.
enum class ThresholdCrossing { kLastAboveThreshold, kFirstAtOrBelowThreshold };

struct KSample {
    double d = 0.0; ///< upper end of the interval, meters
    double k = 0.0; ///< density per square meter per point

    friend bool operator==(const KSample&, const KSample&) = default;
};

/// Discretized density curve over inter-point distance. Samples are strictly
/// increasing in d, every d is a positive multiple of delta_d, and every k is
/// positive: empty intervals are left out.
struct KFunction {
    double delta_d = kDefaultDeltaD;
    std::vector<KSample> samples;
    std::optional<double> cluster_distance;
};

/// Builds the density curve from sorted pair distances of `n_points` points.
///
/// For the annular region a sample at d = m * delta_d has
///
///     k(d) = 2 * count(d - delta_d < x <= d) / (n * pi * (d^2 - (d - delta_d)^2))
///
/// where the factor 2 turns unordered pairs into per-point neighbour counts.
/// Distance 0 is counted in the first interval. Throws InsufficientPoints
/// when n_points < 2 or `distances` is empty, ConfigError when delta_d <= 0.
KFunction compute_k_function(const DistanceList& distances, std::size_t n_points,
                             double delta_d = kDefaultDeltaD,
                             RegionShape region = RegionShape::kAnnular);

/// Cluster distance from the mean + 2 sigma (population sigma) of all k
/// values. Argmax ties resolve to the smallest d. The result is invariant to
/// scaling every k by a positive constant. Throws InsufficientPoints when
/// `kf` has no samples.
double derive_cluster_distance(const KFunction& kf,
                               ThresholdCrossing crossing = ThresholdCrossing::kLastAboveThreshold);

/// A group of point-cloud indices (ascending). rank is 1-based once ranked, 0 before.
struct Cluster {
    std::vector<std::size_t> members;
    int rank = 0;

    friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Single-linkage components: points at haversine distance <= cluster_distance
/// share a cluster. Clusters come back ordered by their smallest member.
/// Throws EmptyInput for an empty cloud, ConfigError for a non-positive distance.
std::vector<Cluster> form_clusters(const PointCloud& cloud, double cluster_distance);

/// Orders clusters by size (descending), then mean pairwise member distance
/// (ascending), then smallest member entry_id, and assigns ranks 1..m.
std::vector<Cluster> rank_clusters(std::vector<Cluster> clusters, const PointCloud& cloud);

enum class OutcomeStatus {
    kResolved,
    kFailedAmbiguousInTopCluster,
    kFailedNoCandidateInAnyCluster,
};

const char* to_string(OutcomeStatus status) noexcept;

struct MentionOutcome {
    std::string mention;
    OutcomeStatus status = OutcomeStatus::kFailedNoCandidateInAnyCluster;
    std::optional<std::string> entry_id;   ///< set iff resolved
    std::optional<int> top_cluster_rank;   ///< rank of the first cluster holding a candidate

    friend bool operator==(const MentionOutcome&, const MentionOutcome&) = default;
};

struct DisambiguationResult {
    std::string doc_id;
    std::string algorithm;
    std::vector<MentionOutcome> outcomes; ///< one per mention, in mention order
    PointCloud cloud;
    std::vector<Cluster> ranked_clusters;
    std::optional<KFunction> diagnostics;
    /// Distance threshold the clusters were formed with, when there is one.
    std::optional<double> cluster_distance;

    const MentionOutcome* outcome_for(std::string_view mention) const noexcept;
    /// Members of the cluster with the given rank, or nullptr.
    const Cluster* cluster_with_rank(int rank) const noexcept;
};

/// Resolves every mention against ranked clusters: the first cluster (by
/// rank) holding any of the mention's candidates is its top cluster; exactly
/// one candidate there resolves it, more than one is an ambiguity failure,
/// none anywhere is a no-candidate failure. `cloud` must be
/// to_point_cloud(doc).
DisambiguationResult disambiguate(const DocumentInput& doc, const PointCloud& cloud,
                                  std::vector<Cluster> ranked);

struct DensityKOptions {
    double delta_d = kDefaultDeltaD;
    std::optional<double> upper_bound;
    RegionShape region = RegionShape::kAnnular;
    ThresholdCrossing crossing = ThresholdCrossing::kLastAboveThreshold;
};

/// Full pipeline: point cloud, pair distances, density curve, cluster
/// distance, single-linkage clusters, ranking, disambiguation. A document
/// with a single candidate in total resolves to it directly. Throws
/// EmptyInput for a document without mentions and InsufficientPoints when
/// no pair distance survives the upper bound.
DisambiguationResult densityk_pipeline(const DocumentInput& doc, const DensityKOptions& options = {});

/// Cluster distance only (no clustering), for diagnostics and comparisons.
KFunction densityk_threshold(const PointCloud& cloud, const DensityKOptions& options = {});

} // namespace densityk
