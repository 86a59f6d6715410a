#include "densityk/densityk.hpp"

#include "densityk/errors.hpp"
#include "densityk/union_find.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <tuple>

#include <fmt/format.h>

namespace densityk {

namespace {

// Index m >= 1 of the interval ((m-1)*delta_d, m*delta_d] holding x; x = 0 goes to m = 1.
std::int64_t interval_index(double x, double delta_d) {
    auto m = static_cast<std::int64_t>(std::ceil(x / delta_d));
    while (m > 1 && static_cast<double>(m - 1) * delta_d >= x) {
        --m;
    }
    while (static_cast<double>(m) * delta_d < x) {
        ++m;
    }
    return std::max<std::int64_t>(m, 1);
}

} // namespace

KFunction compute_k_function(const DistanceList& distances, std::size_t n_points, double delta_d,
                             RegionShape region) {
    if (!(delta_d > 0.0)) {
        throw ConfigError(fmt::format("delta_d must be positive, got {}", delta_d));
    }
    if (n_points < 2) {
        throw InsufficientPoints(fmt::format("density curve needs at least 2 points, got {}", n_points));
    }
    if (distances.empty()) {
        throw InsufficientPoints("density curve needs at least one pair distance");
    }

    // Run-length count of the sorted distances per interval.
    std::vector<std::pair<std::int64_t, std::size_t>> occupied;
    for (double x : distances.values) {
        const std::int64_t m = interval_index(x, delta_d);
        if (!occupied.empty() && occupied.back().first == m) {
            ++occupied.back().second;
        } else {
            occupied.emplace_back(m, 1);
        }
    }

    KFunction kf;
    kf.delta_d = delta_d;
    const double n = static_cast<double>(n_points);
    constexpr double pi = std::numbers::pi;

    if (region == RegionShape::kAnnular) {
        kf.samples.reserve(occupied.size());
        for (const auto& [m, count] : occupied) {
            const double d = static_cast<double>(m) * delta_d;
            const double inner = d - delta_d;
            const double area = pi * (d * d - inner * inner);
            kf.samples.push_back({d, 2.0 * static_cast<double>(count) / (n * area)});
        }
        return kf;
    }

    // Disks are never empty once the first pair is inside, so every interval
    // from the first occupied one to the last is sampled.
    const std::int64_t first = occupied.front().first;
    const std::int64_t last = occupied.back().first;
    kf.samples.reserve(static_cast<std::size_t>(last - first + 1));
    std::size_t cumulative = 0;
    auto next = occupied.begin();
    for (std::int64_t m = first; m <= last; ++m) {
        if (next != occupied.end() && next->first == m) {
            cumulative += next->second;
            ++next;
        }
        const double d = static_cast<double>(m) * delta_d;
        kf.samples.push_back({d, 2.0 * static_cast<double>(cumulative) / (n * pi * d * d)});
    }
    return kf;
}

double derive_cluster_distance(const KFunction& kf, ThresholdCrossing crossing) {
    const auto& s = kf.samples;
    if (s.empty()) {
        throw InsufficientPoints("cannot derive a cluster distance from an empty density curve");
    }
    double mean = 0.0;
    for (const auto& sample : s) {
        mean += sample.k;
    }
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (const auto& sample : s) {
        var += (sample.k - mean) * (sample.k - mean);
    }
    const double threshold = mean + 2.0 * std::sqrt(var / static_cast<double>(s.size()));

    std::size_t peak = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i].k > s[peak].k) {
            peak = i;
        }
    }
    for (std::size_t i = peak + 1; i < s.size(); ++i) {
        if (s[i].k <= threshold) {
            return crossing == ThresholdCrossing::kFirstAtOrBelowThreshold ? s[i].d : s[i - 1].d;
        }
    }
    return s[peak].d;
}

std::vector<Cluster> form_clusters(const PointCloud& cloud, double cluster_distance) {
    if (cloud.empty()) {
        throw EmptyInput("form_clusters: empty point cloud");
    }
    if (!(cluster_distance > 0.0)) {
        throw ConfigError(fmt::format("cluster distance must be positive, got {}", cluster_distance));
    }
    const std::size_t n = cloud.size();
    DisjointSet sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (haversine(cloud.points[i].location, cloud.points[j].location) <= cluster_distance) {
                sets.merge(i, j);
            }
        }
    }
    // Roots are visited in index order, so clusters come out sorted by smallest member.
    std::vector<std::ptrdiff_t> slot(n, -1);
    std::vector<Cluster> clusters;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = sets.find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<std::ptrdiff_t>(clusters.size());
            clusters.emplace_back();
        }
        clusters[static_cast<std::size_t>(slot[root])].members.push_back(i);
    }
    return clusters;
}

std::vector<Cluster> rank_clusters(std::vector<Cluster> clusters, const PointCloud& cloud) {
    struct Key {
        std::size_t size;
        double mean_span;
        std::string min_id;
    };
    std::vector<std::pair<Key, Cluster>> keyed;
    keyed.reserve(clusters.size());
    for (auto& c : clusters) {
        std::sort(c.members.begin(), c.members.end());
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < c.members.size(); ++a) {
            for (std::size_t b = a + 1; b < c.members.size(); ++b) {
                sum += haversine(cloud.points[c.members[a]].location, cloud.points[c.members[b]].location);
                ++pairs;
            }
        }
        std::string min_id;
        for (std::size_t idx : c.members) {
            const auto& id = cloud.points[idx].entry_id;
            if (min_id.empty() || id < min_id) {
                min_id = id;
            }
        }
        Key key{c.members.size(), pairs ? sum / static_cast<double>(pairs) : 0.0, std::move(min_id)};
        keyed.emplace_back(std::move(key), std::move(c));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
        const Key& a = x.first;
        const Key& b = y.first;
        if (a.size != b.size) {
            return a.size > b.size;
        }
        return std::tie(a.mean_span, a.min_id) < std::tie(b.mean_span, b.min_id);
    });

    std::vector<Cluster> ranked;
    ranked.reserve(keyed.size());
    int rank = 1;
    for (auto& [key, cluster] : keyed) {
        cluster.rank = rank++;
        ranked.push_back(std::move(cluster));
    }
    return ranked;
}

const char* to_string(OutcomeStatus status) noexcept {
    switch (status) {
    case OutcomeStatus::kResolved:
        return "resolved";
    case OutcomeStatus::kFailedAmbiguousInTopCluster:
        return "failed_ambiguous_in_top_cluster";
    case OutcomeStatus::kFailedNoCandidateInAnyCluster:
        return "failed_no_candidate_in_any_cluster";
    }
    return "unknown";
}

const MentionOutcome* DisambiguationResult::outcome_for(std::string_view mention) const noexcept {
    for (const auto& o : outcomes) {
        if (o.mention == mention) {
            return &o;
        }
    }
    return nullptr;
}

const Cluster* DisambiguationResult::cluster_with_rank(int rank) const noexcept {
    for (const auto& c : ranked_clusters) {
        if (c.rank == rank) {
            return &c;
        }
    }
    return nullptr;
}

DisambiguationResult disambiguate(const DocumentInput& doc, const PointCloud& cloud,
                                  std::vector<Cluster> ranked) {
    // Position of each point in the ranking; points outside every cluster (noise) stay at 0.
    std::vector<int> position(cloud.size(), 0);
    for (std::size_t pos = 0; pos < ranked.size(); ++pos) {
        for (std::size_t idx : ranked[pos].members) {
            position.at(idx) = static_cast<int>(pos) + 1;
        }
    }

    struct Best {
        int position = 0;
        std::size_t count = 0;
        std::size_t point = 0;
    };
    std::vector<Best> best(doc.mentions.size());
    for (std::size_t idx = 0; idx < cloud.size(); ++idx) {
        const int pos = position[idx];
        if (pos == 0) {
            continue;
        }
        Best& b = best.at(cloud.points[idx].mention_index);
        if (b.position == 0 || pos < b.position) {
            b = {pos, 1, idx};
        } else if (pos == b.position) {
            ++b.count;
        }
    }

    DisambiguationResult result;
    result.doc_id = doc.doc_id;
    result.outcomes.reserve(doc.mentions.size());
    for (std::size_t mi = 0; mi < doc.mentions.size(); ++mi) {
        MentionOutcome outcome;
        outcome.mention = doc.mentions[mi].name;
        const Best& b = best[mi];
        if (b.position == 0) {
            outcome.status = OutcomeStatus::kFailedNoCandidateInAnyCluster;
        } else {
            outcome.top_cluster_rank = ranked[static_cast<std::size_t>(b.position - 1)].rank;
            if (b.count == 1) {
                outcome.status = OutcomeStatus::kResolved;
                outcome.entry_id = cloud.points[b.point].entry_id;
            } else {
                outcome.status = OutcomeStatus::kFailedAmbiguousInTopCluster;
            }
        }
        result.outcomes.push_back(std::move(outcome));
    }
    result.cloud = cloud;
    result.ranked_clusters = std::move(ranked);
    return result;
}

KFunction densityk_threshold(const PointCloud& cloud, const DensityKOptions& options) {
    const auto locations = cloud.locations();
    const DistanceList distances = pairwise_distances(locations, options.upper_bound);
    KFunction kf = compute_k_function(distances, cloud.size(), options.delta_d, options.region);
    kf.cluster_distance = derive_cluster_distance(kf, options.crossing);
    return kf;
}

DisambiguationResult densityk_pipeline(const DocumentInput& doc, const DensityKOptions& options) {
    if (doc.mentions.empty()) {
        throw EmptyInput(fmt::format("doc '{}': no mentions to disambiguate", doc.doc_id));
    }
    PointCloud cloud = to_point_cloud(doc);

    if (cloud.size() == 1) {
        auto result = disambiguate(doc, cloud, {Cluster{{0}, 1}});
        result.algorithm = "densityk";
        return result;
    }

    KFunction kf = densityk_threshold(cloud, options);
    const double cluster_distance = *kf.cluster_distance;
    auto ranked = rank_clusters(form_clusters(cloud, cluster_distance), cloud);
    auto result = disambiguate(doc, cloud, std::move(ranked));
    result.algorithm = "densityk";
    result.cluster_distance = cluster_distance;
    result.diagnostics = std::move(kf);
    return result;
}

} // namespace densityk
