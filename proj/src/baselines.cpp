#include "densityk/baselines.hpp"

#include "densityk/errors.hpp"
#include "densityk/union_find.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace densityk {

namespace {

constexpr double kTieToleranceMeters = 1e-3;

struct Planar {
    double x;
    double y;
};

double cross(const Planar& o, const Planar& a, const Planar& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain followed by the shoelace formula.
double convex_hull_area(std::vector<Planar> pts) {
    if (pts.size() < 3) {
        return 0.0;
    }
    std::sort(pts.begin(), pts.end(),
              [](const Planar& a, const Planar& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    std::vector<Planar> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) {
            --k;
        }
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) {
            --k;
        }
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    double twice = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return std::abs(twice) * 0.5;
}

constexpr double kRad = std::numbers::pi / 180.0;

// Per-point values reused across every combination that contains the point.
struct HullPoint {
    double ux, uy, uz; // unit vector
    double lat_rad;
    double lon_deg;
};

HullPoint make_hull_point(const GeoPoint& p) {
    const double lat = p.lat() * kRad;
    const double lon = p.lon() * kRad;
    return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat), lat, p.lon()};
}

// Projects about the unit-vector mean (the first point when that mean
// vanishes) and measures the planar hull.
double hull_area(std::span<const HullPoint> points) {
    if (points.size() < 3) {
        return 0.0;
    }
    double sx = 0.0, sy = 0.0, sz = 0.0;
    for (const auto& p : points) {
        sx += p.ux;
        sy += p.uy;
        sz += p.uz;
    }
    double lat0 = points.front().lat_rad;
    double lon0 = points.front().lon_deg;
    if (std::sqrt(sx * sx + sy * sy + sz * sz) / static_cast<double>(points.size()) >= 1e-9) {
        lat0 = std::atan2(sz, std::hypot(sx, sy));
        lon0 = std::atan2(sy, sx) / kRad;
    }
    const double cos_lat0 = std::cos(lat0);
    std::vector<Planar> projected;
    projected.reserve(points.size());
    for (const auto& p : points) {
        const double dlon = std::remainder(p.lon_deg - lon0, 360.0) * kRad;
        projected.push_back({kEarthRadiusMeters * dlon * cos_lat0, kEarthRadiusMeters * (p.lat_rad - lat0)});
    }
    return convex_hull_area(std::move(projected));
}

double mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) {
        s += x;
    }
    return s / static_cast<double>(xs.size());
}

double mean_plus_two_sigma(std::span<const double> xs) {
    const double mu = mean(xs);
    double var = 0.0;
    for (double x : xs) {
        var += (x - mu) * (x - mu);
    }
    return mu + 2.0 * std::sqrt(var / static_cast<double>(xs.size()));
}

// Index of the candidate with the smallest score; scores within 1 mm tie and
// the smaller entry_id wins.
std::size_t pick_nearest(const PlaceMention& mention, std::span<const double> scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        const double diff = scores[i] - scores[best];
        if (diff < -kTieToleranceMeters ||
            (std::abs(diff) <= kTieToleranceMeters &&
             mention.candidates[i].entry_id < mention.candidates[best].entry_id)) {
            best = i;
        }
    }
    return best;
}

std::size_t first_point_of(const PointCloud& cloud, std::size_t mention_index) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (cloud.points[i].mention_index == mention_index) {
            return i;
        }
    }
    return cloud.size();
}

// Resolved outcomes for an explicit choice (one cloud index per mention);
// the chosen set is reported as the single rank-1 cluster.
DisambiguationResult resolved_result(const DocumentInput& doc, PointCloud cloud,
                                     const std::vector<std::size_t>& chosen, const char* algorithm,
                                     std::vector<std::size_t> cluster_members) {
    DisambiguationResult result;
    result.doc_id = doc.doc_id;
    result.algorithm = algorithm;
    for (std::size_t mi = 0; mi < doc.mentions.size(); ++mi) {
        result.outcomes.push_back(MentionOutcome{doc.mentions[mi].name, OutcomeStatus::kResolved,
                                                 cloud.points[chosen[mi]].entry_id, 1});
    }
    std::sort(cluster_members.begin(), cluster_members.end());
    cluster_members.erase(std::unique(cluster_members.begin(), cluster_members.end()), cluster_members.end());
    result.ranked_clusters.push_back(Cluster{std::move(cluster_members), 1});
    result.cloud = std::move(cloud);
    return result;
}

} // namespace

double combination_measure(std::span<const GeoPoint> points, OmdMeasure measure) {
    if (measure == OmdMeasure::kHullArea) {
        std::vector<HullPoint> cached;
        cached.reserve(points.size());
        for (const auto& p : points) {
            cached.push_back(make_hull_point(p));
        }
        return hull_area(cached);
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            sum += haversine(points[i], points[j]);
            ++pairs;
        }
    }
    return pairs ? sum / static_cast<double>(pairs) : 0.0;
}

DisambiguationResult omd(const DocumentInput& doc, OmdMeasure measure, std::uint64_t cap) {
    if (doc.mentions.empty()) {
        throw EmptyInput(fmt::format("doc '{}': no mentions to disambiguate", doc.doc_id));
    }
    std::uint64_t combinations = 1;
    for (const auto& m : doc.mentions) {
        const auto size = static_cast<std::uint64_t>(m.candidates.size());
        if (combinations > cap / size) {
            throw CombinationExplosion(fmt::format(
                "doc '{}': more than {} candidate combinations for overall minimum distance", doc.doc_id, cap));
        }
        combinations *= size;
    }
    if (combinations > cap) {
        throw CombinationExplosion(fmt::format("doc '{}': {} candidate combinations exceed the cap of {}",
                                               doc.doc_id, combinations, cap));
    }

    PointCloud cloud = to_point_cloud(doc);
    const std::size_t mentions = doc.mentions.size();
    std::vector<std::size_t> offset(mentions);
    for (std::size_t mi = 0, acc = 0; mi < mentions; ++mi) {
        offset[mi] = acc;
        acc += doc.mentions[mi].candidates.size();
    }

    std::vector<std::size_t> digit(mentions, 0);
    std::vector<std::size_t> best(mentions, 0);
    if (mentions > 1) {
        const std::size_t n = cloud.size();
        std::vector<double> dist;
        if (measure == OmdMeasure::kAvgPairwise) {
            dist.assign(n * n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    dist[i * n + j] = dist[j * n + i] = haversine(cloud.points[i].location, cloud.points[j].location);
                }
            }
        }
        std::vector<HullPoint> cache;
        if (measure == OmdMeasure::kHullArea) {
            for (const auto& p : cloud.points) {
                cache.push_back(make_hull_point(p.location));
            }
        }
        std::vector<std::size_t> idx(mentions);
        std::vector<HullPoint> chosen(mentions);
        const double pairs = static_cast<double>(mentions * (mentions - 1) / 2);
        double best_value = std::numeric_limits<double>::infinity();
        for (std::uint64_t c = 0; c < combinations; ++c) {
            for (std::size_t mi = 0; mi < mentions; ++mi) {
                idx[mi] = offset[mi] + digit[mi];
            }
            double value;
            if (measure == OmdMeasure::kAvgPairwise) {
                double sum = 0.0;
                for (std::size_t a = 0; a < mentions; ++a) {
                    for (std::size_t b = a + 1; b < mentions; ++b) {
                        sum += dist[idx[a] * n + idx[b]];
                    }
                }
                value = sum / pairs;
            } else {
                for (std::size_t mi = 0; mi < mentions; ++mi) {
                    chosen[mi] = cache[idx[mi]];
                }
                value = hull_area(chosen);
            }
            if (value < best_value) {
                best_value = value;
                best = digit;
            }
            // odometer, last mention fastest
            for (std::size_t mi = mentions; mi-- > 0;) {
                if (++digit[mi] < doc.mentions[mi].candidates.size()) {
                    break;
                }
                digit[mi] = 0;
            }
        }
    }

    std::vector<std::size_t> chosen_idx(mentions);
    for (std::size_t mi = 0; mi < mentions; ++mi) {
        chosen_idx[mi] = offset[mi] + best[mi];
    }
    return resolved_result(doc, std::move(cloud), chosen_idx, "omd", chosen_idx);
}

DisambiguationResult centroid_heuristic(const DocumentInput& doc) {
    PointCloud cloud = to_point_cloud(doc);
    if (cloud.empty()) {
        throw EmptyInput(fmt::format("doc '{}': no candidates", doc.doc_id));
    }
    const auto locations = cloud.locations();
    const GeoPoint first_pass = spherical_centroid(locations);
    std::vector<double> dist(locations.size());
    for (std::size_t i = 0; i < locations.size(); ++i) {
        dist[i] = haversine(locations[i], first_pass);
    }
    const double cutoff = mean_plus_two_sigma(dist);
    std::vector<GeoPoint> kept;
    std::vector<std::size_t> kept_idx;
    for (std::size_t i = 0; i < locations.size(); ++i) {
        if (dist[i] <= cutoff) {
            kept.push_back(locations[i]);
            kept_idx.push_back(i);
        }
    }
    const GeoPoint focus = spherical_centroid(kept);

    std::vector<std::size_t> chosen(doc.mentions.size());
    for (std::size_t mi = 0; mi < doc.mentions.size(); ++mi) {
        const auto& mention = doc.mentions[mi];
        std::vector<double> scores;
        for (const auto& c : mention.candidates) {
            scores.push_back(haversine(c.location, focus));
        }
        chosen[mi] = first_point_of(cloud, mi) + pick_nearest(mention, scores);
    }
    auto result = resolved_result(doc, std::move(cloud), chosen, "centroid", std::move(kept_idx));
    return result;
}

DisambiguationResult dtur(const DocumentInput& doc) {
    PointCloud cloud = to_point_cloud(doc);
    std::vector<GeoPoint> anchors;
    std::vector<std::size_t> members;
    for (std::size_t mi = 0; mi < doc.mentions.size(); ++mi) {
        if (doc.mentions[mi].candidates.size() == 1) {
            anchors.push_back(doc.mentions[mi].candidates.front().location);
            members.push_back(first_point_of(cloud, mi));
        }
    }
    if (anchors.empty()) {
        throw NoAnchors(fmt::format("doc '{}': no unambiguous mention to anchor on", doc.doc_id));
    }

    std::vector<std::size_t> chosen(doc.mentions.size());
    for (std::size_t mi = 0; mi < doc.mentions.size(); ++mi) {
        const auto& mention = doc.mentions[mi];
        std::vector<double> scores;
        for (const auto& c : mention.candidates) {
            std::vector<double> to_anchors;
            for (const auto& a : anchors) {
                to_anchors.push_back(haversine(c.location, a));
            }
            scores.push_back(mean(to_anchors));
        }
        chosen[mi] = first_point_of(cloud, mi) + pick_nearest(mention, scores);
        members.push_back(chosen[mi]);
    }
    return resolved_result(doc, std::move(cloud), chosen, "dtur", std::move(members));
}

std::vector<Cluster> dbscan(const PointCloud& cloud, double epsilon, std::size_t min_pts) {
    if (cloud.empty()) {
        throw EmptyInput("dbscan: empty point cloud");
    }
    if (!(epsilon > 0.0)) {
        throw ConfigError(fmt::format("dbscan: epsilon must be positive, got {}", epsilon));
    }
    if (min_pts < 1) {
        throw ConfigError("dbscan: min_pts must be at least 1");
    }
    const std::size_t n = cloud.size();
    std::vector<std::vector<std::size_t>> neighbours(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (haversine(cloud.points[i].location, cloud.points[j].location) <= epsilon) {
                neighbours[i].push_back(j);
                neighbours[j].push_back(i);
            }
        }
    }
    for (auto& list : neighbours) {
        std::sort(list.begin(), list.end());
    }
    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i) {
        core[i] = neighbours[i].size() + 1 >= min_pts;
    }

    DisjointSet sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!core[i]) {
            continue;
        }
        for (std::size_t j : neighbours[i]) {
            if (core[j]) {
                sets.merge(i, j);
            }
        }
    }

    // label[i] = root of the cluster i belongs to, or n for noise
    std::vector<std::size_t> label(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) {
            label[i] = sets.find(i);
            continue;
        }
        for (std::size_t j : neighbours[i]) {
            if (core[j]) {
                label[i] = sets.find(j);
                break;
            }
        }
    }

    std::vector<std::ptrdiff_t> slot(n, -1);
    std::vector<Cluster> clusters;
    for (std::size_t i = 0; i < n; ++i) {
        if (label[i] == n) {
            continue;
        }
        if (slot[label[i]] < 0) {
            slot[label[i]] = static_cast<std::ptrdiff_t>(clusters.size());
            clusters.emplace_back();
        }
        clusters[static_cast<std::size_t>(slot[label[i]])].members.push_back(i);
    }
    return clusters;
}

double kdist_epsilon(const PointCloud& cloud, std::size_t k) {
    if (k < 1) {
        throw ConfigError("kdist: k must be at least 1");
    }
    if (cloud.size() <= k) {
        throw InsufficientPoints(
            fmt::format("kdist: need more than k = {} points, got {}", k, cloud.size()));
    }
    const std::size_t n = cloud.size();
    std::vector<double> kth(n);
    std::vector<double> row;
    row.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                row.push_back(haversine(cloud.points[i].location, cloud.points[j].location));
            }
        }
        std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
        kth[i] = row[k - 1];
    }
    return mean_plus_two_sigma(kth);
}

namespace {

DisambiguationResult clusters_to_result(const DocumentInput& doc, const PointCloud& cloud,
                                        std::vector<Cluster> clusters, const char* algorithm,
                                        double epsilon) {
    if (clusters.empty()) {
        // Everything is noise: every mention fails.
        auto result = disambiguate(doc, cloud, {});
        result.algorithm = algorithm;
        result.cluster_distance = epsilon;
        return result;
    }
    auto result = disambiguate(doc, cloud, rank_clusters(std::move(clusters), cloud));
    result.algorithm = algorithm;
    result.cluster_distance = epsilon;
    return result;
}

} // namespace

DisambiguationResult dbscan_disambiguate(const DocumentInput& doc, double epsilon, std::size_t min_pts) {
    PointCloud cloud = to_point_cloud(doc);
    if (cloud.empty()) {
        throw EmptyInput(fmt::format("doc '{}': no candidates", doc.doc_id));
    }
    return clusters_to_result(doc, cloud, dbscan(cloud, epsilon, min_pts), "dbscan", epsilon);
}

DisambiguationResult kdist_disambiguate(const DocumentInput& doc, std::size_t k, std::size_t min_pts) {
    PointCloud cloud = to_point_cloud(doc);
    const double epsilon = kdist_epsilon(cloud, k);
    if (!(epsilon > 0.0)) {
        // All k-th neighbour distances are zero (stacked duplicates).
        throw InsufficientPoints(fmt::format("doc '{}': k-dist epsilon is zero", doc.doc_id));
    }
    return clusters_to_result(doc, cloud, dbscan(cloud, epsilon, min_pts), "kdist", epsilon);
}

} // namespace densityk
