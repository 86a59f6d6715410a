#include "densityk/geo.hpp"

#include "densityk/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace densityk {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double wrap_longitude(double lon) {
    double wrapped = std::fmod(lon + 180.0, 360.0);
    if (wrapped < 0.0) {
        wrapped += 360.0;
    }
    return wrapped - 180.0;
}

using Vec3 = std::array<double, 3>;

Vec3 to_unit_vector(const GeoPoint& p) {
    const double lat = p.lat() * kDegToRad;
    const double lon = p.lon() * kDegToRad;
    return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

} // namespace

GeoPoint::GeoPoint(double lat, double lon) {
    if (!std::isfinite(lat) || !std::isfinite(lon)) {
        throw InvalidCoordinate(fmt::format("non-finite coordinate ({}, {})", lat, lon));
    }
    if (lat < -90.0 || lat > 90.0) {
        throw InvalidCoordinate(fmt::format("latitude {} outside [-90, 90]", lat));
    }
    lat_ = lat;
    lon_ = (lon >= -180.0 && lon < 180.0) ? lon : wrap_longitude(lon);
}

double haversine(const GeoPoint& a, const GeoPoint& b) noexcept {
    // Absolute differences and a commutative product keep the result
    // bit-for-bit symmetric in (a, b).
    const double lat1 = a.lat() * kDegToRad;
    const double lat2 = b.lat() * kDegToRad;
    const double half_dlat = std::abs(b.lat() - a.lat()) * kDegToRad * 0.5;
    const double half_dlon = std::abs(b.lon() - a.lon()) * kDegToRad * 0.5;
    const double s_lat = std::sin(half_dlat);
    const double s_lon = std::sin(half_dlon);
    const double h = s_lat * s_lat + (std::cos(lat1) * std::cos(lat2)) * s_lon * s_lon;
    return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(h)));
}

GeoPoint destination(const GeoPoint& origin, double bearing_rad, double distance_m) {
    const double lat1 = origin.lat() * kDegToRad;
    const double lon1 = origin.lon() * kDegToRad;
    const double angular = distance_m / kEarthRadiusMeters;
    const double sin_lat2 = std::sin(lat1) * std::cos(angular) +
                            std::cos(lat1) * std::sin(angular) * std::cos(bearing_rad);
    const double lat2 = std::asin(std::clamp(sin_lat2, -1.0, 1.0));
    const double lon2 =
        lon1 + std::atan2(std::sin(bearing_rad) * std::sin(angular) * std::cos(lat1),
                          std::cos(angular) - std::sin(lat1) * std::sin(lat2));
    return GeoPoint(std::clamp(lat2 * kRadToDeg, -90.0, 90.0), lon2 * kRadToDeg);
}

DistanceList pairwise_distances(std::span<const GeoPoint> points, std::optional<double> upper_bound) {
    if (points.empty()) {
        throw EmptyInput("pairwise_distances: no points");
    }
    DistanceList out;
    const std::size_t n = points.size();
    if (!upper_bound) {
        out.values.reserve(n * (n - 1) / 2);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = haversine(points[i], points[j]);
            if (!upper_bound || d <= *upper_bound) {
                out.values.push_back(d);
            }
        }
    }
    std::sort(out.values.begin(), out.values.end());
    return out;
}

GeoPoint spherical_centroid(std::span<const GeoPoint> points) {
    if (points.empty()) {
        throw EmptyInput("spherical_centroid: no points");
    }
    if (points.size() == 1) {
        return points.front();
    }
    // Summing in a canonical order makes the result independent of input order.
    std::vector<Vec3> vectors;
    vectors.reserve(points.size());
    for (const auto& p : points) {
        vectors.push_back(to_unit_vector(p));
    }
    std::sort(vectors.begin(), vectors.end());

    Vec3 sum{0.0, 0.0, 0.0};
    for (const auto& v : vectors) {
        sum[0] += v[0];
        sum[1] += v[1];
        sum[2] += v[2];
    }
    const double n = static_cast<double>(vectors.size());
    const Vec3 mean{sum[0] / n, sum[1] / n, sum[2] / n};
    const double norm = std::sqrt(mean[0] * mean[0] + mean[1] * mean[1] + mean[2] * mean[2]);
    if (norm < 1e-9) {
        throw DegenerateCentroid(
            fmt::format("spherical_centroid: mean vector magnitude {} < 1e-9", norm));
    }
    const double lat = std::atan2(mean[2], std::hypot(mean[0], mean[1])) * kRadToDeg;
    const double lon = std::atan2(mean[1], mean[0]) * kRadToDeg;
    return GeoPoint(std::clamp(lat, -90.0, 90.0), lon);
}

} // namespace densityk
