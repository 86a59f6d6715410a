#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace densityk {

inline constexpr double kEarthRadiusMeters = 6'371'000.0;

/// WGS84 location in decimal degrees. Latitude is checked on construction,
/// longitude is wrapped into [-180, 180).
class GeoPoint {
public:
    GeoPoint() = default;
    /// Throws InvalidCoordinate for non-finite values or |lat| > 90.
    GeoPoint(double lat, double lon);

    double lat() const noexcept { return lat_; }
    double lon() const noexcept { return lon_; }

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

private:
    double lat_ = 0.0;
    double lon_ = 0.0;
};

/// Great-circle distance in meters on a sphere of radius kEarthRadiusMeters.
double haversine(const GeoPoint& a, const GeoPoint& b) noexcept;

/// Point reached by travelling `distance_m` from `origin` along the initial
/// bearing `bearing_rad` (clockwise from north).
GeoPoint destination(const GeoPoint& origin, double bearing_rad, double distance_m);

/// Every unordered pair distance, stored once and sorted ascending.
struct DistanceList {
    std::vector<double> values;

    std::size_t count() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }
    double max() const { return values.back(); }
};

/// All n(n-1)/2 pair distances, or only those <= upper_bound when given.
/// Throws EmptyInput for an empty point list.
DistanceList pairwise_distances(std::span<const GeoPoint> points,
                                std::optional<double> upper_bound = std::nullopt);

/// Mean of the unit vectors of `points`, projected back onto the sphere.
/// Throws EmptyInput, or DegenerateCentroid when the mean vector vanishes.
GeoPoint spherical_centroid(std::span<const GeoPoint> points);

} // namespace densityk
