#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>

namespace polchain {

inline constexpr double kEarthRadiusM = 6'371'000.0;
inline constexpr std::int32_t kMaxLatMicrodeg = 90'000'000;
inline constexpr std::int32_t kMaxLonMicrodeg = 180'000'000;

class InvalidCoordinates : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Latitude/longitude in integer micro-degrees. Integer storage gives an exact
/// byte encoding for signing.
struct GeoLocation {
    std::int32_t lat_microdeg = 0;
    std::int32_t lon_microdeg = 0;

    auto operator<=>(const GeoLocation&) const = default;
    bool operator==(const GeoLocation&) const = default;

    /// Rounds to the nearest micro-degree. Longitude is wrapped into [-180, 180).
    static GeoLocation from_degrees(double lat, double lon);
    double lat_deg() const { return lat_microdeg * 1e-6; }
    double lon_deg() const { return lon_microdeg * 1e-6; }
};

bool is_valid(const GeoLocation& loc) noexcept;
/// Throws InvalidCoordinates when out of range.
void require_valid(const GeoLocation& loc);

struct RangeParams {
    double max_range_m = 100.0;
};

/// Great-circle distance on a sphere of radius kEarthRadiusM.
double distance_m(const GeoLocation& a, const GeoLocation& b);

/// distance_m(a, b) <= r.max_range_m (inclusive boundary).
bool within_range(const GeoLocation& a, const GeoLocation& b, const RangeParams& r);

/// Location displaced by the given metres north and east (local tangent-plane
/// approximation, fine at the few-kilometre scale used by the simulator).
GeoLocation offset_m(const GeoLocation& origin, double north_m, double east_m);

}  // namespace polchain
