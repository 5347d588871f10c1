#include "polchain/geo.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace polchain {
namespace {

constexpr double kRadPerMicrodeg = std::numbers::pi / 180.0 * 1e-6;

double sq(double x) { return x * x; }

}  // namespace

GeoLocation GeoLocation::from_degrees(double lat, double lon) {
    auto lon_u = static_cast<std::int64_t>(std::llround(lon * 1e6));
    constexpr std::int64_t span = 2LL * kMaxLonMicrodeg;
    lon_u = ((lon_u + kMaxLonMicrodeg) % span + span) % span - kMaxLonMicrodeg;
    GeoLocation loc{static_cast<std::int32_t>(std::llround(lat * 1e6)),
                    static_cast<std::int32_t>(lon_u)};
    require_valid(loc);
    return loc;
}

bool is_valid(const GeoLocation& loc) noexcept {
    return loc.lat_microdeg >= -kMaxLatMicrodeg && loc.lat_microdeg <= kMaxLatMicrodeg &&
           loc.lon_microdeg >= -kMaxLonMicrodeg && loc.lon_microdeg < kMaxLonMicrodeg;
}

void require_valid(const GeoLocation& loc) {
    if (!is_valid(loc))
        throw InvalidCoordinates("coordinates out of range: lat_microdeg=" +
                                 std::to_string(loc.lat_microdeg) +
                                 " lon_microdeg=" + std::to_string(loc.lon_microdeg));
}

// Haversine with both h and 1-h written as sums of non-negative terms, so the
// atan2 form keeps full precision from coincident points up to antipodes.
double distance_m(const GeoLocation& a, const GeoLocation& b) {
    require_valid(a);
    require_valid(b);
    const double half_dlat = 0.5 * (b.lat_microdeg - a.lat_microdeg) * kRadPerMicrodeg;
    const double half_sum = 0.5 * (double(a.lat_microdeg) + double(b.lat_microdeg)) * kRadPerMicrodeg;
    const double half_dlon = 0.5 * (double(b.lon_microdeg) - double(a.lon_microdeg)) * kRadPerMicrodeg;

    const double s_dlat = sq(std::sin(half_dlat)), c_dlat = sq(std::cos(half_dlat));
    const double s_sum = sq(std::sin(half_sum)), c_sum = sq(std::cos(half_sum));
    const double s_dlon = sq(std::sin(half_dlon)), c_dlon = sq(std::cos(half_dlon));

    const double h = s_dlat * c_dlon + c_sum * s_dlon;
    const double one_minus_h = c_dlat * c_dlon + s_sum * s_dlon;
    return 2.0 * kEarthRadiusM * std::atan2(std::sqrt(h), std::sqrt(one_minus_h));
}

bool within_range(const GeoLocation& a, const GeoLocation& b, const RangeParams& r) {
    return distance_m(a, b) <= r.max_range_m;
}

GeoLocation offset_m(const GeoLocation& origin, double north_m, double east_m) {
    constexpr double m_per_deg = kEarthRadiusM * std::numbers::pi / 180.0;
    const double lat = origin.lat_deg() + north_m / m_per_deg;
    const double coslat = std::cos(origin.lat_deg() * std::numbers::pi / 180.0);
    const double lon = origin.lon_deg() + east_m / (m_per_deg * coslat);
    return GeoLocation::from_degrees(lat, lon);
}

}  // namespace polchain
