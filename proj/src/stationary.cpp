#include "gstab/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gstab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_delta(double d) {
    d = std::fmod(d, kTwoPi);
    if (d > std::numbers::pi) d -= kTwoPi;
    if (d < -std::numbers::pi) d += kTwoPi;
    return d;
}

Vec difference(const Vec& x, const Vec& p, const std::vector<int>& periodic) {
    Vec d = x - p;
    for (int i : periodic) d[i] = wrap_delta(d[i]);
    return d;
}

}  // namespace

double distance_to_stationary(const StationarySet& set, const Vec& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : set.points) {
        best = std::min(best, difference(x, p, set.periodic_coords).norm());
    }
    for (const auto& [a, b] : set.segments) {
        // Project onto the segment; periodic wrap applied to the offset
        // from endpoint a (segments are assumed short relative to 2*pi).
        Vec ab = b - a;
        Vec ax = difference(x, a, set.periodic_coords);
        const double len2 = ab.squaredNorm();
        double t = len2 > 0.0 ? ax.dot(ab) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, (ax - t * ab).norm());
    }
    return best;
}

}  // namespace gstab
