#pragma once

#include "gstab/system.hpp"

#include <utility>
#include <vector>

namespace gstab {

/// Union of isolated equilibria and straight segments; the target set of
/// convergence verdicts. Coordinates listed in `periodic_coords` are
/// compared modulo 2*pi.
struct StationarySet {
    std::vector<Vec> points;
    std::vector<std::pair<Vec, Vec>> segments;
    std::vector<int> periodic_coords;

    bool empty() const { return points.empty() && segments.empty(); }
};

/// Euclidean distance from x to the nearest element of the set, with
/// periodic coordinates wrapped.
double distance_to_stationary(const StationarySet& set, const Vec& x);

}  // namespace gstab
