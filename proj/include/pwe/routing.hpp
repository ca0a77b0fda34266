#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pwe/geometry.hpp"
#include "pwe/graph.hpp"
#include "pwe/scene.hpp"

namespace pwe {

/// Desired arrival direction per antenna. Each doa points from the antenna
/// toward where the wave should come from.
struct WavefrontSpec {
    std::vector<Vec3> doas;
};

struct Route {
    int antenna = 0;
    int last_ris_id = 0;
    std::vector<VertexId> path;  // Tx -> ... -> last RIS
    Vec3 realized_doa;
    double phi_deg = 0.0;
};

enum class RouteFailure { NoHit, NoCandidate, Unreachable };

std::string_view to_string(RouteFailure f);

struct FailedAntenna {
    int antenna = 0;
    RouteFailure reason = RouteFailure::NoHit;
};

struct RouteSet {
    std::vector<Route> routes;
    std::vector<FailedAntenna> failures;
};

/// Angle in degrees between two unit vectors, in [0, 180].
double deviation_angle(const Vec3 &desired, const Vec3 &realized);

/// Closest RIS center to `point` among units that are still `available`
/// (indexed by RIS id; empty means all) and have LoS to `antenna`.
/// Ties go to the smallest id. Empty when no such unit exists.
std::optional<int> select_last_ris(const Vec3 &point, std::span<const RisUnit> ris_units,
                                   std::span<const bool> available, VertexId antenna, const PweGraph &graph);

/// Greedy per-antenna routing in ascending antenna order: cast the desired
/// ray to a wall, take the nearest visible free RIS as the last hop, retire
/// it, then find the fewest-hop chain back to the transmitter.
/// Throws std::invalid_argument if the spec size differs from the array size.
RouteSet get_routes(const Scene &scene, const PweGraph &graph, const WavefrontSpec &spec);

}  // namespace pwe
