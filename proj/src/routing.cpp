#include "pwe/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace pwe {

std::string_view to_string(RouteFailure f) {
    switch (f) {
    case RouteFailure::NoHit:
        return "no_hit";
    case RouteFailure::NoCandidate:
        return "no_candidate";
    case RouteFailure::Unreachable:
        return "unreachable";
    }
    return "unknown";
}

double deviation_angle(const Vec3 &desired, const Vec3 &realized) {
    // Same angle as acos(clamp(dot)), without its sqrt(eps) blur near 0 and 180 degrees.
    return std::atan2(norm(cross(desired, realized)), dot(desired, realized)) * (180.0 / std::numbers::pi);
}

std::optional<int> select_last_ris(const Vec3 &point, std::span<const RisUnit> ris_units,
                                   std::span<const bool> available, VertexId antenna, const PweGraph &graph) {
    std::optional<int> best;
    double best_d2 = std::numeric_limits<double>::infinity();
    const auto first_ris = graph.ris_vertex(0);
    const auto end_ris = static_cast<VertexId>(first_ris + graph.ris_count());
    // Neighbor lists are ascending, so the RIS ids come out ascending too.
    for (VertexId v : graph.neighbors(antenna)) {
        if (v < first_ris || v >= end_ris) {
            continue;
        }
        const int id = static_cast<int>(v - first_ris);
        if (!available.empty() && !available[id]) {
            continue;
        }
        const double d2 = distance_sq(ris_units[id].center, point);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = id;
        }
    }
    return best;
}

RouteSet get_routes(const Scene &scene, const PweGraph &graph, const WavefrontSpec &spec) {
    const std::size_t m = scene.rx.size();
    if (spec.doas.size() != m) {
        throw std::invalid_argument("wavefront has " + std::to_string(spec.doas.size()) + " DoAs but the array has " +
                                    std::to_string(m) + " antennas");
    }

    // Antennas receive; they never relay. (std::vector<bool> cannot back a span.)
    auto banned = std::make_unique<bool[]>(graph.vertex_count());
    for (std::size_t i = 0; i < m; ++i) {
        banned[graph.antenna_vertex(static_cast<int>(i))] = true;
    }
    const std::span<const bool> banned_span(banned.get(), graph.vertex_count());
    auto available = std::make_unique<bool[]>(scene.ris_units.size());
    std::fill_n(available.get(), scene.ris_units.size(), true);
    const std::span<const bool> available_span(available.get(), scene.ris_units.size());

    RouteSet out;
    for (std::size_t i = 0; i < m; ++i) {
        const int ai = static_cast<int>(i);
        const Vec3 &ant = scene.rx.antennas[i];
        const Vec3 &doa = spec.doas[i];

        const auto hit = ray_wall_point(ant, doa, scene.walls);
        if (!hit) {
            out.failures.push_back({ai, RouteFailure::NoHit});
            continue;
        }
        const VertexId ant_v = graph.antenna_vertex(ai);
        const auto last = select_last_ris(hit->point, scene.ris_units, available_span, ant_v, graph);
        if (!last) {
            out.failures.push_back({ai, RouteFailure::NoCandidate});
            continue;
        }
        available[*last] = false;

        auto path = bfs_shortest_path(graph, graph.ris_vertex(*last), graph.tx_vertex(), banned_span);
        if (!path) {
            out.failures.push_back({ai, RouteFailure::Unreachable});
            continue;
        }
        std::reverse(path->begin(), path->end());

        const Vec3 realized = normalized(scene.ris_units[*last].center - ant);
        out.routes.push_back(Route{ai, *last, std::move(*path), realized, deviation_angle(doa, realized)});
    }
    return out;
}

}  // namespace pwe
